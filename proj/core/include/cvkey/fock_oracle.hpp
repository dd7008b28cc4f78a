#pragma once

#include <Eigen/Dense>

#include "cvkey/gaussian.hpp"

namespace cvkey {

// Brute-force verifier for the subtracted/catalysed CM formulas: builds the
// TMSV in a truncated Fock basis, applies the ancilla beamsplitter and
// k-photon projection literally, and measures probabilities and moments.
// Same quadrature convention as everywhere else: x = a + a^dag,
// p = -i(a - a^dag), vacuum variance 1.

struct FockState {
  // amp(n_a, n_b), square cutoff x cutoff grid of amplitudes.
  Eigen::MatrixXcd amp;

  int cutoff() const { return static_cast<int>(amp.rows()); }
  double norm_sq() const { return amp.squaredNorm(); }
  // Probability weight sitting on either index = cutoff-1 slice; the
  // truncation is adequate when this is small.
  double truncation_tail() const;
};

// Schmidt form sqrt(1 - tau^2) tau^n on |n, n>, tau = tanh r.  Requires
// tau^(2 cutoff) < 1e-12.
FockState tmsv_fock(double r, int cutoff = 60);

// Doubles the cutoff (up to 256) until the truncation precondition holds.
FockState tmsv_fock_auto(double r, int initial_cutoff = 60);

// Mixes mode B with a vacuum ancilla on a sqrt(t_bs) beamsplitter and
// projects the ancilla onto |k><k|; returns the normalized conditional state.
FockState subtract_ancilla(const FockState& state, double t_bs, int k,
                           double* probability = nullptr);

struct ProjectionResult {
  double probability;
  TwoModeCM cm;
};

// Probability of the k-photon ancilla outcome and the second moments of the
// conditional state.
ProjectionResult project_ancilla(const FockState& state, double t_bs, int k);

// <x_A, p_A, x_B, p_B> of the state (real parts of ladder-operator sums).
Eigen::Vector4d first_moments(const FockState& state);

// Symmetrized second moments Re<phi_i|phi_j> with phi_i = R_i |psi>; equals
// the covariance matrix for zero-mean states.
TwoModeCM second_moments(const FockState& state);

// Mean photon number of mode A (0) or B (1).
double mean_photons(const FockState& state, int mode);

struct OracleComparison {
  double probability_closed;  // closed-form P(k)
  double probability_fock;    // projection norm
  double probability_err;     // |difference|
  double cm_err;              // max entrywise |closed CM - oracle CM|
};

OracleComparison compare_with_closed_form(double r, double t_bs, int k,
                                          int cutoff = 60);

}  // namespace cvkey
