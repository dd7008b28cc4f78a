#pragma once

#include <optional>

#include "cvkey/gaussian.hpp"

namespace cvkey {

enum class ResourceKind {
  Tmsv,                 // two-mode squeezed vacuum
  Subtracted,           // k-photon-subtracted TMSV
  ZeroPhotonCatalysis,  // k = 0 outcome; CM-identical to Subtracted(0)
  ZpcWithLoss,          // ZPC with ancilla photon loss probability p
};

struct ResourceSpec {
  ResourceKind kind = ResourceKind::Tmsv;
  double r = 0.5;      // squeezing parameter, > 0
  double t_bs = 0.9;   // ancilla beamsplitter transmittance in (0, 1]
  int k = 0;           // subtracted photon number, 0..20 (Subtracted only)
  double loss_p = 0;   // ancilla loss probability in [0, 1] (ZpcWithLoss only)

  void validate() const;  // throws config_error
};

// Mode-mismatch noise delta = N eps^2 nbar / (M alpha^2): N unmatched thermal
// modes leaking into detectors that match only M signal modes.
struct MismatchParams {
  int n_unmatched = 0;  // N >= 0
  int m_matched = 1;    // M >= 1
  double epsilon = 0;   // per-mode detection amplitude in [0, 1]
  double alpha = 1;     // local-oscillator amplitude, > 0
  double nbar = 0;      // mean thermal photons per unmatched mode, >= 0
  std::optional<double> delta_override;  // direct delta, wins when set

  static MismatchParams direct(double delta);
};

// A = B = cosh(2r) I, C = sinh(2r) diag(1, -1).
TwoModeCM tmsv(double r);

// Conditional CM after subtracting k photons from mode B through a t_bs
// beamsplitter: A = x I, B = y I, C = z diag(1, -1) with
//   x = 2(1+k)/(1 - tau^2 t_bs) - 1,  y = 2(1 + k tau^2 t_bs)/(1 - tau^2 t_bs) - 1,
//   z = 2 sqrt(t_bs) tau (1+k)/(1 - tau^2 t_bs),  tau = tanh r.
TwoModeCM subtracted_tmsv(double r, double t_bs, int k);

// Heralding probability P(k) = tau^{2k} (1-t_bs)^k / (mu^2 (1 - tau^2 t_bs)^{k+1}).
// Unlike the CM factory, k is uncapped (scalar series term).
double subtraction_probability(double r, double t_bs, int k);

// Convex mixture p * diag(cosh2r, cosh2r, 1, 1) + (1-p) * zpc CM: with
// probability p the "no click" outcome was a lost photon, not a vacuum
// projection, leaving Bob's mode in a correlation-free thermal state.
TwoModeCM zpc_with_loss(double r, double t_bs, double p);

// Adds delta to all four diagonal entries; off-diagonals unchanged.
TwoModeCM apply_mode_mismatch(const TwoModeCM& v, double delta);

// delta_override wins when present, otherwise N eps^2 nbar / (M alpha^2).
double delta_from_multimode(const MismatchParams& mm);

TwoModeCM build_source(const ResourceSpec& spec);

// Inverts cosh 2r = c for the squeezing parameter (c > 1).
double squeezing_from_cosh2r(double cosh2r);

}  // namespace cvkey
