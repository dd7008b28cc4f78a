#pragma once

#include "cvkey/gaussian.hpp"

namespace cvkey {

struct ChannelParams {
  double length_km = 15;     // fiber length L >= 0
  double loss_coeff = 0.02;  // per-km exponent l: T = 0.5 * 10^(-l L)
  double eta = 1.0;          // homodyne detector efficiency in (0, 1]
  double beta = 0.95;        // reconciliation efficiency in (0, 1]

  void validate() const;  // throws config_error
};

struct NoiseFigures {
  double chi_line;  // (1 - T) / T
  double chi_homo;  // (1 - eta) / eta
  double chi_tot;   // chi_line + 2 chi_homo / T
};

// T = 0.5 * 10^(-l L); the 1/2 prefactor is part of the no-switching model.
double transmittance(double length_km, double loss_coeff = 0.02);

NoiseFigures noise_figures(double t, double eta);

// Channel map: A' = A, C' = sqrt(T) C, B' = T (B + chi_tot I).
TwoModeCM transmit(const TwoModeCM& v, double t, double chi_tot);
TwoModeCM transmit(const TwoModeCM& v, const ChannelParams& ch);

}  // namespace cvkey
