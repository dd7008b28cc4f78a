#include "cvkey/channel.hpp"

#include <cmath>

#include "cvkey/errors.hpp"

namespace cvkey {

void ChannelParams::validate() const {
  if (!(length_km >= 0)) throw config_error("fiber length must be >= 0");
  if (!(loss_coeff >= 0)) throw config_error("loss coefficient must be >= 0");
  if (!(eta > 0 && eta <= 1))
    throw config_error("detector efficiency eta must lie in (0, 1]");
  if (!(beta > 0 && beta <= 1))
    throw config_error("reconciliation efficiency beta must lie in (0, 1]");
}

double transmittance(double length_km, double loss_coeff) {
  if (!(length_km >= 0)) throw config_error("fiber length must be >= 0");
  if (!(loss_coeff >= 0)) throw config_error("loss coefficient must be >= 0");
  return 0.5 * std::pow(10.0, -loss_coeff * length_km);
}

NoiseFigures noise_figures(double t, double eta) {
  if (!(t > 0 && t <= 1)) throw config_error("transmittance must lie in (0, 1]");
  if (!(eta > 0 && eta <= 1))
    throw config_error("detector efficiency eta must lie in (0, 1]");
  const double chi_line = (1 - t) / t;
  const double chi_homo = (1 - eta) / eta;
  return {chi_line, chi_homo, chi_line + 2 * chi_homo / t};
}

TwoModeCM transmit(const TwoModeCM& v, double t, double chi_tot) {
  if (!(t > 0 && t <= 1)) throw config_error("transmittance must lie in (0, 1]");
  if (!(chi_tot >= 0)) throw config_error("channel noise must be >= 0");
  const Eigen::Matrix2d b =
      t * (v.block_b() + chi_tot * Eigen::Matrix2d::Identity());
  return TwoModeCM(v.block_a(), b, std::sqrt(t) * v.block_c());
}

TwoModeCM transmit(const TwoModeCM& v, const ChannelParams& ch) {
  ch.validate();
  const double t = transmittance(ch.length_km, ch.loss_coeff);
  return transmit(v, t, noise_figures(t, ch.eta).chi_tot);
}

}  // namespace cvkey
