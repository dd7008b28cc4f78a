#include "cvkey/resources.hpp"

#include <cmath>

#include "cvkey/errors.hpp"

namespace cvkey {

namespace {

constexpr int kMaxSubtraction = 20;

void check_r(double r) {
  if (!(r > 0)) throw config_error("squeezing r must be > 0");
}

void check_tbs(double t_bs) {
  if (!(t_bs > 0 && t_bs <= 1))
    throw config_error("beamsplitter transmittance t_bs must lie in (0, 1]");
}

Eigen::Matrix2d sigma_z(double z) {
  Eigen::Matrix2d m;
  m << z, 0, 0, -z;
  return m;
}

// 1 - tanh^2(r) t rewritten as sech^2 r + tanh^2(r) (1 - t): a sum of
// positives, so the TMSV limit t -> 1 keeps full precision at large r where
// the direct subtraction loses ~1e-12.
double ancilla_denominator(double tau2, double t_bs, double r) {
  const double sech = 1 / std::cosh(r);
  return sech * sech + tau2 * (1 - t_bs);
}

}  // namespace

void ResourceSpec::validate() const {
  check_r(r);
  if (kind != ResourceKind::Tmsv) check_tbs(t_bs);
  if (kind == ResourceKind::Subtracted && (k < 0 || k > kMaxSubtraction))
    throw config_error("subtracted photon number k must lie in 0..20");
  if (kind == ResourceKind::ZpcWithLoss && !(loss_p >= 0 && loss_p <= 1))
    throw config_error("ancilla loss probability p must lie in [0, 1]");
}

MismatchParams MismatchParams::direct(double delta) {
  MismatchParams mm;
  mm.delta_override = delta;
  return mm;
}

TwoModeCM tmsv(double r) {
  check_r(r);
  const double c = std::cosh(2 * r);
  const double s = std::sinh(2 * r);
  const Eigen::Matrix2d diag = c * Eigen::Matrix2d::Identity();
  return TwoModeCM(diag, diag, sigma_z(s));
}

TwoModeCM subtracted_tmsv(double r, double t_bs, int k) {
  check_r(r);
  check_tbs(t_bs);
  if (k < 0 || k > kMaxSubtraction)
    throw config_error("subtracted photon number k must lie in 0..20");
  const double tau = std::tanh(r);
  const double d = ancilla_denominator(tau * tau, t_bs, r);
  const double x = 2 * (1 + k) / d - 1;
  const double y = 2 * (1 + k * tau * tau * t_bs) / d - 1;
  const double z = 2 * std::sqrt(t_bs) * tau * (1 + k) / d;
  return TwoModeCM(x * Eigen::Matrix2d::Identity(), y * Eigen::Matrix2d::Identity(),
                   sigma_z(z));
}

double subtraction_probability(double r, double t_bs, int k) {
  check_r(r);
  check_tbs(t_bs);
  if (k < 0) throw config_error("photon number k must be >= 0");
  const double mu = std::cosh(r);
  const double tau2 = std::tanh(r) * std::tanh(r);
  const double d = ancilla_denominator(tau2, t_bs, r);
  const double p0 = 1 / (mu * mu * d);
  if (k == 0) return p0;
  return p0 * std::pow(tau2 * (1 - t_bs) / d, k);
}

TwoModeCM zpc_with_loss(double r, double t_bs, double p) {
  if (!(p >= 0 && p <= 1))
    throw config_error("ancilla loss probability p must lie in [0, 1]");
  const TwoModeCM zpc = subtracted_tmsv(r, t_bs, 0);
  const double c = std::cosh(2 * r);
  Eigen::Matrix4d lost = Eigen::Matrix4d::Identity();
  lost(0, 0) = lost(1, 1) = c;
  return TwoModeCM(p * lost + (1 - p) * zpc.matrix());
}

TwoModeCM apply_mode_mismatch(const TwoModeCM& v, double delta) {
  if (!(delta >= 0)) throw config_error("mode-mismatch delta must be >= 0");
  Eigen::Matrix4d m = v.matrix();
  m.diagonal().array() += delta;
  return TwoModeCM(m);
}

double delta_from_multimode(const MismatchParams& mm) {
  if (mm.delta_override) {
    if (!(*mm.delta_override >= 0))
      throw config_error("mode-mismatch delta must be >= 0");
    return *mm.delta_override;
  }
  if (mm.n_unmatched < 0) throw config_error("unmatched mode count N must be >= 0");
  if (mm.m_matched < 1) throw config_error("matched mode count M must be >= 1");
  if (!(mm.epsilon >= 0 && mm.epsilon <= 1))
    throw config_error("detection amplitude epsilon must lie in [0, 1]");
  if (!(mm.alpha > 0)) throw config_error("local-oscillator amplitude alpha must be > 0");
  if (!(mm.nbar >= 0)) throw config_error("thermal occupation nbar must be >= 0");
  return mm.n_unmatched * mm.epsilon * mm.epsilon * mm.nbar /
         (mm.m_matched * mm.alpha * mm.alpha);
}

TwoModeCM build_source(const ResourceSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ResourceKind::Tmsv:
      return tmsv(spec.r);
    case ResourceKind::Subtracted:
      return subtracted_tmsv(spec.r, spec.t_bs, spec.k);
    case ResourceKind::ZeroPhotonCatalysis:
      return subtracted_tmsv(spec.r, spec.t_bs, 0);
    case ResourceKind::ZpcWithLoss:
      return zpc_with_loss(spec.r, spec.t_bs, spec.loss_p);
  }
  throw config_error("unknown resource kind");
}

double squeezing_from_cosh2r(double cosh2r) {
  if (!(cosh2r > 1)) throw config_error("cosh 2r must exceed 1");
  return std::acosh(cosh2r) / 2;
}

}  // namespace cvkey
