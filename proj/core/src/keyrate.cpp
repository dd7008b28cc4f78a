#include "cvkey/keyrate.hpp"

#include <algorithm>
#include <cmath>

#include "cvkey/errors.hpp"

namespace cvkey {

namespace {

struct HolevoParts {
  double chi;
  double l1, l2, l3;
  OneModeCM conditional;
};

double thermal_occupation(double lambda) {
  double x = (lambda - 1) / 2;
  if (x < 0) {
    if (x < -1e-9) throw numerical_error("symplectic eigenvalue below vacuum");
    x = 0;
  }
  return x;
}

HolevoParts holevo_parts(const TwoModeCM& v) {
  const auto [l1, l2] = symplectic_spectrum(v);
  OneModeCM cond = heterodyne_conditional(v);
  const double l3 = single_mode_symplectic(cond);
  double chi = g_entropy(thermal_occupation(l1)) + g_entropy(thermal_occupation(l2)) -
               g_entropy(thermal_occupation(l3));
  if (chi < 0) {
    if (chi < -1e-9) throw numerical_error("negative Holevo bound");
    chi = 0;
  }
  return {chi, l1, l2, l3, cond};
}

}  // namespace

double mutual_information(const TwoModeCM& v) {
  const OneModeCM cond = heterodyne_conditional(v);
  const Eigen::Matrix2d a = v.block_a();
  const Eigen::Matrix2d& cm = cond.matrix();
  // The heterodyne duplexing (V+1)/2 applies to both numerator and
  // denominator, so the /2 cancels in the ratio.
  const double rx = (a(0, 0) + 1) / (cm(0, 0) + 1);
  const double rp = (a(1, 1) + 1) / (cm(1, 1) + 1);
  if (!(rx > 0) || !(rp > 0))
    throw numerical_error("nonpositive heterodyne variance ratio");
  return (std::log2(rx) + std::log2(rp)) / 2;
}

double holevo_bound(const TwoModeCM& v) { return holevo_parts(v).chi; }

RateBreakdown secret_key_rate(const ResourceSpec& spec, const MismatchParams& mm,
                              const ChannelParams& ch) {
  spec.validate();
  ch.validate();
  const double delta = delta_from_multimode(mm);
  const TwoModeCM source = build_source(spec);
  const TwoModeCM noisy = apply_mode_mismatch(source, delta);
  const TwoModeCM shared = transmit(noisy, ch);
  const double i_ab = mutual_information(shared);
  HolevoParts h = holevo_parts(shared);
  const double raw = ch.beta * i_ab - h.chi;
  return {i_ab,  h.chi, std::max(0.0, raw), h.l1,
          h.l2,  h.l3,  shared,             h.conditional};
}

}  // namespace cvkey
