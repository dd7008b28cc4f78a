#include "cvkey/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "cvkey/errors.hpp"

namespace cvkey {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kDiscTol = 1e-9;

double det2(const Eigen::Matrix2d& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

Eigen::Matrix2d inv2(const Eigen::Matrix2d& m, double det) {
  Eigen::Matrix2d r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r / det;
}

// Shared spectrum evaluation from the invariants (Delta, det V) with the
// discriminant Delta^2 - 4 detV supplied by the caller.  The smaller root is
// recovered as sqrt(detV)/larger to avoid cancellation near pure states.
std::pair<double, double> spectrum_from_parts(double delta, double dv,
                                              double disc) {
  if (dv < 0) {
    if (dv < -kDiscTol) throw numerical_error("negative covariance determinant");
    dv = 0;
  }
  if (disc < 0) {
    if (disc < -kDiscTol)
      throw numerical_error("complex symplectic spectrum (discriminant below -1e-9)");
    disc = 0;
  }
  const double big2 = (delta + std::sqrt(disc)) / 2;
  if (!(big2 > 0)) throw numerical_error("nonpositive symplectic invariant");
  const double l1 = std::sqrt(big2);
  return {l1, std::sqrt(dv) / l1};
}

std::pair<double, double> spectrum_from_invariants(double delta, double dv) {
  return spectrum_from_parts(delta, dv, delta * delta - 4 * dv);
}

// A = aI, B = bI, C = diag(cp, cm): the shape every CM in the source/channel
// pipeline has, detected by exact comparison so hand-built matrices fall back
// to the generic route.  In this shape the discriminant factors as
// (a^2-b^2)^2 + 4 (a cp + b cm)(a cm + b cp), which sidesteps the catastrophic
// cancellation of Delta^2 - 4 detV near degenerate spectra (pure or symmetric
// states), where the generic form loses half the significant digits and the
// square root inflates the loss to ~1e-6.
struct StandardForm {
  double a, b, cp, cm;
};

bool standard_form(const Eigen::Matrix4d& m, StandardForm& s) {
  if (m(0, 1) != 0 || m(2, 3) != 0 || m(0, 3) != 0 || m(1, 2) != 0) return false;
  if (m(0, 0) != m(1, 1) || m(2, 2) != m(3, 3)) return false;
  s = {m(0, 0), m(2, 2), m(0, 2), m(1, 3)};
  return true;
}

// pt flips the sign of the p-quadrature correlation (partial transposition of
// the second mode), which is the only invariant change it causes.
std::pair<double, double> standard_spectrum(const StandardForm& s, bool pt) {
  const double cm = pt ? -s.cm : s.cm;
  const double p = s.cp * cm;
  const double delta = (s.a * s.a + p) + (s.b * s.b + p);
  const double dv = (s.a * s.b - s.cp * s.cp) * (s.a * s.b - cm * cm);
  const double diff = (s.a - s.b) * (s.a + s.b);
  const double disc =
      diff * diff + 4 * (s.a * s.cp + s.b * cm) * (s.a * cm + s.b * s.cp);
  return spectrum_from_parts(delta, dv, disc);
}

}  // namespace

OneModeCM::OneModeCM(const Eigen::Matrix2d& m) : m_(m) {
  if (std::abs(m(0, 1) - m(1, 0)) > kSymTol)
    throw config_error("one-mode CM must be symmetric");
  if (!(m(0, 0) > 0) || !(m(1, 1) > 0))
    throw config_error("one-mode CM needs positive diagonal");
  m_(0, 1) = m_(1, 0) = (m(0, 1) + m(1, 0)) / 2;
}

double OneModeCM::det() const { return det2(m_); }

TwoModeCM::TwoModeCM(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b,
                     const Eigen::Matrix2d& c) {
  m_.block<2, 2>(0, 0) = (a + a.transpose()) / 2;
  m_.block<2, 2>(2, 2) = (b + b.transpose()) / 2;
  m_.block<2, 2>(0, 2) = c;
  m_.block<2, 2>(2, 0) = c.transpose();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymTol ||
      (b - b.transpose()).cwiseAbs().maxCoeff() > kSymTol)
    throw config_error("A and B blocks must be symmetric");
  check();
}

TwoModeCM::TwoModeCM(const Eigen::Matrix4d& m) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymTol)
    throw config_error("two-mode CM must be symmetric");
  m_ = (m + m.transpose()) / 2;
  check();
}

void TwoModeCM::check() const {
  for (int i = 0; i < 4; ++i)
    if (!(m_(i, i) > 0))
      throw config_error("two-mode CM needs strictly positive diagonal");
}

double TwoModeCM::det_a() const { return det2(block_a()); }
double TwoModeCM::det_b() const { return det2(block_b()); }
double TwoModeCM::det_c() const { return det2(block_c()); }

double TwoModeCM::det() const {
  const double da = det_a();
  if (std::abs(da) < 1e-300) return m_.determinant();
  const Eigen::Matrix2d c = block_c();
  const Eigen::Matrix2d schur = block_b() - c.transpose() * inv2(block_a(), da) * c;
  return da * det2(schur);
}

bool TwoModeCM::is_physical(double tol) const {
  const auto [l1, l2] = symplectic_spectrum(*this);
  return l2 >= 1 - tol && l1 >= 1 - tol;
}

double g_entropy(double x) {
  if (x < 0) {
    if (x < -1e-12) throw config_error("g_entropy domain: x must be >= 0");
    x = 0;
  }
  if (x == 0) return 0;
  constexpr double ln2 = std::numbers::ln2;
  return (x + 1) * std::log1p(x) / ln2 - x * std::log2(x);
}

std::pair<double, double> symplectic_spectrum(const TwoModeCM& v) {
  StandardForm s;
  if (standard_form(v.matrix(), s)) return standard_spectrum(s, false);
  const double delta = v.det_a() + v.det_b() + 2 * v.det_c();
  return spectrum_from_invariants(delta, v.det());
}

double pt_min_symplectic(const TwoModeCM& v) {
  StandardForm s;
  if (standard_form(v.matrix(), s)) return standard_spectrum(s, true).second;
  // Partial transposition of mode B flips the sign of det C and leaves the
  // other invariants unchanged.
  const double delta = v.det_a() + v.det_b() - 2 * v.det_c();
  return spectrum_from_invariants(delta, v.det()).second;
}

double log_negativity(const TwoModeCM& v) {
  const double lmin = pt_min_symplectic(v);
  if (lmin >= 1) return 0;
  if (!(lmin > 0)) throw numerical_error("vanishing partial-transpose eigenvalue");
  return -std::log2(lmin);
}

OneModeCM heterodyne_conditional(const TwoModeCM& v) {
  const Eigen::Matrix2d bb = v.block_b() + Eigen::Matrix2d::Identity();
  const double dbb = det2(bb);
  if (!(dbb > 0)) throw numerical_error("heterodyne conditioning is singular");
  const Eigen::Matrix2d c = v.block_c();
  Eigen::Matrix2d cond = v.block_a() - c * inv2(bb, dbb) * c.transpose();
  cond = ((cond + cond.transpose()) / 2).eval();
  return OneModeCM(cond);
}

double single_mode_symplectic(const OneModeCM& v) {
  double d = v.det();
  if (d < 0) {
    if (d < -1e-9) throw numerical_error("one-mode CM has negative determinant");
    d = 0;
  }
  return std::sqrt(d);
}

}  // namespace cvkey
