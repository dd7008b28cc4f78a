#pragma once

#include <Eigen/Dense>
#include <utility>

namespace cvkey {

// Conventions used throughout: quadratures x = a + a^dag, p = -i(a - a^dag),
// so the vacuum variance is 1 (shot-noise units) and a TMSV has diagonal
// cosh 2r.  Mode ordering is (x_A, p_A, x_B, p_B); logarithms are base 2.

// 2x2 real symmetric covariance matrix of a single mode.
class OneModeCM {
 public:
  explicit OneModeCM(const Eigen::Matrix2d& m);

  const Eigen::Matrix2d& matrix() const { return m_; }
  double det() const;

 private:
  Eigen::Matrix2d m_;
};

// 4x4 real symmetric covariance matrix in block form [[A, C], [C^T, B]].
class TwoModeCM {
 public:
  // Blocks A and B must be symmetric; C is an arbitrary 2x2 cross block.
  TwoModeCM(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b,
            const Eigen::Matrix2d& c);
  explicit TwoModeCM(const Eigen::Matrix4d& m);

  const Eigen::Matrix4d& matrix() const { return m_; }
  Eigen::Matrix2d block_a() const { return m_.block<2, 2>(0, 0); }
  Eigen::Matrix2d block_b() const { return m_.block<2, 2>(2, 2); }
  Eigen::Matrix2d block_c() const { return m_.block<2, 2>(0, 2); }

  double det_a() const;
  double det_b() const;
  double det_c() const;
  // Full determinant via the 2x2 Schur complement; keeps cancellation error
  // at block scale, which the 1e-9 discriminant clamp below depends on.
  double det() const;

  bool is_physical(double tol = 1e-9) const;

 private:
  void check() const;
  Eigen::Matrix4d m_;
};

// G(x) = (x+1) log2(x+1) - x log2 x, the von Neumann entropy of a thermal
// state with mean photon number x; G(0) = 0 by the limit convention.
double g_entropy(double x);

// Symplectic eigenvalues {larger, smaller} from the two-mode closed form
// nu^2 = (Delta +- sqrt(Delta^2 - 4 det V)) / 2, Delta = detA + detB + 2 detC.
std::pair<double, double> symplectic_spectrum(const TwoModeCM& v);

// Smallest symplectic eigenvalue of the partial transpose (detC -> -detC).
double pt_min_symplectic(const TwoModeCM& v);

// Logarithmic negativity E_N = max{0, -log2 l_min}.
double log_negativity(const TwoModeCM& v);

// Conditional CM of mode A after heterodyne detection of mode B:
// A - C (B + I)^-1 C^T (the added identity is the heterodyne vacuum unit).
OneModeCM heterodyne_conditional(const TwoModeCM& v);

// Symplectic eigenvalue sqrt(det) of a one-mode CM.
double single_mode_symplectic(const OneModeCM& v);

}  // namespace cvkey
