#include "cvkey/fock_oracle.hpp"

#include <cmath>
#include <complex>

#include "cvkey/errors.hpp"
#include "cvkey/resources.hpp"

namespace cvkey {

namespace {

using cd = std::complex<double>;

constexpr double kTruncationTol = 1e-12;
constexpr double kAutoTailTol = 1e-10;
constexpr int kMaxCutoff = 256;

bool cutoff_adequate(double r, int cutoff) {
  const double tau = std::tanh(r);
  return std::pow(tau, 2.0 * cutoff) < kTruncationTol;
}

// Ladder application phi = R |psi> on one index of the amplitude grid;
// quadrature = 0 for x (a + a^dag), 1 for p (-i a + i a^dag).  Output grids
// are one larger to hold the raised index.
Eigen::MatrixXcd apply_quadrature(const Eigen::MatrixXcd& amp, int mode,
                                  int quadrature) {
  const auto d = amp.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d + 1, d + 1);
  const cd lower_c = quadrature == 0 ? cd(1, 0) : cd(0, -1);
  const cd raise_c = quadrature == 0 ? cd(1, 0) : cd(0, 1);
  for (Eigen::Index na = 0; na < d; ++na) {
    for (Eigen::Index nb = 0; nb < d; ++nb) {
      const cd a = amp(na, nb);
      if (a == cd(0, 0)) continue;
      const Eigen::Index n = mode == 0 ? na : nb;
      const double sq_raise = std::sqrt(static_cast<double>(n) + 1);
      if (mode == 0) {
        out(na + 1, nb) += raise_c * sq_raise * a;
        if (na > 0) out(na - 1, nb) += lower_c * std::sqrt(static_cast<double>(na)) * a;
      } else {
        out(na, nb + 1) += raise_c * sq_raise * a;
        if (nb > 0) out(na, nb - 1) += lower_c * std::sqrt(static_cast<double>(nb)) * a;
      }
    }
  }
  return out;
}

}  // namespace

double FockState::truncation_tail() const {
  const auto d = amp.rows();
  double row = 0, col = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    row += std::norm(amp(d - 1, i));
    col += std::norm(amp(i, d - 1));
  }
  return std::max(row, col);
}

FockState tmsv_fock(double r, int cutoff) {
  if (!(r > 0)) throw config_error("squeezing r must be > 0");
  if (cutoff < 2) throw config_error("Fock cutoff must be >= 2");
  if (!cutoff_adequate(r, cutoff))
    throw config_error("Fock cutoff too small for the requested squeezing");
  const double tau = std::tanh(r);
  FockState st;
  st.amp = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  const double head = std::sqrt(1 - tau * tau);
  double amp_n = head;
  for (int n = 0; n < cutoff; ++n) {
    st.amp(n, n) = amp_n;
    amp_n *= tau;
  }
  return st;
}

FockState tmsv_fock_auto(double r, int initial_cutoff) {
  int cutoff = initial_cutoff;
  while (true) {
    if (cutoff_adequate(r, cutoff)) {
      FockState st = tmsv_fock(r, cutoff);
      if (st.truncation_tail() < kAutoTailTol) return st;
    }
    if (cutoff >= kMaxCutoff)
      throw config_error("squeezing too large for the Fock oracle (cutoff 256)");
    cutoff = std::min(2 * cutoff, kMaxCutoff);
  }
}

FockState subtract_ancilla(const FockState& state, double t_bs, int k,
                           double* probability) {
  if (!(t_bs > 0 && t_bs <= 1))
    throw config_error("beamsplitter transmittance t_bs must lie in (0, 1]");
  const int d = state.cutoff();
  if (k < 0 || 2 * k >= d)
    throw config_error("subtraction order k must satisfy 0 <= k < cutoff/2");

  // Vacuum ancilla in, k photons detected out: |n_b> maps to
  // sqrt(C(n_b, k) t^(n_b - k) (1-t)^k) |n_b - k> on the kept arm.  The
  // coefficient is built by recurrence to avoid large factorials.
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  double coef = std::pow(1 - t_bs, k / 2.0);
  const double sq_t = std::sqrt(t_bs);
  for (int nb = k; nb < d; ++nb) {
    if (nb > k)
      coef *= sq_t * std::sqrt(static_cast<double>(nb) / (nb - k));
    for (int na = 0; na < d; ++na) out(na, nb - k) += state.amp(na, nb) * coef;
  }

  const double prob = out.squaredNorm();
  if (prob < 1e-14)
    throw numerical_error("degenerate ancilla projection (probability < 1e-14)");
  if (probability) *probability = prob;
  FockState cond;
  cond.amp = out / std::sqrt(prob);
  return cond;
}

ProjectionResult project_ancilla(const FockState& state, double t_bs, int k) {
  double prob = 0;
  const FockState cond = subtract_ancilla(state, t_bs, k, &prob);
  return {prob, second_moments(cond)};
}

Eigen::Vector4d first_moments(const FockState& state) {
  const auto d = state.amp.rows();
  Eigen::Vector4d m;
  for (int i = 0; i < 4; ++i) {
    const Eigen::MatrixXcd phi = apply_quadrature(state.amp, i / 2, i % 2);
    m(i) = (state.amp.conjugate().cwiseProduct(phi.topLeftCorner(d, d))).sum().real();
  }
  return m;
}

TwoModeCM second_moments(const FockState& state) {
  Eigen::MatrixXcd phi[4];
  for (int i = 0; i < 4; ++i) phi[i] = apply_quadrature(state.amp, i / 2, i % 2);
  Eigen::Matrix4d v;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const double e = (phi[i].conjugate().cwiseProduct(phi[j])).sum().real();
      v(i, j) = v(j, i) = e;
    }
  }
  return TwoModeCM(v);
}

double mean_photons(const FockState& state, int mode) {
  if (mode != 0 && mode != 1) throw config_error("mode index must be 0 or 1");
  const auto d = state.amp.rows();
  double n = 0;
  for (Eigen::Index na = 0; na < d; ++na)
    for (Eigen::Index nb = 0; nb < d; ++nb)
      n += static_cast<double>(mode == 0 ? na : nb) * std::norm(state.amp(na, nb));
  return n;
}

OracleComparison compare_with_closed_form(double r, double t_bs, int k,
                                          int cutoff) {
  const double p_closed = subtraction_probability(r, t_bs, k);
  const TwoModeCM cm_closed = subtracted_tmsv(r, t_bs, k);
  const ProjectionResult pr = project_ancilla(tmsv_fock(r, cutoff), t_bs, k);
  const double cm_err =
      (cm_closed.matrix() - pr.cm.matrix()).cwiseAbs().maxCoeff();
  return {p_closed, pr.probability, std::abs(p_closed - pr.probability), cm_err};
}

}  // namespace cvkey
