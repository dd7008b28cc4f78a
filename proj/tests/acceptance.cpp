// Acceptance gate for the key-rate engine.  Each criterion prints exactly one
// PASS/FAIL line; failures list their reasons on indented lines below.  Run
// everything with no arguments or a subset with repeated `--criterion N`.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cvkey/analysis.hpp"
#include "cvkey/cli.hpp"
#include "cvkey/errors.hpp"
#include "cvkey/fock_oracle.hpp"
#include "cvkey/keyrate.hpp"

namespace {

using cvkey::ChannelParams;
using cvkey::MismatchParams;
using cvkey::ResourceKind;
using cvkey::ResourceSpec;
using cvkey::TwoModeCM;

struct Check {
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  bool passed() const { return problems.empty(); }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

ResourceSpec source(ResourceKind kind, int k = 0, double loss_p = 0,
                    double cosh2r = 50) {
  ResourceSpec spec;
  spec.kind = kind;
  spec.r = cvkey::squeezing_from_cosh2r(cosh2r);
  spec.t_bs = 0.9;
  spec.k = k;
  spec.loss_p = loss_p;
  return spec;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Fock-basis oracle reproduces the closed-form outcome probabilities and
//    conditional covariance matrices across the calibration grid.
Check criterion1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  for (double r : {0.3, 0.5, 0.8}) {
    for (double t : {0.7, 0.9}) {
      for (int k : {0, 1, 2}) {
        const cvkey::OracleComparison cmp =
            cvkey::compare_with_closed_form(r, t, k);
        const std::string tag =
            "(r=" + fmt(r) + ", t=" + fmt(t) + ", k=" + std::to_string(k) + ")";
        c.expect(cmp.probability_err <= 1e-8,
                 "probability mismatch " + fmt(cmp.probability_err) + " " + tag);
        c.expect(cmp.cm_err <= 1e-6,
                 "covariance mismatch " + fmt(cmp.cm_err) + " " + tag);
      }
    }
  }
  const double dt = seconds_since(t0);
  c.expect(dt < 30, "runtime " + fmt(dt) + " s exceeds 30 s");
  return c;
}

// 2. Ancilla outcome probabilities form a distribution.
Check criterion2() {
  Check c;
  const double r = cvkey::squeezing_from_cosh2r(50);
  double total = 0;
  for (int k = 0; k <= 200; ++k)
    total += cvkey::subtraction_probability(r, 0.9, k);
  c.expect(std::abs(total - 1) <= 1e-10,
           "sum over k <= 200 deviates from 1 by " + fmt(std::abs(total - 1)));
  return c;
}

// 3. A transparent ancilla coupling with no detection leaves the source as
//    plain two-mode squeezed vacuum.
Check criterion3() {
  Check c;
  for (int i = 0; i < 30; ++i) {
    const double r = 0.1 + i * (2.9 / 29);
    const double err = (cvkey::subtracted_tmsv(r, 1, 0).matrix() -
                        cvkey::tmsv(r).matrix())
                           .cwiseAbs()
                           .maxCoeff();
    c.expect(err <= 1e-12, "entrywise gap " + fmt(err) + " at r=" + fmt(r));
  }
  return c;
}

// 4. The mismatch level where the negativity hits zero equals the closed-form
//    separability threshold.
Check criterion4() {
  Check c;
  for (double r : {0.3, 1.0, 2.3026}) {
    const TwoModeCM base = cvkey::tmsv(r);
    auto entangled = [&](double delta) {
      return cvkey::log_negativity(cvkey::apply_mode_mismatch(base, delta)) > 0;
    };
    if (!entangled(0)) {
      c.problems.push_back("source not entangled at delta=0, r=" + fmt(r));
      continue;
    }
    double lo = 0, hi = 2;
    if (entangled(hi)) {
      c.problems.push_back("still entangled at delta=2, r=" + fmt(r));
      continue;
    }
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (entangled(mid) ? lo : hi) = mid;
    }
    const double found = 0.5 * (lo + hi);
    const double target = 1 - std::cosh(2 * r) + std::sinh(2 * r);
    c.expect(std::abs(found - target) <= 1e-9,
             "zero crossing " + fmt(found) + " vs threshold " + fmt(target) +
                 " at r=" + fmt(r));
  }
  return c;
}

// 5. Maximum-distance calibration bands and the resource ordering.
Check criterion5() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const MismatchParams mm = MismatchParams::direct(0.01);
  auto reach = [&](const ResourceSpec& spec, double beta) {
    ChannelParams ch{15, 0.02, 1, beta};
    return cvkey::max_distance(spec, mm, ch);
  };
  auto banded = [&](const ResourceSpec& spec, double lo, double hi,
                    const std::string& name) {
    try {
      const double km = reach(spec, 0.95);
      c.expect(km >= lo && km <= hi,
               name + " reach " + fmt(km) + " km outside [" + fmt(lo) + ", " +
                   fmt(hi) + "]");
    } catch (const std::exception& e) {
      c.problems.push_back(name + ": " + e.what());
    }
  };
  banded(source(ResourceKind::Tmsv), 32, 52, "tmsv");
  banded(source(ResourceKind::Subtracted, 1), 60, 90, "subtracted(1)");
  banded(source(ResourceKind::ZeroPhotonCatalysis), 125, 175, "zpc");
  try {
    const double km = reach(source(ResourceKind::ZpcWithLoss, 0, 0.002), 0.95);
    c.expect(km < 50, "lossy zpc reach " + fmt(km) + " km not below 50");
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("lossy zpc: ") + e.what());
  }
  for (double beta : {0.90, 0.95, 1.0}) {
    try {
      const double tm = reach(source(ResourceKind::Tmsv), beta);
      const double sub = reach(source(ResourceKind::Subtracted, 1), beta);
      const double zpc = reach(source(ResourceKind::ZeroPhotonCatalysis), beta);
      c.expect(zpc > sub && sub > tm,
               "ordering zpc > subtracted(1) > tmsv broken at beta=" +
                   fmt(beta) + " (" + fmt(zpc) + ", " + fmt(sub) + ", " +
                   fmt(tm) + ")");
    } catch (const std::exception& e) {
      c.problems.push_back("ordering at beta=" + fmt(beta) + ": " + e.what());
    }
  }
  const double dt = seconds_since(t0);
  c.expect(dt < 10, "runtime " + fmt(dt) + " s exceeds 10 s");
  return c;
}

// 6. Minimum-efficiency thresholds and the hopeless-noise diagnostic.
Check criterion6() {
  Check c;
  const ChannelParams ch{15, 0.02, 1, 0.95};
  const MismatchParams mm = MismatchParams::direct(0.01);
  try {
    const double eta = cvkey::min_efficiency(source(ResourceKind::Subtracted, 1), mm, ch);
    c.expect(std::abs(eta - 0.988) <= 0.01,
             "subtracted(1) threshold " + fmt(eta) + " outside 0.988 +/- 0.01");
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("subtracted(1): ") + e.what());
  }
  try {
    const double eta =
        cvkey::min_efficiency(source(ResourceKind::ZeroPhotonCatalysis), mm, ch);
    c.expect(std::abs(eta - 0.984) <= 0.01,
             "zpc threshold " + fmt(eta) + " outside 0.984 +/- 0.01");
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("zpc: ") + e.what());
  }
  try {
    cvkey::min_efficiency(source(ResourceKind::Tmsv),
                          MismatchParams::direct(0.08), ch);
    c.problems.push_back("tmsv at delta=0.08 unexpectedly found a threshold");
  } catch (const cvkey::no_key_error& e) {
    c.expect(std::string(e.what()) == "no key even with perfect detectors",
             std::string("unexpected diagnostic: ") + e.what());
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("tmsv at delta=0.08: wrong error: ") +
                         e.what());
  }
  return c;
}

// 7. Key rate is monotone: non-increasing in distance and mismatch noise,
//    non-decreasing in detector efficiency and reconciliation efficiency.
Check criterion7() {
  Check c;
  const double deltas[5] = {0.005, 0.01, 0.02, 0.04, 0.08};
  auto rate = [](const ResourceSpec& spec, double delta, double L, double eta,
                 double beta) {
    const ChannelParams ch{L, 0.02, eta, beta};
    return cvkey::secret_key_rate(spec, MismatchParams::direct(delta), ch)
        .key_rate;
  };
  for (const ResourceSpec& spec :
       {source(ResourceKind::Tmsv), source(ResourceKind::Subtracted, 1)}) {
    const std::string name =
        spec.kind == ResourceKind::Tmsv ? "tmsv" : "subtracted(1)";
    double grid_l[20][5], grid_e[20][5];
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 5; ++j) {
        grid_l[i][j] = rate(spec, deltas[j], 2.5 * i, 1.0, 0.95);
        grid_e[i][j] = rate(spec, deltas[j], 15, 0.905 + 0.005 * i, 0.95);
      }
    }
    for (int j = 0; j < 5; ++j) {
      for (int i = 1; i < 20; ++i) {
        c.expect(grid_l[i][j] <= grid_l[i - 1][j] + 1e-12,
                 name + ": K increases with distance at delta=" +
                     fmt(deltas[j]) + ", L=" + fmt(2.5 * i));
        c.expect(grid_e[i][j] >= grid_e[i - 1][j] - 1e-12,
                 name + ": K decreases with efficiency at delta=" +
                     fmt(deltas[j]) + ", eta=" + fmt(0.905 + 0.005 * i));
      }
    }
    for (int i = 0; i < 20; ++i) {
      for (int j = 1; j < 5; ++j) {
        c.expect(grid_l[i][j] <= grid_l[i][j - 1] + 1e-12,
                 name + ": K increases with noise at L=" + fmt(2.5 * i));
        c.expect(grid_e[i][j] <= grid_e[i][j - 1] + 1e-12,
                 name + ": K increases with noise at eta=" +
                     fmt(0.905 + 0.005 * i));
      }
    }
    for (double L : {5.0, 10.0, 20.0}) {
      double prev = -1;
      for (double beta : {0.90, 0.95, 1.0}) {
        const double k = rate(spec, 0.01, L, 1.0, beta);
        c.expect(k >= prev - 1e-12,
                 name + ": K decreases with reconciliation at L=" + fmt(L));
        prev = k;
      }
    }
  }
  return c;
}

// 8. Degenerate inputs clamp to exactly zero key.
Check criterion8() {
  Check c;
  const ChannelParams ch{15, 0.02, 1, 0.95};
  for (double cosh2r : {3.0, 50.0}) {
    const auto b = cvkey::secret_key_rate(
        source(ResourceKind::ZpcWithLoss, 0, 1.0, cosh2r),
        MismatchParams::direct(0.01), ch);
    c.expect(b.i_ab == 0,
             "fully lossy ancilla leaves correlations at cosh2r=" + fmt(cosh2r));
    c.expect(b.key_rate == 0,
             "fully lossy ancilla yields K=" + fmt(b.key_rate) + " at cosh2r=" +
                 fmt(cosh2r));
  }
  for (double a : {1.0, 3.0, 50.0}) {
    const TwoModeCM product(a * Eigen::Matrix2d::Identity(),
                            Eigen::Matrix2d::Identity(),
                            Eigen::Matrix2d::Zero());
    const TwoModeCM out = cvkey::transmit(product, ch);
    const double i_ab = cvkey::mutual_information(out);
    const double key =
        std::max(0.0, ch.beta * i_ab - cvkey::holevo_bound(out));
    c.expect(i_ab == 0, "uncorrelated state has I_AB=" + fmt(i_ab));
    c.expect(key == 0, "uncorrelated state has K=" + fmt(key));
  }
  for (double r : {0.3, 1.0, 2.3026}) {
    const double dstar = cvkey::separability_threshold(r);
    ResourceSpec spec;
    spec.kind = ResourceKind::Tmsv;
    spec.r = r;
    for (double delta : {dstar, dstar + 0.01, dstar + 0.5}) {
      for (const ChannelParams& probe :
           {ch, ChannelParams{0, 0.02, 1, 1.0}}) {
        const double key =
            cvkey::secret_key_rate(spec, MismatchParams::direct(delta), probe)
                .key_rate;
        c.expect(key == 0, "separable source yields K=" + fmt(key) + " at r=" +
                               fmt(r) + ", delta=" + fmt(delta));
      }
    }
  }
  return c;
}

// 9. Distance sweeps are byte-for-byte reproducible.
Check criterion9() {
  Check c;
  std::ostringstream out1, err1, out2, err2;
  const int rc1 = cvkey::cli::run({"sweep-distance"}, out1, err1);
  const int rc2 = cvkey::cli::run({"sweep-distance"}, out2, err2);
  c.expect(rc1 == 0, "first run exited " + std::to_string(rc1));
  c.expect(rc2 == 0, "second run exited " + std::to_string(rc2));
  c.expect(!out1.str().empty(), "first run produced no CSV");
  c.expect(out1.str() == out2.str(), "consecutive runs differ");
  return c;
}

const struct {
  int n;
  const char* what;
  Check (*run)();
} kCriteria[] = {
    {1, "Fock oracle matches the closed-form probabilities and covariance matrices", criterion1},
    {2, "ancilla outcome probabilities sum to one", criterion2},
    {3, "transparent no-detection coupling reduces to the bare source", criterion3},
    {4, "negativity zero crossing sits at the separability threshold", criterion4},
    {5, "maximum-distance calibration bands and resource ordering", criterion5},
    {6, "minimum-efficiency thresholds and hopeless-noise diagnostic", criterion6},
    {7, "key rate monotone in distance, noise, efficiency, reconciliation", criterion7},
    {8, "degenerate inputs yield exactly zero key", criterion8},
    {9, "distance sweeps are byte-for-byte deterministic", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    int n = 0;
    if (arg == "--criterion" && i + 1 < argc) {
      n = std::atoi(argv[++i]);
    } else if (arg.rfind("--criterion=", 0) == 0) {
      n = std::atoi(arg.c_str() + 12);
    }
    if (n < 1 || n > 9) {
      std::cerr << "usage: cvkey_acceptance [--criterion N]...  (N in 1..9)\n";
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty())
    for (const auto& c : kCriteria) selected.push_back(c.n);

  int failures = 0;
  for (int n : selected) {
    const auto& crit = kCriteria[n - 1];
    Check result;
    try {
      result = crit.run();
    } catch (const std::exception& e) {
      result.problems.push_back(std::string("unexpected exception: ") + e.what());
    }
    std::cout << (result.passed() ? "PASS" : "FAIL") << " criterion " << n
              << ": " << crit.what << "\n";
    if (!result.passed()) {
      ++failures;
      for (const std::string& p : result.problems)
        std::cout << "  - " << p << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}
