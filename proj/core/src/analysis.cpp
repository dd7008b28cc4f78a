#include "cvkey/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "cvkey/errors.hpp"

namespace cvkey {

namespace {

constexpr double kZeroKey = 1e-12;
constexpr double kMaxBracketKm = 500;
constexpr double kMinEta = 1e-3;
constexpr int kCoarseCells = 50;

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads) {
  spec.resource.validate();
  spec.channel.validate();
  if (!(spec.step > 0)) throw config_error("sweep step must be > 0");
  if (!(spec.stop > spec.start)) throw config_error("sweep stop must exceed start");
  const double span = (spec.stop - spec.start) / spec.step;
  const auto count = static_cast<std::size_t>(std::ceil(span - 1e-9));
  if (count < 1) throw config_error("sweep window contains no grid points");
  if (count > 1000000) throw config_error("sweep grid exceeds 1e6 points");

  std::vector<SweepRow> rows(count);
  auto eval = [&spec, &rows](std::size_t i) {
    const double value = spec.start + static_cast<double>(i) * spec.step;
    MismatchParams mm = spec.mismatch;
    ChannelParams ch = spec.channel;
    switch (spec.axis) {
      case SweepAxis::DistanceKm: ch.length_km = value; break;
      case SweepAxis::DetectorEta: ch.eta = value; break;
      case SweepAxis::Delta: mm = MismatchParams::direct(value); break;
    }
    const RateBreakdown b = secret_key_rate(spec.resource, mm, ch);
    rows[i] = {value, b.key_rate, b.i_ab, b.chi_be,
               log_negativity(b.v_shared) > 0};
  };

  const unsigned n =
      std::min<unsigned>(std::max(1u, threads), static_cast<unsigned>(count));
  if (n == 1) {
    for (std::size_t i = 0; i < count; ++i) eval(i);
    return rows;
  }

  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += n) eval(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

double max_distance(const ResourceSpec& spec, const MismatchParams& mm,
                    ChannelParams ch, double tol_km) {
  if (!(tol_km > 0)) throw config_error("distance tolerance must be > 0");
  auto key_at = [&](double length) {
    ch.length_km = length;
    return secret_key_rate(spec, mm, ch).key_rate;
  };

  double prev = key_at(0);
  if (prev <= kZeroKey) throw no_key_error("no key at any distance");

  double lo = 0, hi = -1;
  for (int i = 1; i <= kCoarseCells; ++i) {
    const double length = kMaxBracketKm * i / kCoarseCells;
    const double k = key_at(length);
    if (k > prev + kZeroKey)
      throw numerical_error("key rate is not monotone in distance");
    if (hi < 0 && k <= kZeroKey) {
      lo = kMaxBracketKm * (i - 1) / kCoarseCells;
      hi = length;
    }
    prev = k;
  }
  if (hi < 0)
    throw numerical_error("key rate still positive at the 500 km bracket end");

  while (hi - lo > tol_km) {
    const double mid = (lo + hi) / 2;
    (key_at(mid) > kZeroKey ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

double min_efficiency(const ResourceSpec& spec, const MismatchParams& mm,
                      ChannelParams ch, double tol_eta) {
  if (!(tol_eta > 0)) throw config_error("efficiency tolerance must be > 0");
  auto key_at = [&](double eta) {
    ch.eta = eta;
    return secret_key_rate(spec, mm, ch).key_rate;
  };

  if (key_at(1) <= kZeroKey)
    throw no_key_error("no key even with perfect detectors");

  double prev = key_at(kMinEta);
  if (prev > kZeroKey)
    throw numerical_error("key rate positive down to the eta bracket floor");

  double lo = kMinEta, hi = -1;
  for (int i = 1; i <= kCoarseCells; ++i) {
    const double eta = kMinEta + (1 - kMinEta) * i / kCoarseCells;
    const double k = key_at(eta);
    if (k + kZeroKey < prev)
      throw numerical_error("key rate is not monotone in eta");
    if (hi < 0 && prev <= kZeroKey && k > kZeroKey) {
      lo = kMinEta + (1 - kMinEta) * (i - 1) / kCoarseCells;
      hi = eta;
    }
    prev = k;
  }
  if (hi < 0) throw numerical_error("failed to bracket the eta threshold");

  while (hi - lo > tol_eta) {
    const double mid = (lo + hi) / 2;
    (key_at(mid) > kZeroKey ? hi : lo) = mid;
  }
  return (lo + hi) / 2;
}

double separability_threshold(double r) {
  if (!(r > 0)) throw config_error("squeezing r must be > 0");
  // 1 - cosh 2r + sinh 2r simplifies to 1 - e^(-2r); expm1 keeps small-r
  // accuracy.
  return -std::expm1(-2 * r);
}

}  // namespace cvkey
