#pragma once

#include <vector>

#include "cvkey/keyrate.hpp"

namespace cvkey {

enum class SweepAxis { DistanceKm, DetectorEta, Delta };

struct SweepSpec {
  SweepAxis axis = SweepAxis::DistanceKm;
  // Half-open grid [start, stop): points start + i*step while < stop, so a
  // window of exactly one step yields a single row.
  double start = 0;
  double stop = 200;
  double step = 0.5;
  ResourceSpec resource;
  MismatchParams mismatch;
  ChannelParams channel;  // the swept field is overwritten per row
};

struct SweepRow {
  double axis_value;
  double key_rate;
  double i_ab;
  double chi_be;
  bool entangled;  // E_N > 0 of the post-channel shared CM
};

// One row per grid point, ordered by axis value; identical output for any
// thread count (rows are indexed, not accumulated).
std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads = 1);

// Bisection for the K(L) = 0 crossing in L ∈ [0, 500] km; K below 1e-12
// counts as zero.  Monotonicity is checked on a coarse grid first.
// Throws no_key_error when K(0) is already zero.
double max_distance(const ResourceSpec& spec, const MismatchParams& mm,
                    ChannelParams ch, double tol_km = 0.01);

// Bisection for the smallest eta with K > 0, eta ∈ [1e-3, 1], at fixed L.
// Throws no_key_error when even eta = 1 yields no key.
double min_efficiency(const ResourceSpec& spec, const MismatchParams& mm,
                      ChannelParams ch, double tol_eta = 1e-4);

// Mode-mismatch level at which the TMSV source becomes separable:
// delta* = 1 - cosh 2r + sinh 2r = 1 - e^(-2r).
double separability_threshold(double r);

}  // namespace cvkey
