#pragma once

#include "cvkey/channel.hpp"
#include "cvkey/gaussian.hpp"
#include "cvkey/resources.hpp"

namespace cvkey {

struct RateBreakdown {
  double i_ab;            // heterodyne mutual information, bits/pulse
  double chi_be;          // Holevo bound, bits/pulse
  double key_rate;        // max{0, beta * i_ab - chi_be}
  double lambda1;         // symplectic eigenvalues of the shared CM ...
  double lambda2;
  double lambda3;         // ... and of the heterodyne-conditional CM
  TwoModeCM v_shared;     // post-channel shared state
  OneModeCM v_conditional;
};

// I_AB = 1/2 log2 ratio per quadrature of Alice's heterodyne-duplexed
// variances, (V + 1)/2, unconditional over conditional-on-Bob.
double mutual_information(const TwoModeCM& v);

// chi_BE = G((l1-1)/2) + G((l2-1)/2) - G((l3-1)/2) under reverse
// reconciliation with heterodyne (no-switching) conditioning.
double holevo_bound(const TwoModeCM& v);

// Full pipeline: build source -> apply mismatch delta -> transmit -> rates.
// The heralding probability is deliberately not folded into the rate.
RateBreakdown secret_key_rate(const ResourceSpec& spec, const MismatchParams& mm,
                              const ChannelParams& ch);

}  // namespace cvkey
