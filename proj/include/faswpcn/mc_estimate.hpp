#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace faswpcn {

/// Binomial Monte Carlo estimate with its 95% normal-approximation interval.
struct McEstimate {
  double estimate = 0.0;
  uint64_t trials = 0;
  double standard_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  uint64_t seed = 0;
  // Fewer than 10 observed events: the rate is not resolved at this budget.
  bool below_resolution = false;
};

inline McEstimate make_binomial_estimate(uint64_t hits, uint64_t trials,
                                         uint64_t seed) {
  McEstimate e;
  e.trials = trials;
  e.seed = seed;
  e.estimate = trials > 0 ? double(hits) / double(trials) : 0.0;
  e.standard_error =
      trials > 0 ? std::sqrt(e.estimate * (1.0 - e.estimate) / double(trials)) : 0.0;
  e.ci_low = std::max(0.0, e.estimate - 1.96 * e.standard_error);
  e.ci_high = std::min(1.0, e.estimate + 1.96 * e.standard_error);
  e.below_resolution = hits < 10;
  return e;
}

}  // namespace faswpcn
