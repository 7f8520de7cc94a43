// Copula-based FAS gain CDF and the exact / high-SNR asymptotic outage
// probabilities for both NOMA users.  Both users share one code path; they
// differ only in the correlation matrix and the gain-domain threshold.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "faswpcn/channel.hpp"
#include "faswpcn/montecarlo.hpp"
#include "faswpcn/mvncdf.hpp"
#include "faswpcn/portgrid.hpp"
#include "faswpcn/rng.hpp"

namespace faswpcn {

enum class MarginalKind { exact, asymptotic };

/// CDF of the best-port equivalent gain: marginal CDF -> normal quantile ->
/// equicoordinate MVN CDF under the port correlation matrix.  The marginal
/// probability is clamped to [1e-300, 1 - 1e-300] before the quantile (the
/// upper clamp is inert in doubles; a marginal that rounds to 1 yields 1).
inline MvnResult fas_gain_cdf(const CorrelationMatrix& corr, double r,
                              MarginalKind kind, double mvn_accuracy,
                              uint64_t seed) {
  if (!(r >= 0.0)) throw std::domain_error("fas_gain_cdf: r must be >= 0");
  double u = kind == MarginalKind::exact
                 ? equiv_gain_cdf(r)
                 : equiv_gain_cdf_asymptotic(std::max(r, 1e-300));
  u = std::clamp(u, 1e-300, 1.0 - 1e-300);
  if (corr.dim == 1) return {u, 0.0, 0};
  if (u >= 1.0) return {1.0, 0.0, 0};
  const double x = specfun::std_normal_quantile(u);
  return mvn_cdf_equicoordinate(corr, x, mvn_accuracy, seed);
}

/// Exact OP of the strong user; exactly 1 when the power split cannot
/// support the SIC target.
inline MvnResult outage_u1(const CorrelationMatrix& corr, const SystemParams& p,
                           double mvn_accuracy, uint64_t seed) {
  const Thresholds th = compute_thresholds(p);
  if (!th.feasible_u1) return {1.0, 0.0, 0};
  return fas_gain_cdf(corr, *th.g_tilde_max, MarginalKind::exact, mvn_accuracy, seed);
}

/// Exact OP of the weak user.
inline MvnResult outage_u2(const CorrelationMatrix& corr, const SystemParams& p,
                           double mvn_accuracy, uint64_t seed) {
  const Thresholds th = compute_thresholds(p);
  if (!th.feasible_u2) return {1.0, 0.0, 0};
  return fas_gain_cdf(corr, *th.g_tilde_u2, MarginalKind::exact, mvn_accuracy, seed);
}

/// High-SNR asymptotic OP: same pipeline with the small-argument marginal.
inline MvnResult outage_asymptotic(const CorrelationMatrix& corr,
                                   const SystemParams& p, User user,
                                   double mvn_accuracy, uint64_t seed) {
  const Thresholds th = compute_thresholds(p);
  const bool feasible = user == User::u1 ? th.feasible_u1 : th.feasible_u2;
  if (!feasible) return {1.0, 0.0, 0};
  const double g_tilde = user == User::u1 ? *th.g_tilde_max : *th.g_tilde_u2;
  return fas_gain_cdf(corr, g_tilde, MarginalKind::asymptotic, mvn_accuracy, seed);
}

/// Exact plus asymptotic OP for both users at one parameter point.
struct OutageResult {
  double op_u1 = 1.0;
  double op_u2 = 1.0;
  double op_u1_asym = 1.0;
  double op_u2_asym = 1.0;
  double mvn_err_u1 = 0.0;
  double mvn_err_u2 = 0.0;
};

namespace outage_detail {
inline constexpr uint64_t kSaltU1Exact = 1;
inline constexpr uint64_t kSaltU2Exact = 2;
inline constexpr uint64_t kSaltU1Asym = 3;
inline constexpr uint64_t kSaltU2Asym = 4;
}  // namespace outage_detail

inline OutageResult evaluate_outage(const CorrelationMatrix& corr_u1,
                                    const CorrelationMatrix& corr_u2,
                                    const SystemParams& p, double mvn_accuracy,
                                    uint64_t seed) {
  using namespace outage_detail;
  OutageResult r;
  const MvnResult e1 = outage_u1(corr_u1, p, mvn_accuracy, rng::derive_seed(seed, kSaltU1Exact));
  const MvnResult e2 = outage_u2(corr_u2, p, mvn_accuracy, rng::derive_seed(seed, kSaltU2Exact));
  const MvnResult a1 = outage_asymptotic(corr_u1, p, User::u1, mvn_accuracy,
                                         rng::derive_seed(seed, kSaltU1Asym));
  const MvnResult a2 = outage_asymptotic(corr_u2, p, User::u2, mvn_accuracy,
                                         rng::derive_seed(seed, kSaltU2Asym));
  r.op_u1 = e1.value;
  r.op_u2 = e2.value;
  r.op_u1_asym = a1.value;
  r.op_u2_asym = a2.value;
  r.mvn_err_u1 = e1.error_estimate;
  r.mvn_err_u2 = e2.error_estimate;
  return r;
}

}  // namespace faswpcn
