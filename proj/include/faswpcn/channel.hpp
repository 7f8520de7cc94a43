// Scalar channel statistics and the NOMA SINR algebra: path loss, the
// product-gain marginal CDF (exact and small-argument asymptotic) and the
// gain-domain outage thresholds.  Powers, SNRs and thresholds are linear
// here; dB conversion belongs to the CLI boundary.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "faswpcn/specfun.hpp"

namespace faswpcn {

struct SystemParams {
  double snr_avg = 1.0;  // average SNR, linear (beacon power over noise power)
  double p_u1 = 0.3;     // power split for the strong user
  double p_u2 = 0.7;     // power split for the weak user
  double alpha = 2.5;    // path-loss exponent, > 2
  double l_p = 1.0;      // propagation constant
  double d_t = 10.0;     // beacon -> transmitter distance, meters
  double d_u1 = 5.0;     // transmitter -> strong user distance, meters
  double d_u2 = 10.0;    // transmitter -> weak user distance, meters
  double thr_sic = 1.0;  // SIC SINR threshold, linear
  double thr_u1 = 1.0;   // strong-user SNR threshold, linear
  double thr_u2 = 1.0;   // weak-user SINR threshold, linear

  void validate() const {
    if (!(snr_avg > 0.0)) throw std::invalid_argument("SystemParams: snr_avg must be > 0");
    if (!(p_u1 > 0.0 && p_u1 < 1.0) || !(p_u2 > 0.0 && p_u2 < 1.0))
      throw std::invalid_argument("SystemParams: power factors must lie in (0,1)");
    if (std::abs(p_u1 + p_u2 - 1.0) > 1e-12)
      throw std::invalid_argument("SystemParams: power factors must sum to 1");
    if (!(alpha > 2.0)) throw std::invalid_argument("SystemParams: alpha must be > 2");
    if (!(l_p > 0.0)) throw std::invalid_argument("SystemParams: l_p must be > 0");
    if (!(d_t > 0.0) || !(d_u1 > 0.0) || !(d_u2 > 0.0))
      throw std::invalid_argument("SystemParams: distances must be > 0");
    if (!(thr_sic > 0.0) || !(thr_u1 > 0.0) || !(thr_u2 > 0.0))
      throw std::invalid_argument("SystemParams: thresholds must be > 0");
  }

  /// Path loss towards user i: l_p * d_t^-alpha * d_i^-alpha.
  double path_loss_u1() const { return l_p * std::pow(d_t, -alpha) * std::pow(d_u1, -alpha); }
  double path_loss_u2() const { return l_p * std::pow(d_t, -alpha) * std::pow(d_u2, -alpha); }
};

/// Gain-domain outage boundaries.  A power split with p_u2 <= thr * p_u1
/// cannot satisfy the corresponding SINR target for any channel gain; that
/// case is carried as an infeasibility flag (downstream OP is exactly 1),
/// and the exact-equality boundary counts as infeasible.
struct Thresholds {
  bool feasible_u1 = false;
  bool feasible_u2 = false;
  double g_tilde_u1 = 0.0;
  std::optional<double> g_tilde_sic;
  std::optional<double> g_tilde_u2;
  std::optional<double> g_tilde_max;
};

/// CDF of the product of the two unit-mean exponential link gains:
///   F(r) = 1 - 2 sqrt(r) K1(2 sqrt(r)).
/// For r <= 1 the cancellation-free series
///   F(r) = sum_k r^(k+1) [psi(k+1) + psi(k+2) - ln r] / (k! (k+1)!)
/// keeps full relative accuracy down to denormal r.
inline double equiv_gain_cdf(double r) {
  if (!(r >= 0.0)) throw std::domain_error("equiv_gain_cdf: r must be >= 0");
  if (r == 0.0) return 0.0;
  if (r <= 1.0) {
    const double lr = std::log(r);
    double coef = r;  // r^(k+1) / (k! (k+1)!)
    double psi1 = -specfun::kEulerGamma;
    double psi2 = 1.0 - specfun::kEulerGamma;
    double sum = (psi1 + psi2 - lr) * coef;
    for (int k = 1; k < 64; ++k) {
      coef *= r / (k * (k + 1.0));
      psi1 += 1.0 / k;
      psi2 += 1.0 / (k + 1.0);
      const double term = (psi1 + psi2 - lr) * coef;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return std::min(sum, 1.0);
  }
  const double x = 2.0 * std::sqrt(r);
  return 1.0 - x * specfun::bessel_k1(x);
}

/// Density of the product gain: f(r) = 2 K0(2 sqrt(r)).
inline double equiv_gain_pdf(double r) {
  if (!(r > 0.0)) throw std::domain_error("equiv_gain_pdf: r must be > 0");
  return 2.0 * specfun::bessel_k0(2.0 * std::sqrt(r));
}

namespace channel_detail {

// Forward-CDF samples used to seed the quantile's Newton iteration.
struct GainQuantileTable {
  static constexpr int kN = 512;
  std::array<double, kN> log_r{};
  std::array<double, kN> u{};
  GainQuantileTable() {
    const double lo = std::log(1e-10), hi = std::log(400.0);
    for (int i = 0; i < kN; ++i) {
      log_r[i] = lo + (hi - lo) * i / (kN - 1);
      u[i] = equiv_gain_cdf(std::exp(log_r[i]));
    }
  }
};

inline double gain_quantile_guess(double target) {
  static const GainQuantileTable t;
  if (target <= t.u.front()) {
    // deep tail: invert the small-argument form by fixed point
    double r = target;
    for (int i = 0; i < 4; ++i)
      r = target / std::max(1.0 - 2.0 * specfun::kEulerGamma - std::log(r), 1e-2);
    return std::max(r, 1e-320);
  }
  if (target >= t.u.back()) {
    // upper tail: q = x K1(x) ~ sqrt(pi x / 2) e^-x with x = 2 sqrt(r)
    const double q = 1.0 - target;
    double x = std::max(1.0, -std::log(q));
    for (int i = 0; i < 3; ++i)
      x = -std::log(q) + 0.5 * std::log(0.5 * M_PI * x) + std::log1p(3.0 / (8.0 * x));
    return 0.25 * x * x;
  }
  const auto it = std::lower_bound(t.u.begin(), t.u.end(), target);
  const int i = std::max<int>(1, int(it - t.u.begin())) - 1;
  const double f = (target - t.u[i]) / (t.u[i + 1] - t.u[i]);
  return std::exp(t.log_r[i] + f * (t.log_r[i + 1] - t.log_r[i]));
}

}  // namespace channel_detail

/// Quantile of the product gain: table-seeded, bracketed Newton on the CDF.
inline double equiv_gain_quantile(double u) {
  if (!(u > 0.0) || !(u < 1.0))
    throw std::domain_error("equiv_gain_quantile: u must lie in (0, 1)");
  const double guess = channel_detail::gain_quantile_guess(u);
  double lo = guess, hi = guess;
  if (equiv_gain_cdf(guess) < u) {
    do {
      lo = hi;
      hi *= 2.0;
    } while (equiv_gain_cdf(hi) < u);
  } else {
    do {
      hi = lo;
      lo *= 0.5;
    } while (lo > 0.0 && equiv_gain_cdf(lo) >= u);
  }
  double r = guess;  // in [lo, hi] by construction; Newton stays bracketed
  for (int i = 0; i < 100; ++i) {
    const double fr = equiv_gain_cdf(r) - u;
    if (fr > 0.0)
      hi = r;
    else
      lo = r;
    double next = r - fr / equiv_gain_pdf(r);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisect fallback
    if (std::abs(next - r) <= 1e-13 * std::max(next, 1e-300)) return next;
    r = next;
  }
  return r;
}

/// Small-argument expansion F(r) ~ r (1 - 2*gamma - ln r), clamped to [0, 1].
/// The raw expression crosses zero at r = exp(1 - 2*gamma) ~ 0.857; beyond
/// that the clamp applies and the value is meaningless as an approximation.
inline double equiv_gain_cdf_asymptotic(double r) {
  if (!(r > 0.0)) throw std::domain_error("equiv_gain_cdf_asymptotic: r must be > 0");
  const double v = r * (1.0 - 2.0 * specfun::kEulerGamma - std::log(r));
  return std::clamp(v, 0.0, 1.0);
}

/// Gain-domain thresholds for both users (the theorem transforms of the SINR
/// targets).  All values scale as 1/snr_avg.
inline Thresholds compute_thresholds(const SystemParams& p) {
  p.validate();
  Thresholds t;
  const double dist_u1 = std::pow(p.d_t, p.alpha) * std::pow(p.d_u1, p.alpha);
  const double dist_u2 = std::pow(p.d_t, p.alpha) * std::pow(p.d_u2, p.alpha);

  t.g_tilde_u1 = p.thr_u1 * dist_u1 / (p.snr_avg * p.p_u1 * p.l_p);

  t.feasible_u1 = p.p_u2 > p.thr_sic * p.p_u1;
  if (t.feasible_u1) {
    t.g_tilde_sic =
        p.thr_sic * dist_u1 / (p.snr_avg * p.l_p * (p.p_u2 - p.thr_sic * p.p_u1));
    t.g_tilde_max = std::max(*t.g_tilde_sic, t.g_tilde_u1);
  }

  t.feasible_u2 = p.p_u2 > p.thr_u2 * p.p_u1;
  if (t.feasible_u2) {
    t.g_tilde_u2 =
        p.thr_u2 * dist_u2 / (p.snr_avg * p.l_p * (p.p_u2 - p.thr_u2 * p.p_u1));
  }
  return t;
}

/// Instantaneous SINR of the SIC step at a realized equivalent FAS gain.
/// Bounded above by p_u2/p_u1.
inline double sinr_sic(double g_fas, const SystemParams& p) {
  const double s = p.snr_avg * p.path_loss_u1() * g_fas;
  return p.p_u2 * s / (p.p_u1 * s + 1.0);
}

/// Post-SIC SNR of the strong user; linear in the gain.
inline double snr_u1(double g_fas, const SystemParams& p) {
  return p.snr_avg * p.p_u1 * p.path_loss_u1() * g_fas;
}

/// SINR of the weak user decoding under interference.
inline double sinr_u2(double g_fas, const SystemParams& p) {
  const double s = p.snr_avg * p.path_loss_u2() * g_fas;
  return p.p_u2 * s / (p.p_u1 * s + 1.0);
}

}  // namespace faswpcn
