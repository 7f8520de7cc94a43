// Multivariate standard normal CDF at a general upper-limit vector, with an
// equicoordinate front-end.  Genz's separation-of-variables transform
// (J. Comput. Graph. Stat. 1, 1992) integrated by a randomly shifted
// Kronecker lattice with a baker transform; variables are reordered by
// increasing conditional truncation probability during the pivoted Cholesky
// pass, as in Genz & Bretz.  Everything is deterministic for a fixed seed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "faswpcn/mc_estimate.hpp"
#include "faswpcn/portgrid.hpp"
#include "faswpcn/rng.hpp"
#include "faswpcn/specfun.hpp"

namespace faswpcn {

struct MvnResult {
  double value = 0.0;
  double error_estimate = 0.0;  // ~3x the spread of the randomization means
  uint64_t samples_used = 0;
};

struct MvnOptions {
  double accuracy = 1e-6;          // target absolute error
  int num_shifts = 8;              // independent lattice randomizations
  uint32_t max_points = 1u << 16;  // per-shift integrand budget
  uint32_t first_batch = 1u << 11;
};

namespace mvn_detail {

// frac(sqrt(p)) for the first d primes; Richtmyer-style lattice generators.
inline std::vector<double> kronecker_generators(int d) {
  std::vector<double> q;
  q.reserve(d);
  int candidate = 2;
  while (int(q.size()) < d) {
    bool prime = true;
    for (int f = 2; f * f <= candidate; ++f)
      if (candidate % f == 0) {
        prime = false;
        break;
      }
    if (prime) {
      double s = std::sqrt(double(candidate));
      q.push_back(s - std::floor(s));
    }
    ++candidate;
  }
  return q;
}

// Mean of a standard normal truncated to (-inf, t].
inline double truncated_normal_mean(double t) {
  if (t < -10.0) return t + 1.0 / t;
  const double cdf = specfun::std_normal_cdf(t);
  const double pdf = specfun::std_normal_pdf(t);
  if (cdf <= 0.0 || pdf <= 0.0) return std::min(t, 0.0);
  return -pdf / cdf;
}

struct Factorization {
  int n = 0;
  std::vector<double> chol;    // row-major lower triangle, reordered
  std::vector<double> limits;  // upper limits, reordered
  double e0 = 0.0;             // Phi(b_0 / l_00), the constant first factor
};

// Pivoted Cholesky with the variable order chosen greedily to minimize the
// conditional probability at each stage (smallest-probability-first).
inline Factorization reorder_and_factor(std::vector<double> c, std::vector<double> b) {
  const int n = int(b.size());
  Factorization f;
  f.n = n;
  f.chol.assign(size_t(n) * n, 0.0);
  f.limits = std::move(b);
  std::vector<double> y(n, 0.0);
  auto cref = [&](int i, int j) -> double& { return c[size_t(i) * n + j]; };
  auto lref = [&](int i, int j) -> double& { return f.chol[size_t(i) * n + j]; };

  for (int j = 0; j < n; ++j) {
    int best = j;
    double best_p = std::numeric_limits<double>::infinity();
    for (int i = j; i < n; ++i) {
      double s2 = cref(i, i);
      double num = f.limits[i];
      for (int k = 0; k < j; ++k) {
        s2 -= lref(i, k) * lref(i, k);
        num -= lref(i, k) * y[k];
      }
      const double denom = std::sqrt(std::max(s2, 0.0));
      const double p = denom > 0.0 ? specfun::std_normal_cdf(num / denom)
                                   : (num >= 0.0 ? 1.0 : 0.0);
      if (p < best_p) {
        best_p = p;
        best = i;
      }
    }
    if (best != j) {
      for (int k = 0; k < n; ++k) std::swap(cref(j, k), cref(best, k));
      for (int k = 0; k < n; ++k) std::swap(cref(k, j), cref(k, best));
      for (int k = 0; k < j; ++k) std::swap(lref(j, k), lref(best, k));
      std::swap(f.limits[j], f.limits[best]);
    }

    double s2 = cref(j, j);
    double num = f.limits[j];
    for (int k = 0; k < j; ++k) {
      s2 -= lref(j, k) * lref(j, k);
      num -= lref(j, k) * y[k];
    }
    if (s2 < 1e-20) {
      lref(j, j) = 0.0;  // degenerate direction; integrand uses an indicator
      y[j] = 0.0;
      continue;
    }
    const double ljj = std::sqrt(s2);
    lref(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double v = cref(i, j);
      for (int k = 0; k < j; ++k) v -= lref(i, k) * lref(j, k);
      lref(i, j) = v / ljj;
    }
    y[j] = truncated_normal_mean(num / ljj);
  }

  const double l00 = f.chol[0];
  f.e0 = l00 > 0.0 ? specfun::std_normal_cdf(f.limits[0] / l00)
                   : (f.limits[0] >= 0.0 ? 1.0 : 0.0);
  return f;
}

// One integrand evaluation at a point w in [0,1)^(n-1).
inline double integrand(const Factorization& f, std::span<const double> w,
                        std::span<double> y) {
  const int n = f.n;
  double prod = f.e0;
  double e_prev = f.e0;
  for (int i = 1; i < n; ++i) {
    const double u = std::clamp(w[i - 1] * e_prev, 1e-300, 1.0 - 1e-16);
    y[i - 1] = specfun::std_normal_quantile(u);
    double num = f.limits[i];
    const double* li = f.chol.data() + size_t(i) * n;
    for (int k = 0; k < i; ++k) num -= li[k] * y[k];
    const double lii = li[i];
    const double e =
        lii > 0.0 ? specfun::std_normal_cdf(num / lii) : (num >= 0.0 ? 1.0 : 0.0);
    prod *= e;
    if (prod <= 0.0) return 0.0;
    e_prev = e;
  }
  return prod;
}

}  // namespace mvn_detail

/// P(Z_1 <= b_1, ..., Z_n <= b_n) for Z ~ N(0, corr).  +inf components are
/// unconstrained and dropped; any -inf component gives 0.  The error
/// estimate is honest: on a converged run it is <= opt.accuracy, otherwise
/// it reports the achieved spread.
inline MvnResult mvn_cdf(const CorrelationMatrix& corr, std::span<const double> upper,
                         const MvnOptions& opt, uint64_t seed) {
  if (int(upper.size()) != corr.dim)
    throw std::invalid_argument("mvn_cdf: limit vector size mismatch");
  if (!(opt.accuracy > 0.0)) throw std::invalid_argument("mvn_cdf: accuracy must be > 0");
  if (opt.num_shifts < 2) throw std::invalid_argument("mvn_cdf: need >= 2 shifts");

  for (double b : upper)
    if (std::isnan(b)) throw std::invalid_argument("mvn_cdf: NaN limit");
  for (double b : upper)
    if (b == -std::numeric_limits<double>::infinity()) return {0.0, 0.0, 0};

  // Drop unconstrained coordinates.
  std::vector<int> active;
  for (int i = 0; i < corr.dim; ++i)
    if (upper[i] != std::numeric_limits<double>::infinity()) active.push_back(i);
  const int n = int(active.size());
  if (n == 0) return {1.0, 0.0, 0};
  if (n == 1) return {specfun::std_normal_cdf(upper[active[0]]), 0.0, 0};

  std::vector<double> sub(size_t(n) * n);
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = upper[active[i]];
    for (int j = 0; j < n; ++j) sub[size_t(i) * n + j] = corr.at(active[i], active[j]);
  }
  const auto f = mvn_detail::reorder_and_factor(std::move(sub), std::move(b));

  const int d = n - 1;  // integration dimension
  const auto gen = mvn_detail::kronecker_generators(d);
  const int shifts = opt.num_shifts;
  std::vector<std::vector<double>> delta(shifts, std::vector<double>(d));
  for (int s = 0; s < shifts; ++s) {
    rng::Stream st(seed, 0x6d766e /* "mvn" */, uint64_t(s));
    for (int j = 0; j < d; ++j) delta[s][j] = st.uniform01();
  }

  std::vector<double> mean(shifts, 0.0);
  std::vector<double> w(d), y(d);
  uint64_t done = 0;
  uint64_t batch = std::min<uint64_t>(opt.first_batch, opt.max_points);
  MvnResult res;
  while (true) {
    for (int s = 0; s < shifts; ++s) {
      double m = mean[s];
      for (uint64_t k = done + 1; k <= done + batch; ++k) {
        for (int j = 0; j < d; ++j) {
          const double t = double(k) * gen[j] + delta[s][j];
          const double fr = t - std::floor(t);
          w[j] = std::abs(2.0 * fr - 1.0);  // baker transform
        }
        const double fv = mvn_detail::integrand(f, w, y);
        m += (fv - m) / double(k);
      }
      mean[s] = m;
    }
    done += batch;

    double avg = 0.0;
    for (double m : mean) avg += m;
    avg /= shifts;
    double var = 0.0;
    for (double m : mean) var += (m - avg) * (m - avg);
    var /= (shifts - 1);
    res.value = std::clamp(avg, 0.0, 1.0);
    res.error_estimate = 3.0 * std::sqrt(var / shifts);
    res.samples_used = done * uint64_t(shifts);
    if (res.error_estimate <= opt.accuracy || done >= opt.max_points) break;
    batch = std::min<uint64_t>(done, opt.max_points - done);
  }
  return res;
}

/// Equicoordinate front-end: P(all Z_i <= x).  Deep-tail points short-circuit
/// to the min-marginal upper bound Phi(x) when that bound is already below
/// the accuracy target (lattice integration has no relative accuracy there);
/// the bound itself is reported as the error estimate.
inline MvnResult mvn_cdf_equicoordinate(const CorrelationMatrix& corr, double x,
                                        const MvnOptions& opt, uint64_t seed) {
  if (std::isnan(x)) throw std::invalid_argument("mvn_cdf_equicoordinate: NaN point");
  if (!(opt.accuracy > 0.0))
    throw std::invalid_argument("mvn_cdf_equicoordinate: accuracy must be > 0");
  if (x == std::numeric_limits<double>::infinity()) return {1.0, 0.0, 0};
  if (x == -std::numeric_limits<double>::infinity()) return {0.0, 0.0, 0};
  if (corr.dim == 1) return {specfun::std_normal_cdf(x), 0.0, 0};
  if (x < -8.0) {
    const double bound = specfun::std_normal_cdf(x);
    if (bound <= opt.accuracy) return {bound, bound, 0};
  }
  const std::vector<double> b(size_t(corr.dim), x);
  return mvn_cdf(corr, b, opt, seed);
}

inline MvnResult mvn_cdf_equicoordinate(const CorrelationMatrix& corr, double x,
                                        double accuracy, uint64_t seed) {
  MvnOptions opt;
  opt.accuracy = accuracy;
  return mvn_cdf_equicoordinate(corr, x, opt, seed);
}

/// Plain Monte Carlo oracle for the same probability: z = L w with w i.i.d.
/// standard normal, counting all-coordinates-below events.
inline McEstimate mvn_cdf_brute_force(const CorrelationMatrix& corr, double x,
                                      uint64_t trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("mvn_cdf_brute_force: trials must be >= 1");
  const int n = corr.dim;
  std::vector<double> w(n);
  uint64_t hits = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    rng::Stream st(seed, 0x627275 /* "bru" */, t);
    for (int i = 0; i < n; ++i) w[i] = st.normal();
    bool inside = true;
    for (int i = 0; i < n && inside; ++i) {
      double z = 0.0;
      const double* li = corr.cholesky.data() + size_t(i) * n;
      for (int k = 0; k <= i; ++k) z += li[k] * w[k];
      inside = z <= x;
    }
    hits += inside;
  }
  return make_binomial_estimate(hits, trials, seed);
}

}  // namespace faswpcn
