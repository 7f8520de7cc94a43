// Self-validation: the cross-checks between independent computation routes
// (marginal CDF vs direct product sampling, lattice MVN vs brute-force MC,
// the bivariate closed form, analytic outage vs copula simulation).  The
// report text is deterministic for a fixed seed.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "faswpcn/channel.hpp"
#include "faswpcn/config.hpp"
#include "faswpcn/format.hpp"
#include "faswpcn/montecarlo.hpp"
#include "faswpcn/mvncdf.hpp"
#include "faswpcn/outage.hpp"
#include "faswpcn/rng.hpp"

namespace faswpcn {

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> stats;

  std::string line() const {
    std::string s = "check ";
    s += name;
    s += pass ? " status=pass" : " status=FAIL";
    for (const auto& [k, v] : stats) s += " " + k + "=" + v;
    return s;
  }
};

enum class ValidateBudget { small, full };

/// Random correlation matrix from a normalized Gram matrix of Gaussian rows.
inline CorrelationMatrix random_correlation(int n, uint64_t seed) {
  rng::Stream st(seed, 0x636f7272 /* "corr" */);
  const int cols = n + 3;
  std::vector<double> a(size_t(n) * cols);
  for (double& v : a) v = st.normal();
  std::vector<double> gram(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < cols; ++k) s += a[size_t(i) * cols + k] * a[size_t(j) * cols + k];
      gram[size_t(i) * n + j] = s;
      gram[size_t(j) * n + i] = s;
    }
  for (int i = 0; i < n; ++i) {
    const double d = std::sqrt(gram[size_t(i) * n + i]);
    for (int j = 0; j < n; ++j) {
      gram[size_t(i) * n + j] /= d;
      gram[size_t(j) * n + i] /= d;
    }
  }
  return correlation_from_entries(n, gram);
}

/// Empirical CDF of the product of two unit-mean exponentials against a
/// candidate marginal CDF, at 20 log-spaced points, 3-sigma binomial bands.
/// The marginal is a parameter so a deliberately perturbed one can be used
/// to demonstrate the check's sensitivity.
inline CheckOutcome check_marginal_vs_sampler(
    const std::function<double(double)>& marginal_cdf, uint64_t trials,
    uint64_t seed) {
  constexpr int kPoints = 20;
  std::vector<double> r(kPoints);
  for (int i = 0; i < kPoints; ++i)
    r[i] = 1e-3 * std::pow(10.0 / 1e-3, double(i) / (kPoints - 1));
  std::vector<uint64_t> hits(kPoints, 0);
  for (uint64_t t = 0; t < trials; ++t) {
    rng::Stream st(seed, 0x6d617267 /* "marg" */, t);
    const double g = std::log1p(-st.uniform01()) * std::log1p(-st.uniform01());
    for (int i = 0; i < kPoints; ++i) hits[i] += g <= r[i];
  }
  double worst_z = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double f = marginal_cdf(r[i]);
    const double se = std::sqrt(std::max(f * (1.0 - f), 1e-300) / double(trials));
    worst_z = std::max(worst_z, std::abs(double(hits[i]) / double(trials) - f) / se);
  }
  CheckOutcome c;
  c.name = "marginal_cdf_vs_mc";
  c.pass = worst_z <= 3.0;
  c.stats = {{"points", std::to_string(kPoints)},
             {"trials", fmt_u64(trials)},
             {"worst_z", fmt_double(worst_z)}};
  return c;
}

/// Binomial standard error evaluated at the hypothesized rate; avoids the
/// degenerate zero-hit band when the joint probability is below 1/trials.
inline double binomial_se_at(double p, uint64_t trials) {
  p = std::clamp(p, 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / double(trials));
}

/// Lattice MVN CDF against brute-force MC on random correlation matrices.
inline CheckOutcome check_mvn_vs_bruteforce(int cases, uint64_t trials, uint64_t seed) {
  const double xs[] = {-1.5, 0.0, 1.0};
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const int n = 2 + i % 6;
    const CorrelationMatrix corr = random_correlation(n, rng::derive_seed(seed, 100 + i));
    const double x = xs[i % 3];
    const MvnResult q = mvn_cdf_equicoordinate(corr, x, 1e-6, rng::derive_seed(seed, 200 + i));
    const McEstimate b = mvn_cdf_brute_force(corr, x, trials, rng::derive_seed(seed, 300 + i));
    const double se = binomial_se_at(std::max(b.estimate, q.value), trials);
    const double band = 3.0 * (se + q.error_estimate) + 1e-12;
    worst = std::max(worst, std::abs(q.value - b.estimate) / band);
  }
  CheckOutcome c;
  c.name = "mvn_qmc_vs_bruteforce";
  c.pass = worst <= 1.0;
  c.stats = {{"cases", std::to_string(cases)},
             {"trials", fmt_u64(trials)},
             {"worst_ratio", fmt_double(worst)}};
  return c;
}

/// Bivariate equicoordinate CDF at x = 0 against the arcsine orthant formula.
inline CheckOutcome check_bivariate_closed_form(uint64_t seed) {
  const double rhos[] = {-0.7, -0.2, 0.3, 0.5, 0.9};
  double worst = 0.0;
  for (double rho : rhos) {
    const CorrelationMatrix corr = correlation_from_entries(2, {1.0, rho, rho, 1.0});
    MvnOptions opt;
    opt.accuracy = 1e-7;
    const MvnResult q = mvn_cdf_equicoordinate(corr, 0.0, opt, seed);
    const double exact = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
    worst = std::max(worst, std::abs(q.value - exact));
  }
  CheckOutcome c;
  c.name = "bivariate_closed_form";
  c.pass = worst <= 1e-5;
  c.stats = {{"worst_abs_err", fmt_double(worst)}};
  return c;
}

/// Analytic OP (both theorems) against copula-model simulation.
inline CheckOutcome check_outage_analytic_vs_mc(ValidateBudget budget, uint64_t seed) {
  const uint64_t trials = budget == ValidateBudget::full ? 10000000 : 1000000;
  struct Case {
    int k;
    double snr_db;
    User user;
  };
  const std::vector<Case> cases =
      budget == ValidateBudget::full
          ? std::vector<Case>{{1, 60.0, User::u2}, {2, 60.0, User::u1},
                              {2, 55.0, User::u1}, {2, 60.0, User::u2},
                              {3, 55.0, User::u2}, {5, 45.0, User::u1}}
          : std::vector<Case>{{1, 60.0, User::u2}, {2, 55.0, User::u1}};
  double worst = 0.0;
  for (size_t i = 0; i < cases.size(); ++i) {
    const Case& cs = cases[i];
    SystemParams p;
    p.snr_avg = db_to_linear(cs.snr_db);
    const CorrelationMatrix corr =
        build_correlation_matrix(PortGrid{cs.k, cs.k, 1.0, 1.0});
    const MvnResult analytic =
        cs.user == User::u1
            ? outage_u1(corr, p, 1e-7, rng::derive_seed(seed, 400 + i))
            : outage_u2(corr, p, 1e-7, rng::derive_seed(seed, 500 + i));
    const McEstimate mc = estimate_outage(corr, p, cs.user, McModel::copula, trials,
                                          rng::derive_seed(seed, 600 + i));
    const double band = 3.0 * (mc.standard_error + analytic.error_estimate) + 1e-12;
    worst = std::max(worst, std::abs(analytic.value - mc.estimate) / band);
  }
  CheckOutcome c;
  c.name = "analytic_vs_mc_outage";
  c.pass = worst <= 1.0;
  c.stats = {{"cases", std::to_string(cases.size())},
             {"trials", fmt_u64(trials)},
             {"worst_ratio", fmt_double(worst)}};
  return c;
}

/// Runs every cross-check and prints a machine-readable report.  Returns
/// overall pass/fail.
inline bool self_validate(ValidateBudget budget, uint64_t seed, std::ostream& os) {
  const uint64_t marg_trials = budget == ValidateBudget::full ? 10000000 : 1000000;
  const int mvn_cases = budget == ValidateBudget::full ? 25 : 6;
  const uint64_t mvn_trials = budget == ValidateBudget::full ? 1000000 : 100000;
  std::vector<CheckOutcome> checks;
  checks.push_back(check_marginal_vs_sampler([](double r) { return equiv_gain_cdf(r); },
                                             marg_trials, rng::derive_seed(seed, 1)));
  checks.push_back(check_mvn_vs_bruteforce(mvn_cases, mvn_trials, rng::derive_seed(seed, 2)));
  checks.push_back(check_bivariate_closed_form(rng::derive_seed(seed, 3)));
  checks.push_back(check_outage_analytic_vs_mc(budget, rng::derive_seed(seed, 4)));

  int failures = 0;
  for (const CheckOutcome& c : checks) {
    os << c.line() << "\n";
    failures += c.pass ? 0 : 1;
  }
  os << "result " << (failures == 0 ? "pass" : "fail") << " checks="
     << checks.size() << " failures=" << failures << " seed=" << seed
     << " budget=" << (budget == ValidateBudget::full ? "full" : "small") << "\n";
  return failures == 0;
}

}  // namespace faswpcn
