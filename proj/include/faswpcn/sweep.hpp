// Sweep execution and its CSV / report surfaces.  Rows are dispatched to a
// worker pool and written back in sweep order; every row derives its random
// streams from the config seed alone, so a single-point re-evaluation of any
// row reproduces it bit for bit, and repeated runs are byte-identical.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "faswpcn/config.hpp"
#include "faswpcn/format.hpp"
#include "faswpcn/montecarlo.hpp"
#include "faswpcn/outage.hpp"
#include "faswpcn/version.hpp"

namespace faswpcn {

namespace sweep_detail {
inline constexpr uint64_t kSaltMcU1 = 5;
inline constexpr uint64_t kSaltMcU2 = 6;
}  // namespace sweep_detail

/// One fully resolved evaluation point of a sweep.
struct ResolvedPoint {
  SystemParams params;
  PortGrid grid_u1, grid_u2;
  std::string curve;  // empty when the sweep has no curve families
  double sweep_value = 0.0;
};

inline std::vector<ResolvedPoint> expand_sweep(const SweepSpec& s) {
  if (!s.has_sweep) throw ConfigError("expand_sweep: config has no [sweep] section");
  struct Curve {
    std::string label;
    PortGrid g1, g2;
  };
  std::vector<Curve> curves;
  if (!s.curve_ports.empty()) {
    for (int ports : s.curve_ports) {
      const int k = int(std::lround(std::sqrt(double(ports))));
      PortGrid g1{k, k, s.grid_u1.w1, s.grid_u1.w2};
      PortGrid g2{k, k, s.grid_u2.w1, s.grid_u2.w2};
      curves.push_back({"N=" + std::to_string(ports), g1, g2});
    }
  } else if (!s.curve_apertures.empty()) {
    for (double a : s.curve_apertures) {
      const double w = std::sqrt(a);
      PortGrid g1{s.grid_u1.n1, s.grid_u1.n2, w, w};
      PortGrid g2{s.grid_u2.n1, s.grid_u2.n2, w, w};
      curves.push_back({"W=" + fmt_double(a), g1, g2});
    }
  } else {
    curves.push_back({"", s.grid_u1, s.grid_u2});
  }

  std::vector<ResolvedPoint> out;
  out.reserve(curves.size() * s.values.size());
  for (const Curve& c : curves) {
    for (double v : s.values) {
      ResolvedPoint p;
      p.params = s.base;
      p.grid_u1 = c.g1;
      p.grid_u2 = c.g2;
      p.curve = c.label;
      p.sweep_value = v;
      switch (s.variable) {
        case SweepVariable::snr_db:
          p.params.snr_avg = db_to_linear(v);
          break;
        case SweepVariable::n_ports: {
          const int k = int(std::lround(std::sqrt(v)));
          p.grid_u1.n1 = p.grid_u1.n2 = k;
          p.grid_u2.n1 = p.grid_u2.n2 = k;
          break;
        }
        case SweepVariable::aperture_w: {
          const double w = std::sqrt(v);
          p.grid_u1.w1 = p.grid_u1.w2 = w;
          p.grid_u2.w1 = p.grid_u2.w2 = w;
          break;
        }
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

struct SweepRow {
  std::string curve;
  double sweep_value = 0.0;
  OutageResult out;
  std::optional<McEstimate> mc_u1, mc_u2;
  std::string mc_status;  // "ok" or semicolon-joined below-resolution tags
};

struct SweepOutput {
  bool has_curves = false;
  bool has_mc = false;
  std::vector<SweepRow> rows;

  std::string csv() const {
    std::string s;
    if (has_curves) s += "curve,";
    s += "sweepValue,opU1,opU2,opU1Asym,opU2Asym,mvnErrU1,mvnErrU2";
    if (has_mc)
      s += ",mcU1,mcU1CiLow,mcU1CiHigh,mcU2,mcU2CiLow,mcU2CiHigh,mcStatus";
    s += "\n";
    for (const SweepRow& r : rows) {
      if (has_curves) s += r.curve + ",";
      s += fmt_double(r.sweep_value) + "," + fmt_double(r.out.op_u1) + "," +
           fmt_double(r.out.op_u2) + "," + fmt_double(r.out.op_u1_asym) + "," +
           fmt_double(r.out.op_u2_asym) + "," + fmt_double(r.out.mvn_err_u1) + "," +
           fmt_double(r.out.mvn_err_u2);
      if (has_mc) {
        auto cell = [](const std::optional<McEstimate>& e) {
          if (!e) return std::string(",,,");
          return "," + fmt_double(e->estimate) + "," + fmt_double(e->ci_low) + "," +
                 fmt_double(e->ci_high);
        };
        s += cell(r.mc_u1) + cell(r.mc_u2) + "," + r.mc_status;
      }
      s += "\n";
    }
    return s;
  }
};

/// Evaluates one resolved point with prebuilt correlation matrices.  The MC
/// columns follow the resolution policy: simulation is attempted only when
/// the analytic OP is at least 10/trials (an infeasible split is exact and
/// trivially "resolved").
inline SweepRow evaluate_row(const ResolvedPoint& pt, const CorrelationMatrix& c1,
                             const CorrelationMatrix& c2, double mvn_accuracy,
                             uint64_t mc_trials, uint64_t seed) {
  SweepRow row;
  row.curve = pt.curve;
  row.sweep_value = pt.sweep_value;
  row.out = evaluate_outage(c1, c2, pt.params, mvn_accuracy, seed);
  if (mc_trials == 0) return row;

  const double floor = 10.0 / double(mc_trials);
  std::string status;
  if (row.out.op_u1 >= floor) {
    row.mc_u1 = estimate_outage(c1, pt.params, User::u1, McModel::copula, mc_trials,
                                rng::derive_seed(seed, sweep_detail::kSaltMcU1));
  } else {
    status += "u1_below_mc_resolution";
  }
  if (row.out.op_u2 >= floor) {
    row.mc_u2 = estimate_outage(c2, pt.params, User::u2, McModel::copula, mc_trials,
                                rng::derive_seed(seed, sweep_detail::kSaltMcU2));
  } else {
    status += status.empty() ? "u2_below_mc_resolution" : ";u2_below_mc_resolution";
  }
  row.mc_status = status.empty() ? "ok" : status;
  return row;
}

namespace sweep_detail {

struct GridKey {
  int n1, n2;
  double w1, w2;
  bool operator<(const GridKey& o) const {
    return std::tie(n1, n2, w1, w2) < std::tie(o.n1, o.n2, o.w1, o.w2);
  }
};

inline const CorrelationMatrix& cached_matrix(
    std::map<GridKey, CorrelationMatrix>& cache, const PortGrid& g) {
  const GridKey key{g.n1, g.n2, g.w1, g.w2};
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_correlation_matrix(g)).first;
  return it->second;
}

}  // namespace sweep_detail

/// Runs the whole sweep.  threads = 0 picks the hardware concurrency; the
/// output is independent of the thread count.
inline SweepOutput run_sweep(const SweepSpec& spec, int threads = 0) {
  const std::vector<ResolvedPoint> points = expand_sweep(spec);
  SweepOutput out;
  out.has_curves = !spec.curve_ports.empty() || !spec.curve_apertures.empty();
  out.has_mc = spec.mc_trials > 0;
  out.rows.resize(points.size());

  std::map<sweep_detail::GridKey, CorrelationMatrix> cache;
  std::vector<std::pair<const CorrelationMatrix*, const CorrelationMatrix*>> mats;
  mats.reserve(points.size());
  for (const ResolvedPoint& p : points)
    mats.emplace_back(&sweep_detail::cached_matrix(cache, p.grid_u1),
                      &sweep_detail::cached_matrix(cache, p.grid_u2));

  if (threads <= 0) threads = int(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, int(points.size())));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
      out.rows[i] = evaluate_row(points[i], *mats[i].first, *mats[i].second,
                                 spec.mvn_accuracy, spec.mc_trials, spec.seed);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

/// Single-point diagnostic report: resolved parameters, thresholds, the
/// marginal and equicoordinate intermediates, the outage results and the
/// optional MC cross-check.  Values match the corresponding sweep row bit
/// for bit because the same evaluate_row path and seed derivation are used.
struct PointReport {
  ResolvedPoint point;
  Thresholds thresholds;
  double marg_u1_exact = 0.0, marg_u1_asym = 0.0;
  double marg_u2_exact = 0.0, marg_u2_asym = 0.0;
  double x_u1 = 0.0, x_u2 = 0.0;  // equicoordinate points (exact marginal)
  SweepRow row;

  std::string text() const {
    std::string s;
    auto kv = [&s](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    kv("version", kVersion);
    kv("curve", point.curve.empty() ? "-" : point.curve);
    kv("sweep_value", fmt_double(point.sweep_value));
    kv("snr_avg_linear", fmt_double(point.params.snr_avg));
    kv("grid_u1", std::to_string(point.grid_u1.n1) + "x" + std::to_string(point.grid_u1.n2) +
                      " w=" + fmt_double(point.grid_u1.w1) + "x" + fmt_double(point.grid_u1.w2));
    kv("grid_u2", std::to_string(point.grid_u2.n1) + "x" + std::to_string(point.grid_u2.n2) +
                      " w=" + fmt_double(point.grid_u2.w1) + "x" + fmt_double(point.grid_u2.w2));
    kv("feasible_u1", thresholds.feasible_u1 ? "true" : "false");
    kv("feasible_u2", thresholds.feasible_u2 ? "true" : "false");
    kv("g_tilde_u1", fmt_double(thresholds.g_tilde_u1));
    kv("g_tilde_sic", thresholds.g_tilde_sic ? fmt_double(*thresholds.g_tilde_sic) : "-");
    kv("g_tilde_max", thresholds.g_tilde_max ? fmt_double(*thresholds.g_tilde_max) : "-");
    kv("g_tilde_u2", thresholds.g_tilde_u2 ? fmt_double(*thresholds.g_tilde_u2) : "-");
    kv("marginal_u1_exact", thresholds.feasible_u1 ? fmt_double(marg_u1_exact) : "-");
    kv("marginal_u1_asym", thresholds.feasible_u1 ? fmt_double(marg_u1_asym) : "-");
    kv("marginal_u2_exact", thresholds.feasible_u2 ? fmt_double(marg_u2_exact) : "-");
    kv("marginal_u2_asym", thresholds.feasible_u2 ? fmt_double(marg_u2_asym) : "-");
    kv("equicoordinate_x_u1", thresholds.feasible_u1 ? fmt_double(x_u1) : "-");
    kv("equicoordinate_x_u2", thresholds.feasible_u2 ? fmt_double(x_u2) : "-");
    kv("op_u1", fmt_double(row.out.op_u1));
    kv("op_u2", fmt_double(row.out.op_u2));
    kv("op_u1_asym", fmt_double(row.out.op_u1_asym));
    kv("op_u2_asym", fmt_double(row.out.op_u2_asym));
    kv("mvn_err_u1", fmt_double(row.out.mvn_err_u1));
    kv("mvn_err_u2", fmt_double(row.out.mvn_err_u2));
    if (row.mc_u1 || row.mc_u2) {
      auto mc = [&](const char* tag, const std::optional<McEstimate>& e) {
        if (!e) {
          kv(std::string("mc_") + tag, "below_mc_resolution");
          return;
        }
        kv(std::string("mc_") + tag, fmt_double(e->estimate));
        kv(std::string("mc_") + tag + "_se", fmt_double(e->standard_error));
        kv(std::string("mc_") + tag + "_ci",
           fmt_double(e->ci_low) + ".." + fmt_double(e->ci_high));
      };
      mc("u1", row.mc_u1);
      mc("u2", row.mc_u2);
    }
    return s;
  }
};

inline PointReport evaluate_point(const SweepSpec& spec, const ResolvedPoint& pt) {
  PointReport rep;
  rep.point = pt;
  rep.thresholds = compute_thresholds(pt.params);
  const CorrelationMatrix c1 = build_correlation_matrix(pt.grid_u1);
  const CorrelationMatrix c2 = build_correlation_matrix(pt.grid_u2);
  if (rep.thresholds.feasible_u1) {
    const double g = *rep.thresholds.g_tilde_max;
    rep.marg_u1_exact = equiv_gain_cdf(g);
    rep.marg_u1_asym = equiv_gain_cdf_asymptotic(g);
    rep.x_u1 = specfun::std_normal_quantile(
        std::clamp(rep.marg_u1_exact, 1e-300, 1.0 - 1e-16));
  }
  if (rep.thresholds.feasible_u2) {
    const double g = *rep.thresholds.g_tilde_u2;
    rep.marg_u2_exact = equiv_gain_cdf(g);
    rep.marg_u2_asym = equiv_gain_cdf_asymptotic(g);
    rep.x_u2 = specfun::std_normal_quantile(
        std::clamp(rep.marg_u2_exact, 1e-300, 1.0 - 1e-16));
  }
  rep.row = evaluate_row(pt, c1, c2, spec.mvn_accuracy, spec.mc_trials, spec.seed);
  return rep;
}

/// Base-configuration point (no sweep resolution applied).
inline PointReport evaluate_point(const SweepSpec& spec) {
  ResolvedPoint pt;
  pt.params = spec.base;
  pt.grid_u1 = spec.grid_u1;
  pt.grid_u2 = spec.grid_u2;
  pt.sweep_value = spec.snr_db;
  return evaluate_point(spec, pt);
}

/// Sidecar metadata: the fully resolved configuration, seed and version.
inline std::string sweep_metadata_json(const SweepSpec& s, const std::string& command) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = s.seed;
  j["mvn_accuracy"] = s.mvn_accuracy;
  j["mc_trials"] = s.mc_trials;
  j["system"] = {{"snr_db", s.snr_db},      {"p_u1", s.base.p_u1},
                 {"p_u2", s.base.p_u2},     {"alpha", s.base.alpha},
                 {"l_p", s.base.l_p},       {"d_t", s.base.d_t},
                 {"d_u1", s.base.d_u1},     {"d_u2", s.base.d_u2},
                 {"thr_sic", s.base.thr_sic},
                 {"thr_u1", s.base.thr_u1}, {"thr_u2", s.base.thr_u2}};
  auto grid_json = [](const PortGrid& g) {
    return nlohmann::json{{"n1", g.n1}, {"n2", g.n2}, {"w1", g.w1}, {"w2", g.w2}};
  };
  j["grid_u1"] = grid_json(s.grid_u1);
  j["grid_u2"] = grid_json(s.grid_u2);
  if (s.has_sweep) {
    j["sweep"] = {{"variable", to_string(s.variable)}, {"values", s.values}};
    if (!s.curve_ports.empty()) j["sweep"]["curve_ports"] = s.curve_ports;
    if (!s.curve_apertures.empty()) j["sweep"]["curve_apertures"] = s.curve_apertures;
  }
  return j.dump(2) + "\n";
}

}  // namespace faswpcn
