#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "faswpcn/config.hpp"
#include "faswpcn/recipes.hpp"
#include "faswpcn/sweep.hpp"
#include "faswpcn/validate.hpp"

using namespace faswpcn;

namespace {

const std::string kMinimalConfig =
    "[system]\n"
    "snr_db = 60\n"
    "p_u1 = 0.3\np_u2 = 0.7\nalpha = 2.5\nl_p = 1.0\n"
    "d_t = 10.0\nd_u1 = 5.0\nd_u2 = 10.0\n"
    "thr_sic_db = 0.0\nthr_u1_db = 0.0\nthr_u2_db = 0.0\n"
    "[grid_u1]\nn1 = 2\nn2 = 2\nw1 = 1.0\nw2 = 1.0\n"
    "[grid_u2]\nn1 = 2\nn2 = 2\nw1 = 1.0\nw2 = 1.0\n"
    "[sweep]\nvariable = snr_db\nvalues = 55 60\n"
    "[numerics]\nmvn_accuracy = 1e-6\nmc_trials = 0\nseed = 99\n";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const size_t at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("config parsing: happy path with unit conversion") {
  const SweepSpec s = parse_config(kMinimalConfig, true);
  CHECK(s.base.snr_avg == Catch::Approx(1e6).epsilon(1e-14));  // 60 dB, once
  CHECK(s.base.thr_u2 == 1.0);                                 // 0 dB
  CHECK(s.grid_u1.n1 == 2);
  CHECK(s.values.size() == 2);
  CHECK(s.seed == 99);
  CHECK(s.mc_trials == 0);
  const Thresholds t = compute_thresholds(s.base);
  CHECK(*t.g_tilde_u2 == Catch::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("config parsing: diagnostics carry line numbers") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_config(text, true);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error(replace_once(kMinimalConfig, "alpha = 2.5", "alpha = banana"),
               "not a number");
  expect_error(replace_once(kMinimalConfig, "p_u1 = 0.3", "p_u1 = 0.4"),
               "sum to 1");
  expect_error(replace_once(kMinimalConfig, "values = 55 60", "values = 60 55"),
               "strictly increasing");
  expect_error(replace_once(kMinimalConfig, "mc_trials = 0", "mc_trials = 5000"),
               ">= 10000");
  expect_error(replace_once(kMinimalConfig, "snr_db = 60\n", ""), "missing key");
  expect_error(replace_once(kMinimalConfig, "[sweep]", "[sweeep]"), "unknown section");
  expect_error(kMinimalConfig + "typo_key = 1\n", "unknown key");
  expect_error(replace_once(kMinimalConfig, "variable = snr_db",
                            "variable = n_ports") +
                   "",
               "perfect squares");  // 55 and 60 are not squares
  // line number of the offending key is part of the message
  try {
    parse_config(replace_once(kMinimalConfig, "alpha = 2.5", "alpha = banana"), true);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
}

TEST_CASE("config parsing: curve lists and sweep variables") {
  const std::string with_curves =
      replace_once(kMinimalConfig, "[sweep]\nvariable = snr_db\nvalues = 55 60\n",
                   "[sweep]\nvariable = snr_db\nvalues = 55 60\ncurve_ports = 1 4 9\n");
  const SweepSpec s = parse_config(with_curves, true);
  CHECK(s.curve_ports == std::vector<int>{1, 4, 9});
  CHECK(expand_sweep(s).size() == 6);

  const std::string n_ports =
      replace_once(kMinimalConfig, "variable = snr_db\nvalues = 55 60",
                   "variable = n_ports\nvalues = 1 4 9");
  const auto points = expand_sweep(parse_config(n_ports, true));
  REQUIRE(points.size() == 3);
  CHECK(points[2].grid_u1.n1 == 3);
  CHECK(points[2].grid_u1.w1 == 1.0);

  const std::string aperture =
      replace_once(kMinimalConfig, "variable = snr_db\nvalues = 55 60",
                   "variable = aperture_w\nvalues = 1 4 9");
  const auto apts = expand_sweep(parse_config(aperture, true));
  CHECK(apts[1].grid_u1.w1 == Catch::Approx(2.0));
  CHECK(apts[1].grid_u1.n1 == 2);

  CHECK_THROWS_AS(
      parse_config(replace_once(n_ports, "values = 1 4 9",
                                "values = 1 4 9\ncurve_ports = 4 9"),
                   true),
      ConfigError);
}

TEST_CASE("run_sweep: analytic-only CSV surface") {
  const SweepSpec s = parse_config(kMinimalConfig, true);
  const SweepOutput out = run_sweep(s, 2);
  REQUIRE(out.rows.size() == 2);
  const std::string csv = out.csv();
  CHECK(csv.rfind("sweepValue,opU1,opU2,opU1Asym,opU2Asym,mvnErrU1,mvnErrU2\n", 0) == 0);
  CHECK(csv.back() == '\n');
  CHECK(csv.find(",,") == std::string::npos);  // no empty analytic cells
  // 60 dB row reproduces the single-point values
  CHECK(out.rows[1].out.op_u2 > 0.02);
  CHECK(out.rows[1].out.op_u2 < 0.04);
  // monotone in SNR
  CHECK(out.rows[1].out.op_u1 < out.rows[0].out.op_u1);
}

TEST_CASE("run_sweep: MC columns, resolution policy and status") {
  // 2x2 grid: at 70 dB the strong user's OP ~ 3e-7 sits below 10/mc_trials
  std::string cfg = replace_once(kMinimalConfig, "values = 55 60", "values = 60 70");
  cfg = replace_once(cfg, "mc_trials = 0", "mc_trials = 1000000");
  const SweepSpec s = parse_config(cfg, true);
  const SweepOutput out = run_sweep(s, 2);
  REQUIRE(out.rows.size() == 2);
  const std::string csv = out.csv();
  CHECK(csv.rfind("sweepValue,opU1,opU2,opU1Asym,opU2Asym,mvnErrU1,mvnErrU2,"
                  "mcU1,mcU1CiLow,mcU1CiHigh,mcU2,mcU2CiLow,mcU2CiHigh,mcStatus\n",
                  0) == 0);
  CHECK(out.rows[0].mc_u1.has_value());  // OP(u1) ~ 9.6e-4 >= 10/trials
  CHECK(out.rows[0].mc_u2.has_value());
  CHECK(out.rows[0].mc_status == "ok");
  CHECK_FALSE(out.rows[1].mc_u1.has_value());  // ~1.3e-6: below MC resolution
  CHECK(out.rows[1].mc_u2.has_value());        // ~9.4e-5 is still resolvable
  CHECK(out.rows[1].mc_status.find("u1_below_mc_resolution") != std::string::npos);
  CHECK(csv.find(",,,") != std::string::npos);  // the empty MC cells
}

TEST_CASE("run_sweep: infeasible split is a data row, not an error") {
  const std::string cfg =
      replace_once(kMinimalConfig, "thr_sic_db = 0.0", "thr_sic_db = 10.0");
  const SweepOutput out = run_sweep(parse_config(cfg, true), 1);
  for (const SweepRow& r : out.rows) {
    CHECK(r.out.op_u1 == 1.0);
    CHECK(r.out.op_u1_asym == 1.0);
    CHECK(r.out.mvn_err_u1 == 0.0);
    CHECK(r.out.op_u2 < 1.0);
  }
}

TEST_CASE("run_sweep is deterministic and thread-count independent") {
  const SweepSpec s = parse_config(kMinimalConfig, true);
  const std::string a = run_sweep(s, 1).csv();
  const std::string b = run_sweep(s, 2).csv();
  const std::string c = run_sweep(s, 2).csv();
  CHECK(a == b);
  CHECK(b == c);
}

TEST_CASE("evaluate_point reproduces a sweep row bit for bit") {
  std::string cfg = replace_once(kMinimalConfig, "mc_trials = 0", "mc_trials = 10000");
  const SweepSpec s = parse_config(cfg, true);
  const SweepOutput table = run_sweep(s, 2);
  const auto points = expand_sweep(s);
  for (size_t i = 0; i < points.size(); ++i) {
    const PointReport rep = evaluate_point(s, points[i]);
    CHECK(rep.row.out.op_u1 == table.rows[i].out.op_u1);
    CHECK(rep.row.out.op_u2 == table.rows[i].out.op_u2);
    CHECK(rep.row.out.op_u1_asym == table.rows[i].out.op_u1_asym);
    CHECK(rep.row.out.op_u2_asym == table.rows[i].out.op_u2_asym);
    CHECK(rep.row.out.mvn_err_u1 == table.rows[i].out.mvn_err_u1);
    CHECK(rep.row.out.mvn_err_u2 == table.rows[i].out.mvn_err_u2);
    REQUIRE(rep.row.mc_u1.has_value() == table.rows[i].mc_u1.has_value());
    if (rep.row.mc_u1)
      CHECK(rep.row.mc_u1->estimate == table.rows[i].mc_u1->estimate);
  }
  const PointReport rep = evaluate_point(s, points[0]);
  CHECK(rep.text().find("g_tilde_u2 = 0.25") == std::string::npos);  // row 0 is 55 dB
  CHECK(rep.text().find("op_u1 = ") != std::string::npos);
}

TEST_CASE("point report prints the resolved intermediates") {
  const SweepSpec s = parse_config(kMinimalConfig, false);
  const PointReport rep = evaluate_point(s);
  const std::string text = rep.text();
  CHECK(text.find("feasible_u1 = true") != std::string::npos);
  CHECK(text.find("g_tilde_u2 = 0.25") != std::string::npos);
  CHECK(text.find("marginal_u1_exact = 0.16508") != std::string::npos);
  CHECK(text.find("equicoordinate_x_u1 = ") != std::string::npos);
  CHECK(text.find("op_u2 = ") != std::string::npos);
}

TEST_CASE("bundled recipes parse and match the files on disk") {
  for (const std::string& name : recipe_names()) {
    const std::string text = recipe_config(name);
    CHECK_NOTHROW(parse_config(text, true));
    const std::string disk = read_file(std::string(FASWPCN_RECIPES_DIR) + "/" + name + ".ini");
    CHECK(disk == text);
  }
  const SweepSpec fig2a = parse_config(recipe_config("fig2a"), true);
  CHECK(fig2a.curve_ports == std::vector<int>{1, 4, 9, 16, 25});
  CHECK(fig2a.values.front() == 30.0);
  CHECK(fig2a.values.back() == 70.0);
  const SweepSpec fig3b = parse_config(recipe_config("fig3b"), true);
  CHECK(fig3b.variable == SweepVariable::aperture_w);
  CHECK_THROWS_AS(recipe_config("fig9z"), std::invalid_argument);
}

TEST_CASE("metadata sidecar records the resolved configuration") {
  const SweepSpec s = parse_config(kMinimalConfig, true);
  const std::string j = sweep_metadata_json(s, "sweep test.ini");
  CHECK(j.find("\"seed\": 99") != std::string::npos);
  CHECK(j.find("\"snr_db\": 60") != std::string::npos);
  CHECK(j.find("\"variable\": \"snr_db\"") != std::string::npos);
  CHECK(j.find("\"version\"") != std::string::npos);
}

TEST_CASE("self-validation passes on the small budget with stable text") {
  std::ostringstream a, b;
  CHECK(self_validate(ValidateBudget::small, 7, a));
  CHECK(self_validate(ValidateBudget::small, 7, b));
  CHECK(a.str() == b.str());
  CHECK(a.str().find("result pass") != std::string::npos);
  CHECK(a.str().find("check marginal_cdf_vs_mc status=pass") != std::string::npos);
}

TEST_CASE("a 1% marginal perturbation trips the validation harness") {
  const auto tampered = [](double r) {
    return std::min(1.0, 1.01 * equiv_gain_cdf(r));
  };
  const CheckOutcome c = check_marginal_vs_sampler(tampered, 1000000, 7);
  CHECK_FALSE(c.pass);
}

TEST_CASE("CLI binary: exit codes and stdout plumbing") {
  const std::string cli = FASWPCN_CLI_PATH;
  const std::string dir = FASWPCN_WORK_DIR;
  auto run = [](const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
  };
  CHECK(run(cli + " sweep /nonexistent.ini >/dev/null 2>&1") == 1);
  CHECK(run(cli + " bogus-subcommand >/dev/null 2>&1") == 1);
  CHECK(run(cli + " recipe fig9z >/dev/null 2>&1") == 1);

  const std::string cfg_path = dir + "/cli_test_config.ini";
  {
    std::ofstream out(cfg_path);
    out << kMinimalConfig;
  }
  const std::string out_path = dir + "/cli_test_out.csv";
  CHECK(run(cli + " sweep " + cfg_path + " --out " + out_path + " >/dev/null 2>&1") == 0);
  const std::string csv = read_file(out_path);
  CHECK(csv.rfind("sweepValue,", 0) == 0);
  const std::string meta = read_file(out_path + ".meta.json");
  CHECK(meta.find("\"seed\": 99") != std::string::npos);
  CHECK(run(cli + " point " + cfg_path + " --row 1 >/dev/null 2>&1") == 0);
  CHECK(run(cli + " point " + cfg_path + " --row 5 >/dev/null 2>&1") == 1);
}
