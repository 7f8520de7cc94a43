// Command-line front end: config-driven sweeps, single-point evaluation,
// bundled figure recipes and the self-validation suite.  CSV goes to a file
// or stdout; a JSON sidecar with the resolved configuration accompanies
// file output.  Exit codes: 0 success, 1 config/usage error, 2 validation
// failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "faswpcn/config.hpp"
#include "faswpcn/recipes.hpp"
#include "faswpcn/sweep.hpp"
#include "faswpcn/validate.hpp"
#include "faswpcn/version.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw faswpcn::ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << content;
}

struct OutputFlags {
  std::string out_path;
  std::string meta_path;
  int threads = 0;
};

void emit(const faswpcn::SweepSpec& spec, const faswpcn::SweepOutput& table,
          const OutputFlags& flags, const std::string& command) {
  const std::string csv = table.csv();
  std::string meta_path = flags.meta_path;
  if (!flags.out_path.empty()) {
    write_file(flags.out_path, csv);
    if (meta_path.empty()) meta_path = flags.out_path + ".meta.json";
  } else {
    std::cout << csv;
  }
  if (!meta_path.empty())
    write_file(meta_path, faswpcn::sweep_metadata_json(spec, command));
}

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_option("--out", flags.out_path, "Write CSV to this path (default: stdout)");
  cmd->add_option("--meta", flags.meta_path,
                  "Sidecar metadata path (default: <out>.meta.json when --out is set)");
  cmd->add_option("--threads", flags.threads,
                  "Worker threads for sweep points (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage analysis for fluid-antenna NOMA users in a wireless "
               "powered downlink"};
  app.set_version_flag("--version", faswpcn::kVersion);
  app.require_subcommand(1);

  // sweep <config>
  std::string sweep_config_path;
  OutputFlags sweep_flags;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a config-driven parameter sweep");
  sweep_cmd->add_option("config", sweep_config_path, "Config file")->required();
  add_output_flags(sweep_cmd, sweep_flags);

  // point <config> [--row K] [--curve LABEL]
  std::string point_config_path;
  int point_row = -1;
  std::string point_curve;
  CLI::App* point_cmd =
      app.add_subcommand("point", "Evaluate a single configuration point");
  point_cmd->add_option("config", point_config_path, "Config file")->required();
  point_cmd->add_option("--row", point_row,
                        "Evaluate sweep row K (0-based) instead of the base point");
  point_cmd->add_option("--curve", point_curve,
                        "Curve label for --row (e.g. N=4 or W=9), defaults to the first");

  // validate [--budget small|full] [--seed S]
  std::string budget = "small";
  uint64_t validate_seed = 12345;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Run the self-validation suite");
  validate_cmd->add_option("--budget", budget, "small or full")
      ->check(CLI::IsMember({"small", "full"}));
  validate_cmd->add_option("--seed", validate_seed, "Seed for the validation runs");

  // recipe <name> [--mc-trials T] [--emit-config]
  std::string recipe_name;
  uint64_t recipe_mc_trials = 0;
  bool recipe_mc_set = false;
  bool emit_config = false;
  OutputFlags recipe_flags;
  CLI::App* recipe_cmd = app.add_subcommand("recipe", "Run a bundled figure sweep");
  recipe_cmd->add_option("name", recipe_name, "fig2a, fig2b, fig3a or fig3b")->required();
  recipe_cmd->add_option("--mc-trials", recipe_mc_trials,
                         "Override the Monte Carlo trial count (0 disables MC columns)")
      ->each([&](const std::string&) { recipe_mc_set = true; });
  recipe_cmd->add_flag("--emit-config", emit_config,
                       "Print the recipe's config text instead of running it");
  add_output_flags(recipe_cmd, recipe_flags);

  try {
    app.parse(argc, argv);

    if (*sweep_cmd) {
      const faswpcn::SweepSpec spec =
          faswpcn::parse_config(read_file(sweep_config_path), true);
      const faswpcn::SweepOutput table = faswpcn::run_sweep(spec, sweep_flags.threads);
      emit(spec, table, sweep_flags, "sweep " + sweep_config_path);
    } else if (*point_cmd) {
      const faswpcn::SweepSpec spec =
          faswpcn::parse_config(read_file(point_config_path), point_row >= 0);
      if (point_row >= 0) {
        // Sweep rows are curve-major; --row indexes within the chosen curve.
        const auto points = faswpcn::expand_sweep(spec);
        const std::string curve =
            point_curve.empty() ? points.front().curve : point_curve;
        int index = -1;
        for (size_t i = 0; i < points.size(); ++i)
          if (points[i].curve == curve && int(i % spec.values.size()) == point_row) {
            index = int(i);
            break;
          }
        if (index < 0)
          throw faswpcn::ConfigError("point: no sweep row " + std::to_string(point_row) +
                                     (point_curve.empty() ? "" : " on curve " + point_curve));
        std::cout << faswpcn::evaluate_point(spec, points[index]).text();
      } else {
        std::cout << faswpcn::evaluate_point(spec).text();
      }
    } else if (*validate_cmd) {
      const auto b = budget == "full" ? faswpcn::ValidateBudget::full
                                      : faswpcn::ValidateBudget::small;
      if (!faswpcn::self_validate(b, validate_seed, std::cout)) return 2;
    } else if (*recipe_cmd) {
      std::string text = faswpcn::recipe_config(recipe_name);
      if (emit_config) {
        std::cout << text;
        return 0;
      }
      faswpcn::SweepSpec spec = faswpcn::parse_config(text, true);
      if (recipe_mc_set) spec.mc_trials = recipe_mc_trials;
      const faswpcn::SweepOutput table = faswpcn::run_sweep(spec, recipe_flags.threads);
      emit(spec, table, recipe_flags, "recipe " + recipe_name);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const faswpcn::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
