// Config-file parsing for sweeps and single-point runs.  The format is a
// small INI dialect: [section] headers, key = value lines, '#' comments,
// whitespace- or comma-separated value lists.  Diagnostics carry line
// numbers; unknown keys are rejected.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "faswpcn/channel.hpp"
#include "faswpcn/portgrid.hpp"

namespace faswpcn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace config_detail {

struct Entry {
  std::string value;
  int line = 0;
};

struct IniFile {
  std::map<std::string, std::map<std::string, Entry>> sections;
};

inline std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

inline IniFile parse_ini(std::string_view text) {
  IniFile f;
  std::string section;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view body = raw.substr(0, raw.find('#'));
    std::string line = trim(body);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
      f.sections[section];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": key outside any section");
    if (f.sections[section].count(key))
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    f.sections[section][key] = {value, line_no};
  }
  return f;
}

inline const Entry& require(const IniFile& f, const std::string& sec, const std::string& key) {
  auto s = f.sections.find(sec);
  if (s == f.sections.end()) throw ConfigError("config: missing section [" + sec + "]");
  auto k = s->second.find(key);
  if (k == s->second.end())
    throw ConfigError("config: missing key '" + key + "' in [" + sec + "]");
  return k->second;
}

inline const Entry* lookup(const IniFile& f, const std::string& sec, const std::string& key) {
  auto s = f.sections.find(sec);
  if (s == f.sections.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

inline double to_double(const Entry& e, const std::string& what) {
  try {
    size_t used = 0;
    double v = std::stod(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(e.line) + ": '" + what +
                      "' is not a number: '" + e.value + "'");
  }
}

inline long long to_int(const Entry& e, const std::string& what) {
  try {
    size_t used = 0;
    long long v = std::stoll(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(e.line) + ": '" + what +
                      "' is not an integer: '" + e.value + "'");
  }
}

inline uint64_t to_uint64(const Entry& e, const std::string& what) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(e.line) + ": '" + what +
                      "' is not a non-negative integer: '" + e.value + "'");
  }
}

inline std::vector<double> to_list(const Entry& e, const std::string& what) {
  std::string s = e.value;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(e.line) + ": '" + what +
                        "' has a non-numeric element: '" + tok + "'");
    }
  }
  if (out.empty())
    throw ConfigError("config line " + std::to_string(e.line) + ": '" + what + "' is empty");
  return out;
}

inline void reject_unknown(const IniFile& f,
                           const std::map<std::string, std::set<std::string>>& schema) {
  for (const auto& [sec, keys] : f.sections) {
    auto it = schema.find(sec);
    if (it == schema.end()) throw ConfigError("config: unknown section [" + sec + "]");
    for (const auto& [key, entry] : keys)
      if (!it->second.count(key))
        throw ConfigError("config line " + std::to_string(entry.line) + ": unknown key '" +
                          key + "' in [" + sec + "]");
  }
}

}  // namespace config_detail

enum class SweepVariable { snr_db, n_ports, aperture_w };

inline std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::snr_db: return "snr_db";
    case SweepVariable::n_ports: return "n_ports";
    case SweepVariable::aperture_w: return "aperture_w";
  }
  return "?";
}

/// One sweep run: a base configuration, the swept variable with its ordered
/// value list, optional curve families (square port counts or square
/// apertures applied to both users), and the numerics knobs.
struct SweepSpec {
  SystemParams base;  // snr_avg already linear
  double snr_db = 0.0;
  PortGrid grid_u1, grid_u2;
  bool has_sweep = false;
  SweepVariable variable = SweepVariable::snr_db;
  std::vector<double> values;
  std::vector<int> curve_ports;
  std::vector<double> curve_apertures;
  uint64_t mc_trials = 0;
  double mvn_accuracy = 1e-6;
  uint64_t seed = 12345;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline SweepSpec parse_config(const std::string& text, bool require_sweep) {
  using namespace config_detail;
  const IniFile f = parse_ini(text);
  reject_unknown(f, {
      {"system", {"snr_db", "p_u1", "p_u2", "alpha", "l_p", "d_t", "d_u1", "d_u2",
                  "thr_sic_db", "thr_u1_db", "thr_u2_db"}},
      {"grid_u1", {"n1", "n2", "w1", "w2"}},
      {"grid_u2", {"n1", "n2", "w1", "w2"}},
      {"sweep", {"variable", "values", "curve_ports", "curve_apertures"}},
      {"numerics", {"mvn_accuracy", "mc_trials", "seed"}},
  });

  SweepSpec s;
  s.snr_db = to_double(require(f, "system", "snr_db"), "snr_db");
  s.base.snr_avg = db_to_linear(s.snr_db);
  s.base.p_u1 = to_double(require(f, "system", "p_u1"), "p_u1");
  s.base.p_u2 = to_double(require(f, "system", "p_u2"), "p_u2");
  s.base.alpha = to_double(require(f, "system", "alpha"), "alpha");
  s.base.l_p = to_double(require(f, "system", "l_p"), "l_p");
  s.base.d_t = to_double(require(f, "system", "d_t"), "d_t");
  s.base.d_u1 = to_double(require(f, "system", "d_u1"), "d_u1");
  s.base.d_u2 = to_double(require(f, "system", "d_u2"), "d_u2");
  s.base.thr_sic = db_to_linear(to_double(require(f, "system", "thr_sic_db"), "thr_sic_db"));
  s.base.thr_u1 = db_to_linear(to_double(require(f, "system", "thr_u1_db"), "thr_u1_db"));
  s.base.thr_u2 = db_to_linear(to_double(require(f, "system", "thr_u2_db"), "thr_u2_db"));
  try {
    s.base.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: [system] invalid: ") + e.what());
  }

  for (auto [name, grid] : {std::pair{"grid_u1", &s.grid_u1}, std::pair{"grid_u2", &s.grid_u2}}) {
    grid->n1 = int(to_int(require(f, name, "n1"), "n1"));
    grid->n2 = int(to_int(require(f, name, "n2"), "n2"));
    grid->w1 = to_double(require(f, name, "w1"), "w1");
    grid->w2 = to_double(require(f, name, "w2"), "w2");
    try {
      grid->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: [") + name + "] invalid: " + e.what());
    }
  }

  if (const Entry* acc = lookup(f, "numerics", "mvn_accuracy")) {
    s.mvn_accuracy = to_double(*acc, "mvn_accuracy");
    if (!(s.mvn_accuracy > 0.0))
      throw ConfigError("config line " + std::to_string(acc->line) + ": mvn_accuracy must be > 0");
  }
  if (const Entry* mc = lookup(f, "numerics", "mc_trials")) {
    s.mc_trials = to_uint64(*mc, "mc_trials");
    if (s.mc_trials != 0 && s.mc_trials < 10000)
      throw ConfigError("config line " + std::to_string(mc->line) +
                        ": mc_trials must be 0 (disabled) or >= 10000");
  }
  if (const Entry* sd = lookup(f, "numerics", "seed")) s.seed = to_uint64(*sd, "seed");

  const bool have_sweep = f.sections.count("sweep") > 0;
  if (require_sweep && !have_sweep) throw ConfigError("config: missing section [sweep]");
  if (!have_sweep) return s;
  s.has_sweep = true;

  const Entry& var = require(f, "sweep", "variable");
  if (var.value == "snr_db") s.variable = SweepVariable::snr_db;
  else if (var.value == "n_ports") s.variable = SweepVariable::n_ports;
  else if (var.value == "aperture_w") s.variable = SweepVariable::aperture_w;
  else
    throw ConfigError("config line " + std::to_string(var.line) +
                      ": variable must be one of snr_db, n_ports, aperture_w");

  const Entry& vals = require(f, "sweep", "values");
  s.values = to_list(vals, "values");
  for (size_t i = 1; i < s.values.size(); ++i)
    if (!(s.values[i] > s.values[i - 1]))
      throw ConfigError("config line " + std::to_string(vals.line) +
                        ": values must be strictly increasing");

  auto square_of = [](double v) -> int {
    const int k = int(std::lround(std::sqrt(v)));
    return (k >= 1 && double(k) * k == v) ? k : 0;
  };
  if (s.variable == SweepVariable::n_ports) {
    for (double v : s.values)
      if (!square_of(v))
        throw ConfigError("config line " + std::to_string(vals.line) +
                          ": n_ports values must be perfect squares (square grids)");
  }
  if (s.variable == SweepVariable::aperture_w) {
    for (double v : s.values)
      if (!(v > 0.0))
        throw ConfigError("config line " + std::to_string(vals.line) +
                          ": aperture_w values must be > 0");
  }

  if (const Entry* cp = lookup(f, "sweep", "curve_ports")) {
    if (s.variable == SweepVariable::n_ports)
      throw ConfigError("config line " + std::to_string(cp->line) +
                        ": curve_ports conflicts with variable = n_ports");
    for (double v : to_list(*cp, "curve_ports")) {
      const int k = square_of(v);
      if (!k)
        throw ConfigError("config line " + std::to_string(cp->line) +
                          ": curve_ports must be perfect squares");
      s.curve_ports.push_back(int(v));
    }
  }
  if (const Entry* ca = lookup(f, "sweep", "curve_apertures")) {
    if (s.variable == SweepVariable::aperture_w)
      throw ConfigError("config line " + std::to_string(ca->line) +
                        ": curve_apertures conflicts with variable = aperture_w");
    if (!s.curve_ports.empty())
      throw ConfigError("config line " + std::to_string(ca->line) +
                        ": curve_ports and curve_apertures are mutually exclusive");
    for (double v : to_list(*ca, "curve_apertures")) {
      if (!(v > 0.0))
        throw ConfigError("config line " + std::to_string(ca->line) +
                          ": curve_apertures must be > 0");
      s.curve_apertures.push_back(v);
    }
  }
  return s;
}

}  // namespace faswpcn
