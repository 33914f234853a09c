#include "jamsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "jamsim/errors.hpp"

namespace jamsim {

void Scenario::validate() const {
  if (sweep_values.empty()) throw ConfigError("scenario: sweep_values must be non-empty");
  if (!std::is_sorted(sweep_values.begin(), sweep_values.end()) ||
      std::adjacent_find(sweep_values.begin(), sweep_values.end()) != sweep_values.end())
    throw ConfigError("scenario: sweep_values must be strictly increasing");
  if (methods.empty()) throw ConfigError("scenario: methods must be non-empty");
  if (tau_values.empty()) throw ConfigError("scenario: tau_values must be non-empty");
  if (axis == SweepAxis::pilot_len && tau_values.size() > 1)
    throw ConfigError("scenario: pilot_len sweep cannot be combined with tau_values");
  if (n_outer < 2 || n_inner < 2)
    throw ConfigError("scenario: n_outer and n_inner must be >= 2");
  for (const auto& m : methods) {
    if (m.route != SeRoute::monte_carlo &&
        (m.estimator != EstimatorKind::mmse_js || m.detector != CombinerKind::zfjs))
      throw ConfigError(
          "scenario: closed-form and asymptotic routes are defined for mmse_js+zfjs");
  }
}

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::lmmse ? "lmmse" : "mmse_js";
}

std::string to_string(CombinerKind kind) {
  switch (kind) {
    case CombinerKind::mf: return "mf";
    case CombinerKind::zf: return "zf";
    case CombinerKind::zfjs: return "zfjs";
  }
  return "?";
}

std::string to_string(SeRoute route) {
  switch (route) {
    case SeRoute::monte_carlo: return "monte_carlo";
    case SeRoute::closed_form: return "closed_form";
    case SeRoute::asymptotic: return "asymptotic";
  }
  return "?";
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::jam_power_db: return "jam_power_db";
    case SweepAxis::antennas: return "antennas";
    case SweepAxis::pilot_len: return "pilot_len";
  }
  return "?";
}

Scenario fig2_preset() {
  Scenario sc;
  sc.base = make_uniform_config<double>(100, 1, 3, 200, db_to_linear(5.0),
                                        db_to_linear(5.0), 1.0, 1.0);
  sc.axis = SweepAxis::jam_power_db;
  sc.sweep_values = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  sc.tau_values = {3};
  sc.methods = {
      {EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::monte_carlo},
      {EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::closed_form},
      {EstimatorKind::lmmse, CombinerKind::zf, SeRoute::monte_carlo},
      {EstimatorKind::lmmse, CombinerKind::mf, SeRoute::monte_carlo},
  };
  sc.out_path = "fig2.csv";
  return sc;
}

Scenario fig3_preset() {
  Scenario sc;
  const double p = db_to_linear(2.0);
  sc.base = make_uniform_config<double>(20, 2, 3, 200, p, p, p, p);
  sc.axis = SweepAxis::antennas;
  sc.sweep_values = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
  sc.tau_values = {3, 4, 5};
  sc.methods = {{EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::monte_carlo}};
  sc.out_path = "fig3.csv";
  return sc;
}

Scenario preset_by_name(const std::string& name) {
  if (name == "fig2") return fig2_preset();
  if (name == "fig3") return fig3_preset();
  throw ParseError("unknown preset '" + name + "' (expected fig2 or fig3)");
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& origin, const Entry& e, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(origin, e.line, "non-numeric value '" + e.value + "' for key '" + key + "'");
  }
}

long parse_integer(const std::string& origin, const Entry& e, const std::string& key) {
  const double v = parse_number(origin, e, key);
  if (v != std::floor(v)) fail(origin, e.line, "key '" + key + "' needs an integer");
  return static_cast<long>(v);
}

bool parse_bool(const std::string& origin, const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  fail(origin, e.line, "key '" + key + "' needs true/false");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

EstimatorKind parse_estimator(const std::string& origin, int line, const std::string& s) {
  if (s == "lmmse") return EstimatorKind::lmmse;
  if (s == "mmse_js") return EstimatorKind::mmse_js;
  fail(origin, line, "unknown estimator '" + s + "'");
}

CombinerKind parse_detector(const std::string& origin, int line, const std::string& s) {
  if (s == "mf") return CombinerKind::mf;
  if (s == "zf") return CombinerKind::zf;
  if (s == "zfjs") return CombinerKind::zfjs;
  fail(origin, line, "unknown detector '" + s + "'");
}

SeRoute parse_route(const std::string& origin, int line, const std::string& s) {
  if (s == "mc" || s == "monte_carlo") return SeRoute::monte_carlo;
  if (s == "cf" || s == "closed_form") return SeRoute::closed_form;
  if (s == "asy" || s == "asymptotic") return SeRoute::asymptotic;
  fail(origin, line, "unknown se route '" + s + "'");
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& origin) {
  std::map<std::string, Entry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "missing key");
    if (value.empty()) fail(origin, line_no, "missing value for key '" + key + "'");
    entries[key] = Entry{value, line_no};  // later duplicates win
  }

  static const std::vector<std::string> known = {
      "preset",     "M",           "K",          "tau",        "T",
      "p_t_db",     "p_d_db",      "q_t_db",     "q_d_db",     "beta",
      "beta_users", "beta_jammer", "seed",       "pilot_hopping",
      "sweep_axis", "sweep_values", "tau_values", "methods",    "n_outer",
      "n_inner",    "out",         "reproducible", "threads"};
  for (const auto& [key, entry] : entries) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      fail(origin, entry.line, "unknown key '" + key + "'");
  }

  Scenario sc;
  bool have_preset = false;
  if (auto it = entries.find("preset"); it != entries.end()) {
    try {
      sc = preset_by_name(it->second.value);
    } catch (const ParseError& e) {
      fail(origin, it->second.line, e.what());
    }
    have_preset = true;
  }

  auto get = [&](const char* key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto require = [&](const char* key) -> const Entry& {
    const Entry* e = get(key);
    if (!e) throw ParseError(origin + ": missing required key '" + std::string(key) + "'");
    return *e;
  };

  auto& cfg = sc.base;
  if (!have_preset) {
    cfg.block_len = 200;
    cfg.beta_jammer = 1.0;
    cfg.antennas = static_cast<int>(parse_integer(origin, require("M"), "M"));
    cfg.users = static_cast<int>(parse_integer(origin, require("K"), "K"));
    cfg.pilot_len = static_cast<int>(parse_integer(origin, require("tau"), "tau"));
    cfg.beta_users = RealVector<double>::Constant(cfg.users, 1.0);
  } else {
    if (const Entry* e = get("M"))
      cfg.antennas = static_cast<int>(parse_integer(origin, *e, "M"));
    if (const Entry* e = get("K")) {
      cfg.users = static_cast<int>(parse_integer(origin, *e, "K"));
      cfg.beta_users = RealVector<double>::Constant(cfg.users, 1.0);
    }
    if (const Entry* e = get("tau")) {
      cfg.pilot_len = static_cast<int>(parse_integer(origin, *e, "tau"));
      sc.tau_values = {cfg.pilot_len};
    }
  }
  if (const Entry* e = get("T"))
    cfg.block_len = static_cast<int>(parse_integer(origin, *e, "T"));
  if (const Entry* e = get("p_t_db"))
    cfg.pilot_power_user = db_to_linear(parse_number(origin, *e, "p_t_db"));
  if (const Entry* e = get("p_d_db"))
    cfg.data_power_user = db_to_linear(parse_number(origin, *e, "p_d_db"));
  if (const Entry* e = get("q_t_db"))
    cfg.pilot_power_jammer = db_to_linear(parse_number(origin, *e, "q_t_db"));
  if (const Entry* e = get("q_d_db"))
    cfg.data_power_jammer = db_to_linear(parse_number(origin, *e, "q_d_db"));
  if (const Entry* e = get("beta"))
    cfg.beta_users = RealVector<double>::Constant(cfg.users, parse_number(origin, *e, "beta"));
  if (const Entry* e = get("beta_users")) {
    const auto parts = split(e->value, ',');
    cfg.beta_users.resize(static_cast<Index>(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i)
      cfg.beta_users[static_cast<Index>(i)] =
          parse_number(origin, Entry{parts[i], e->line}, "beta_users");
  }
  if (const Entry* e = get("beta_jammer"))
    cfg.beta_jammer = parse_number(origin, *e, "beta_jammer");
  if (const Entry* e = get("seed"))
    cfg.seed = static_cast<std::uint64_t>(parse_integer(origin, *e, "seed"));
  if (const Entry* e = get("pilot_hopping"))
    cfg.pilot_hopping = parse_bool(origin, *e, "pilot_hopping");

  if (const Entry* e = get("sweep_axis")) {
    if (e->value == "jam_power_db") sc.axis = SweepAxis::jam_power_db;
    else if (e->value == "antennas") sc.axis = SweepAxis::antennas;
    else if (e->value == "pilot_len") sc.axis = SweepAxis::pilot_len;
    else fail(origin, e->line, "unknown sweep_axis '" + e->value + "'");
  } else if (!have_preset) {
    throw ParseError(origin + ": missing required key 'sweep_axis'");
  }
  if (const Entry* e = have_preset ? get("sweep_values") : &require("sweep_values")) {
    sc.sweep_values.clear();
    for (const auto& part : split(e->value, ','))
      sc.sweep_values.push_back(parse_number(origin, Entry{part, e->line}, "sweep_values"));
  }
  if (const Entry* e = get("tau_values")) {
    sc.tau_values.clear();
    for (const auto& part : split(e->value, ','))
      sc.tau_values.push_back(static_cast<int>(
          parse_integer(origin, Entry{part, e->line}, "tau_values")));
  }
  if (sc.tau_values.empty()) sc.tau_values = {cfg.pilot_len};
  if (const Entry* e = have_preset ? get("methods") : &require("methods")) {
    sc.methods.clear();
    for (const auto& triple : split(e->value, ',')) {
      const auto parts = split(triple, '+');
      if (parts.size() != 3)
        fail(origin, e->line, "method '" + triple + "' must be estimator+detector+route");
      sc.methods.push_back({parse_estimator(origin, e->line, parts[0]),
                            parse_detector(origin, e->line, parts[1]),
                            parse_route(origin, e->line, parts[2])});
    }
  }
  if (const Entry* e = get("n_outer")) sc.n_outer = parse_integer(origin, *e, "n_outer");
  if (const Entry* e = get("n_inner")) sc.n_inner = parse_integer(origin, *e, "n_inner");
  if (const Entry* e = get("out")) sc.out_path = e->value;
  if (const Entry* e = get("reproducible"))
    sc.reproducible = parse_bool(origin, *e, "reproducible");
  if (const Entry* e = get("threads"))
    sc.threads = static_cast<int>(parse_integer(origin, *e, "threads"));

  sc.validate();
  // Base-config invariants that do not depend on the swept quantity.
  SystemConfig<double> probe = cfg;
  probe.pilot_len = sc.tau_values.front();
  if (sc.axis == SweepAxis::antennas)
    probe.antennas = static_cast<int>(sc.sweep_values.front());
  if (sc.axis == SweepAxis::pilot_len)
    probe.pilot_len = static_cast<int>(sc.sweep_values.front());
  probe.validate();
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

}  // namespace jamsim
