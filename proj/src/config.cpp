#include "oldg/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace oldg {

namespace {

const std::set<std::string> kKnownKeys = {
    "mode",      "r",         "n",           "n-ladder", "tau",
    "tau-ladder", "T",        "mu",          "gamma",    "eta",
    "delta",     "sigma-int", "sigma-bnd",   "sigma-tilde", "epsilon",
    "tol",       "out",       "seed",        "data"};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size())
    throw std::invalid_argument("malformed number for key '" + key +
                                "': " + value);
  return v;
}

long parse_integer(const std::string& key, const std::string& value) {
  const double v = parse_number(key, value);
  const long n = std::lround(v);
  if (std::abs(v - n) > 0.0)
    throw std::invalid_argument("key '" + key + "' expects an integer, got " +
                                value);
  return n;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config file not found: " + path);
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line without '=': " + line);
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

SchemeParams RunConfig::scheme_params() const {
  SchemeParams p;
  p.mu = mu;
  p.kernel = {gamma, eta};
  p.delta = delta;
  p.tau = tau;
  p.T = T;
  p.forms.sigma_int = sigma_int;
  p.forms.sigma_bnd = sigma_bnd;
  p.forms.sigma_tilde = sigma_tilde;
  p.forms.epsilon = epsilon;
  p.solver_tol = tol;
  return p;
}

RunConfig parse_config(const std::map<std::string, std::string>& file_values,
                       const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> merged = file_values;
  for (const auto& [k, v] : overrides) merged[k] = v;
  for (const auto& [k, v] : merged)
    if (!kKnownKeys.count(k))
      throw std::invalid_argument("unknown key '" + k + "'");

  auto has = [&](const char* k) { return merged.count(k) > 0; };
  auto get = [&](const char* k) { return merged.at(k); };

  RunConfig cfg;
  if (has("mode")) {
    const std::string m = get("mode");
    if (m == "run")
      cfg.mode = RunMode::Run;
    else if (m == "study-space")
      cfg.mode = RunMode::StudySpace;
    else if (m == "study-time")
      cfg.mode = RunMode::StudyTime;
    else if (m == "verify-forms")
      cfg.mode = RunMode::VerifyForms;
    else
      throw std::invalid_argument(
          "mode must be run | study-space | study-time | verify-forms, got '" +
          m + "'");
  }

  cfg.r = cfg.mode == RunMode::StudyTime ? 2 : 1;
  if (has("r")) cfg.r = static_cast<int>(parse_integer("r", get("r")));
  if (cfg.r < 1)
    throw std::invalid_argument("r must satisfy r >= 1 (pressure degree r-1)");

  // Resolution defaults per mode.
  cfg.n = cfg.mode == RunMode::StudyTime ? 64 : 8;
  cfg.tau = cfg.r == 1 ? 1.0 / 256 : 1.0 / 512;
  if (cfg.mode == RunMode::Run) cfg.tau = 1.0 / 32;
  cfg.n_ladder = cfg.r == 1 ? std::vector<int>{4, 8, 16, 32}
                            : std::vector<int>{2, 4, 8, 16};
  cfg.tau_ladder = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};

  if (has("n")) cfg.n = static_cast<int>(parse_integer("n", get("n")));
  if (cfg.n < 1) throw std::invalid_argument("n must satisfy n >= 1");
  if (has("tau")) cfg.tau = parse_number("tau", get("tau"));
  if (has("T")) cfg.T = parse_number("T", get("T"));
  if (has("mu")) cfg.mu = parse_number("mu", get("mu"));
  if (has("gamma")) cfg.gamma = parse_number("gamma", get("gamma"));
  if (has("eta")) cfg.eta = parse_number("eta", get("eta"));
  if (has("delta")) cfg.delta = parse_number("delta", get("delta"));
  if (has("sigma-tilde"))
    cfg.sigma_tilde = parse_number("sigma-tilde", get("sigma-tilde"));
  if (has("epsilon"))
    cfg.epsilon = static_cast<int>(parse_integer("epsilon", get("epsilon")));
  if (has("tol")) cfg.tol = parse_number("tol", get("tol"));
  if (has("seed"))
    cfg.seed = static_cast<unsigned>(parse_integer("seed", get("seed")));
  if (has("data")) cfg.data = get("data");
  if (cfg.data != "mms" && cfg.data != "zero")
    throw std::invalid_argument("data must be mms | zero");

  if (has("n-ladder")) {
    cfg.n_ladder.clear();
    for (const auto& item : split_list(get("n-ladder")))
      cfg.n_ladder.push_back(static_cast<int>(parse_integer("n-ladder", item)));
  }
  if (has("tau-ladder")) {
    cfg.tau_ladder.clear();
    for (const auto& item : split_list(get("tau-ladder")))
      cfg.tau_ladder.push_back(parse_number("tau-ladder", item));
  }

  // Penalties default to the values used in the reference experiments.
  cfg.sigma_int = 2.0 * (cfg.r + 2);
  cfg.sigma_bnd = 2.0 * cfg.sigma_int;
  if (has("sigma-int")) cfg.sigma_int = parse_number("sigma-int", get("sigma-int"));
  if (has("sigma-bnd")) cfg.sigma_bnd = parse_number("sigma-bnd", get("sigma-bnd"));

  if (cfg.out.empty()) {
    switch (cfg.mode) {
      case RunMode::Run: cfg.out = "run_diagnostics.csv"; break;
      case RunMode::StudySpace: cfg.out = "study_space.csv"; break;
      case RunMode::StudyTime: cfg.out = "study_time.csv"; break;
      case RunMode::VerifyForms: cfg.out = "verify_forms.txt"; break;
    }
  }
  if (has("out")) cfg.out = get("out");

  // Constraint checks, including the delta admissibility bound.
  const SchemeParams sp = cfg.scheme_params();
  sp.validate();

  auto check_ladder_int = [](const std::vector<int>& ladder) {
    for (size_t i = 1; i < ladder.size(); ++i)
      if (ladder[i] != 2 * ladder[i - 1])
        throw std::invalid_argument(
            "n-ladder must be successive doublings (powers-of-two halvings of h)");
  };
  auto check_ladder_tau = [](const std::vector<double>& ladder) {
    for (size_t i = 1; i < ladder.size(); ++i)
      if (std::abs(ladder[i] - 0.5 * ladder[i - 1]) > 1e-12 * ladder[i - 1])
        throw std::invalid_argument("tau-ladder must be successive halvings");
  };
  check_ladder_int(cfg.n_ladder);
  check_ladder_tau(cfg.tau_ladder);

  return cfg;
}

std::vector<std::string> RunConfig::echo() const {
  const char* mode_names[] = {"run", "study-space", "study-time",
                              "verify-forms"};
  std::vector<std::string> lines;
  char buf[256];
  auto add = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    lines.emplace_back(buf);
  };
  add("mode = %s", mode_names[static_cast<int>(mode)]);
  add("r = %d", r);
  add("n = %d", n);
  std::string nl;
  for (size_t i = 0; i < n_ladder.size(); ++i)
    nl += (i ? "," : "") + std::to_string(n_ladder[i]);
  lines.push_back("n-ladder = " + nl);
  add("tau = %.12g", tau);
  std::string tl;
  for (size_t i = 0; i < tau_ladder.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", tau_ladder[i]);
    tl += (i ? "," : "") + std::string(buf);
  }
  lines.push_back("tau-ladder = " + tl);
  add("T = %.12g", T);
  add("mu = %.12g", mu);
  add("gamma = %.12g", gamma);
  add("eta = %.12g", eta);
  add("delta = %.12g", scheme_params().delta_value());
  add("sigma-int = %.12g", sigma_int);
  add("sigma-bnd = %.12g", sigma_bnd);
  add("sigma-tilde = %.12g", sigma_tilde);
  add("epsilon = %d", epsilon);
  add("tol = %.12g", tol);
  lines.push_back("out = " + out);
  add("seed = %u", seed);
  lines.push_back("data = " + data);
  return lines;
}

}  // namespace oldg
