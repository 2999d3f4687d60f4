#pragma once

#include <map>
#include <string>
#include <vector>

#include "oldg/stepper.hpp"

namespace oldg {

enum class RunMode { Run, StudySpace, StudyTime, VerifyForms };

/// Fully resolved run configuration. Defaults follow the reference
/// experiments: mu = 1, gamma = eta = 0.1, epsilon = -1, sigma_tilde = 10,
/// sigma 6/12 (r = 1) or 8/16 (r = 2), delta at its admissibility bound.
struct RunConfig {
  RunMode mode = RunMode::Run;
  int r = 1;
  int n = 8;
  std::vector<int> n_ladder;
  double tau = 0.0;
  std::vector<double> tau_ladder;
  double T = 1.0;
  double mu = 1.0;
  double gamma = 0.1;
  double eta = 0.1;
  double delta = -1.0;  // negative: admissibility bound
  double sigma_int = -1.0;
  double sigma_bnd = -1.0;
  double sigma_tilde = 10.0;
  int epsilon = -1;
  double tol = 1e-10;
  std::string out;
  unsigned seed = 7;
  std::string data = "mms";  // or "zero"

  SchemeParams scheme_params() const;
  /// Echo of every resolved key, one "key = value" line each.
  std::vector<std::string> echo() const;
};

/// Key/value pairs from a flat "key = value" file; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Merges file values and overrides (overrides win), fills defaults, and
/// validates every constraint. Throws std::invalid_argument with the
/// violated condition spelled out.
RunConfig parse_config(const std::map<std::string, std::string>& file_values,
                       const std::map<std::string, std::string>& overrides);

}  // namespace oldg
