#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oldg/mms.hpp"
#include "oldg/stepper.hpp"

namespace oldg {

struct StudyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CaseResult {
  ErrorNorms errors;
  double max_abs_p_mean = 0.0;
  ErrorNorms projection_floor;  // errors of the projected exact solution
};

/// Runs the manufactured problem on an n x n mesh with velocity degree r
/// (pressure degree r - 1) up to T and measures the final-time errors.
CaseResult run_mms_case(int n, int r, const SchemeParams& params);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double tau = 0.0;
  ErrorNorms errors;
  bool has_rate = false;
  double rate_u_l2 = 0.0;
  double rate_u_dg = 0.0;
  double rate_p_l2 = 0.0;
};

enum class StudyMode { Space, Time };

struct StudyResult {
  StudyMode mode = StudyMode::Space;
  int r = 1;
  std::vector<ConvergenceRow> rows;
  int n_truncated = 0;  // time studies: rungs dropped to the spatial floor
};

/// Space mode: ladder of mesh resolutions at fixed tau. Time mode: ladder of
/// time steps at fixed mesh; rungs whose spatial projection floor exceeds
/// 10% of the total error are dropped (longest clean prefix kept). Ladders
/// must be successive halvings; rates are log2 ratios of successive errors.
StudyResult convergence_study(StudyMode mode, int r,
                              const std::vector<int>& n_ladder,
                              const std::vector<double>& tau_ladder,
                              const SchemeParams& base_params);

/// CSV with the header
/// mode,r,h,tau,err_u_l2,err_u_dg,err_p_l2,rate_u_l2,rate_u_dg,rate_p_l2,
/// preceded by '#'-prefixed comment lines (config echo).
void write_study_csv(const StudyResult& result,
                     const std::vector<std::string>& header_comments,
                     std::ostream& out);

/// Plain-text rendering with one row per resolution.
void write_study_table(const StudyResult& result, std::ostream& out);

}  // namespace oldg
