#include "oldg/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace oldg {

CaseResult run_mms_case(int n, int r, const SchemeParams& params) {
  const TriMesh mesh = build_uniform_mesh(n);
  const DgSpace vel = make_space(mesh, r, 2);
  const DgSpace pre = make_space(mesh, r - 1, 1);
  Stepper stepper(vel, pre, params);

  const ExactSolution exact;
  const auto u0 = [&](const Vec2& x) { return exact.velocity(x, 0.0); };
  const auto f = [&](const Vec2& x, double t) {
    return mms_forcing(exact, params.mu, params.kernel, x, t);
  };

  std::vector<StepDiagnostics> history;
  const SchemeState final_state = stepper.run(u0, f, nullptr, &history);

  CaseResult result;
  result.errors = error_norms(final_state.u, final_state.p, exact, params.T,
                              params.forms);
  for (const auto& d : history)
    result.max_abs_p_mean = std::max(result.max_abs_p_mean, std::abs(d.p_mean));

  const FieldVec u_proj =
      l2_project(vel, [&](const Vec2& x) { return exact.velocity(x, params.T); });
  const FieldVec p_proj = remove_mean(
      l2_project(pre, [&](const Vec2& x) { return exact.pressure(x, params.T); }));
  result.projection_floor =
      error_norms(u_proj, p_proj, exact, params.T, params.forms);
  return result;
}

namespace {

void check_halving_ladder_int(const std::vector<int>& ladder) {
  if (ladder.size() < 2)
    throw std::invalid_argument("convergence_study: ladder needs >= 2 rungs");
  for (size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] != 2 * ladder[i - 1])
      throw std::invalid_argument(
          "convergence_study: mesh ladder must be successive doublings");
}

void check_halving_ladder_tau(const std::vector<double>& ladder) {
  if (ladder.size() < 2)
    throw std::invalid_argument("convergence_study: ladder needs >= 2 rungs");
  for (size_t i = 1; i < ladder.size(); ++i)
    if (std::abs(ladder[i] - 0.5 * ladder[i - 1]) > 1e-12 * ladder[i - 1])
      throw std::invalid_argument(
          "convergence_study: tau ladder must be successive halvings");
}

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (size_t i = 1; i < rows.size(); ++i) {
    const ErrorNorms& coarse = rows[i - 1].errors;
    const ErrorNorms& fine = rows[i].errors;
    rows[i].has_rate = true;
    rows[i].rate_u_l2 = std::log2(coarse.u_l2 / fine.u_l2);
    rows[i].rate_u_dg = std::log2(coarse.u_dg / fine.u_dg);
    rows[i].rate_p_l2 = std::log2(coarse.p_l2 / fine.p_l2);
  }
}

}  // namespace

StudyResult convergence_study(StudyMode mode, int r,
                              const std::vector<int>& n_ladder,
                              const std::vector<double>& tau_ladder,
                              const SchemeParams& base_params) {
  StudyResult result;
  result.mode = mode;
  result.r = r;

  if (mode == StudyMode::Space) {
    check_halving_ladder_int(n_ladder);
    if (tau_ladder.size() != 1)
      throw std::invalid_argument("space study: exactly one tau expected");
    for (int n : n_ladder) {
      SchemeParams p = base_params;
      p.tau = tau_ladder[0];
      const CaseResult cr = run_mms_case(n, r, p);
      ConvergenceRow row;
      row.n = n;
      row.h = 1.0 / n;
      row.tau = p.tau;
      row.errors = cr.errors;
      result.rows.push_back(row);
    }
  } else {
    if (n_ladder.size() != 1)
      throw std::invalid_argument("time study: exactly one mesh expected");
    check_halving_ladder_tau(tau_ladder);
    for (double tau : tau_ladder) {
      SchemeParams p = base_params;
      p.tau = tau;
      const CaseResult cr = run_mms_case(n_ladder[0], r, p);
      ConvergenceRow row;
      row.n = n_ladder[0];
      row.h = 1.0 / n_ladder[0];
      row.tau = tau;
      row.errors = cr.errors;
      result.rows.push_back(row);

      // Spatial floor monitor: stop refining tau once the projection error
      // of the exact solution is no longer negligible in the total.
      const bool contaminated =
          cr.projection_floor.u_l2 > 0.1 * cr.errors.u_l2 ||
          cr.projection_floor.p_l2 > 0.1 * cr.errors.p_l2;
      if (contaminated) {
        result.rows.pop_back();
        result.n_truncated =
            static_cast<int>(tau_ladder.size() - result.rows.size());
        break;
      }
    }
  }

  fill_rates(result.rows);
  return result;
}

void write_study_csv(const StudyResult& result,
                     const std::vector<std::string>& header_comments,
                     std::ostream& out) {
  for (const auto& line : header_comments) out << "# " << line << "\n";
  if (result.n_truncated > 0)
    out << "# truncated " << result.n_truncated
        << " rung(s): spatial floor above 10% of the total error\n";
  out << "mode,r,h,tau,err_u_l2,err_u_dg,err_p_l2,rate_u_l2,rate_u_dg,"
         "rate_p_l2\n";
  const char* mode = result.mode == StudyMode::Space ? "study-space"
                                                     : "study-time";
  char buf[320];
  for (const auto& row : result.rows) {
    if (row.has_rate)
      std::snprintf(buf, sizeof buf,
                    "%s,%d,%.12g,%.12g,%.12e,%.12e,%.12e,%.4f,%.4f,%.4f\n",
                    mode, result.r, row.h, row.tau, row.errors.u_l2,
                    row.errors.u_dg, row.errors.p_l2, row.rate_u_l2,
                    row.rate_u_dg, row.rate_p_l2);
    else
      std::snprintf(buf, sizeof buf, "%s,%d,%.12g,%.12g,%.12e,%.12e,%.12e,,,\n",
                    mode, result.r, row.h, row.tau, row.errors.u_l2,
                    row.errors.u_dg, row.errors.p_l2);
    out << buf;
  }
}

void write_study_table(const StudyResult& result, std::ostream& out) {
  const bool space = result.mode == StudyMode::Space;
  out << "r   " << (space ? "h_F     " : "tau       ")
      << "  ||u_h-u(T)||   rate    ||u_h-u(T)||_dG rate    ||p_h-p(T)||  "
         "rate\n";
  char buf[320];
  for (const auto& row : result.rows) {
    char res[32];
    std::snprintf(res, sizeof res, "1/%g", space ? 1.0 / row.h : 1.0 / row.tau);
    if (row.has_rate)
      std::snprintf(buf, sizeof buf,
                    "%-3d %-10s %.4e    %6.3f  %.4e     %6.3f  %.4e  %6.3f\n",
                    result.r, res, row.errors.u_l2, row.rate_u_l2,
                    row.errors.u_dg, row.rate_u_dg, row.errors.p_l2,
                    row.rate_p_l2);
    else
      std::snprintf(buf, sizeof buf,
                    "%-3d %-10s %.4e    --      %.4e     --      %.4e  --\n",
                    result.r, res, row.errors.u_l2, row.errors.u_dg,
                    row.errors.p_l2);
    out << buf;
  }
  if (result.n_truncated > 0)
    out << "(" << result.n_truncated
        << " rung(s) dropped: spatial floor above 10% of the total error)\n";
}

}  // namespace oldg
