#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "oldg/config.hpp"
#include "oldg/convergence.hpp"
#include "oldg/verification.hpp"

namespace {

using namespace oldg;

int do_run(const RunConfig& cfg) {
  const TriMesh mesh = build_uniform_mesh(cfg.n);
  const DgSpace vel = make_space(mesh, cfg.r, 2);
  const DgSpace pre = make_space(mesh, cfg.r - 1, 1);
  Stepper stepper(vel, pre, cfg.scheme_params());

  const ExactSolution exact;
  VectorFn u0;
  TimeVectorFn f;
  if (cfg.data == "zero") {
    u0 = [](const Vec2&) { return Vec2::Zero(); };
    f = [](const Vec2&, double) { return Vec2::Zero(); };
  } else {
    u0 = [&](const Vec2& x) { return exact.velocity(x, 0.0); };
    f = [&](const Vec2& x, double t) {
      return mms_forcing(exact, cfg.mu, {cfg.gamma, cfg.eta}, x, t);
    };
  }

  std::ofstream out(cfg.out);
  if (!out) throw std::invalid_argument("cannot open output file: " + cfg.out);
  for (const auto& line : cfg.echo()) out << "# " << line << "\n";
  const SchemeState final_state = stepper.run(u0, f, &out);

  std::cout << "run finished: " << stepper.params().n_steps()
            << " steps, ||u(T)||_L2 = " << final_state.u.coef.norm() << "\n";
  if (cfg.data == "mms") {
    const ErrorNorms err = error_norms(final_state.u, final_state.p, exact,
                                       cfg.T, cfg.scheme_params().forms);
    std::cout << "errors vs exact solution: u_l2 = " << err.u_l2
              << "  u_dg = " << err.u_dg << "  p_l2 = " << err.p_l2 << "\n";
  }
  std::cout << "diagnostics written to " << cfg.out << "\n";
  return 0;
}

int do_study(const RunConfig& cfg) {
  const StudyMode mode =
      cfg.mode == RunMode::StudySpace ? StudyMode::Space : StudyMode::Time;
  const std::vector<int> ns =
      mode == StudyMode::Space ? cfg.n_ladder : std::vector<int>{cfg.n};
  const std::vector<double> taus = mode == StudyMode::Space
                                       ? std::vector<double>{cfg.tau}
                                       : cfg.tau_ladder;
  const StudyResult result =
      convergence_study(mode, cfg.r, ns, taus, cfg.scheme_params());

  std::ofstream out(cfg.out);
  if (!out) throw std::invalid_argument("cannot open output file: " + cfg.out);
  write_study_csv(result, cfg.echo(), out);
  write_study_table(result, std::cout);
  std::cout << "csv written to " << cfg.out << "\n";
  if (mode == StudyMode::Time && static_cast<int>(result.rows.size()) < 3)
    throw StudyError("time study kept fewer than 3 clean rungs");
  return 0;
}

int do_verify_forms(const RunConfig& cfg) {
  const auto reports = run_form_property_suite(cfg.seed);
  bool all_pass = true;
  for (const auto& r : reports) {
    std::printf("%s %-45s worst=%.3e tol=%.1e samples=%d\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.tol,
                r.samples);
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous Galerkin pressure-correction solver for "
               "viscoelastic flow with exponential memory"};

  std::string config_path;
  std::map<std::string, std::string> overrides;
  auto add_opt = [&](const std::string& name) {
    app.add_option_function<std::string>(
        "--" + name,
        [&overrides, name](const std::string& v) { overrides[name] = v; });
  };
  app.add_option("--config", config_path, "flat key=value config file");
  for (const char* name :
       {"mode", "r", "n", "n-ladder", "tau", "tau-ladder", "T", "mu", "gamma",
        "eta", "delta", "sigma-int", "sigma-bnd", "sigma-tilde", "epsilon",
        "tol", "out", "seed", "data"})
    add_opt(name);

  CLI11_PARSE(app, argc, argv);

  try {
    std::map<std::string, std::string> file_values;
    if (!config_path.empty()) file_values = oldg::read_config_file(config_path);
    const oldg::RunConfig cfg = oldg::parse_config(file_values, overrides);

    switch (cfg.mode) {
      case oldg::RunMode::Run: return do_run(cfg);
      case oldg::RunMode::StudySpace:
      case oldg::RunMode::StudyTime: return do_study(cfg);
      case oldg::RunMode::VerifyForms: return do_verify_forms(cfg);
    }
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: config: " << err.what() << "\n";
    return 1;
  } catch (const oldg::SolverError& err) {
    std::cerr << "error: solver: " << err.what() << "\n";
    return 2;
  } catch (const oldg::StudyError& err) {
    std::cerr << "error: study: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: internal: " << err.what() << "\n";
    return 4;
  }
  return 0;
}
