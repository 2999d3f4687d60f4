#pragma once

#include <string>
#include <vector>

#include "oldg/types.hpp"

namespace oldg {

struct InvariantReport {
  std::string name;
  double worst = 0.0;  // largest observed violation (0 when none)
  double tol = 0.0;
  int samples = 0;
  bool pass = false;
};

/// Randomized structural checks of the assembled forms on small meshes,
/// for degrees 1 and 2: convection positivity and its centered/upwind
/// decomposition, symmetry and coercivity of the penalty forms, the
/// equivalent routes of the coupling form, and the lift identities.
/// Deterministic for a fixed seed.
std::vector<InvariantReport> run_form_property_suite(unsigned seed,
                                                     int n_samples = 100);

}  // namespace oldg
