#pragma once

#include <string>
#include <vector>

namespace ott {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string details;
};

/// The full oracle battery: Hungarian vs enumeration, Sinkhorn feasibility,
/// annealing against the exact solver, finite-difference gradient checks,
/// gradient-descent convergence, pseudo-label fidelity, occlusion-mask
/// exactness, the tracker quality ladder, metric fixtures, and file-format
/// round trips. Deterministic; every check carries its own seeds and
/// tolerances.
std::vector<CheckResult> run_selfcheck();

}  // namespace ott
