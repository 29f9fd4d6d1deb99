#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "core/cost.hpp"
#include "core/types.hpp"

namespace ott {

/// Row and column mass vectors of the transport polytope. For an augmented
/// (n1+1)x(n2+1) cost, a has length n1+1 and b has length n2+1.
struct Marginals {
  std::vector<double> a;
  std::vector<double> b;
};

/// Unit mass per detection; the dustbin slot absorbs the opposite side's
/// total, so both sides sum to n1 + n2.
Marginals default_marginals(std::size_t n1, std::size_t n2);

/// Entropic-OT solution: nonnegative plan with row sums a and column sums b
/// up to the reported violation.
struct TransportPlan {
  Matrix entries;
  double epsilon = 0.0;
  int iterations_used = 0;
  double marginal_violation = 0.0;
  /// True when the tolerance was reached before max_iters sweeps.
  bool early_stopped = false;

  std::size_t real_rows() const { return entries.rows() - 1; }
  std::size_t real_cols() const { return entries.cols() - 1; }
};

/// One-to-one matching with explicit leftovers on both sides.
struct HardAssignment {
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
  double total_cost = 0.0;
};

/// Log-domain Sinkhorn with max-stabilized log-sum-exp. Stops when the max
/// marginal violation drops to tol or after max_iters sweeps, whichever
/// comes first.
TransportPlan sinkhorn(const CostMatrix& c, const Marginals& m, double epsilon,
                       int max_iters, double tol);

struct SinkhornGradient {
  /// d<upstream, P>/dC, same shape as the cost.
  Matrix dc;
  /// Sum of dc over the dustbin row/column when the cost is augmented.
  double dgamma = 0.0;
};

/// Exact gradient of <upstream, P> through `iterations` unrolled Sinkhorn
/// sweeps (no early stopping, so forward and backward agree).
SinkhornGradient sinkhorn_grad(const CostMatrix& c, const Marginals& m, double epsilon,
                               int iterations, const Matrix& upstream);

/// Same, but differentiates the fixed iteration count of an existing plan.
/// Throws IterationMismatch when the plan stopped early, because the unrolled
/// backward pass would then disagree with the forward pass that produced it.
SinkhornGradient sinkhorn_grad(const TransportPlan& plan, const CostMatrix& c,
                               const Marginals& m, const Matrix& upstream);

/// Exact minimum-cost assignment of min(n1, n2) pairs via augmenting paths;
/// rectangular inputs are padded internally.
HardAssignment hungarian(const CostMatrix& c);

/// Same solver on a raw matrix (used on negated plans and gated IoU costs).
HardAssignment solve_assignment(const Matrix& cost);

/// Hard matches from a soft plan: real cells dominated by both their row and
/// column dustbin mass are zeroed, a max-mass assignment is solved on the
/// rest, and matches with no remaining support are reported unmatched.
HardAssignment decode(const TransportPlan& plan);

}  // namespace ott
