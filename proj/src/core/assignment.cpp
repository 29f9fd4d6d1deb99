#include "core/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace ott {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_finite(const CostMatrix& c) {
  for (double v : c.entries.data()) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::NonFiniteCost, "cost matrix has a non-finite entry");
    }
  }
}

void check_marginals(const CostMatrix& c, const Marginals& m) {
  if (m.a.size() != c.rows() || m.b.size() != c.cols()) {
    fail(ErrorCode::DimensionMismatch, "marginal lengths do not match the cost shape");
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (double v : m.a) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::InvalidArgument, "marginals must be finite and nonnegative");
    }
    sum_a += v;
  }
  for (double v : m.b) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::InvalidArgument, "marginals must be finite and nonnegative");
    }
    sum_b += v;
  }
  if (std::abs(sum_a - sum_b) > 1e-9) {
    fail(ErrorCode::InfeasibleMarginals, "row and column mass differ by more than 1e-9");
  }
}

std::vector<double> log_of(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? std::log(v[i]) : kNegInf;
  return out;
}

/// Max-stabilized log(sum(exp(terms))); -inf terms drop out.
double log_sum_exp(const std::vector<double>& terms) {
  double m = kNegInf;
  for (double t : terms) m = std::max(m, t);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

struct SinkhornState {
  std::vector<double> log_a;
  std::vector<double> log_b;
  Matrix log_kernel;  // -C / epsilon
  std::vector<double> alpha;
  std::vector<double> beta;
};

// Plain alternating normalization stalls on near-degenerate instances (two
// rows tied within a few epsilon), where its linear rate approaches 1. After
// a plain warmup the updates are over-relaxed; the fixed point is unchanged
// and the backward pass unrolls the identical schedule.
constexpr int kWarmupSweeps = 20;
constexpr double kRelaxation = 1.85;

double relaxation_for(int sweep) { return sweep <= kWarmupSweeps ? 1.0 : kRelaxation; }

SinkhornState init_state(const CostMatrix& c, const Marginals& m, double epsilon) {
  if (!(epsilon > 0.0)) {
    fail(ErrorCode::InvalidArgument, "sinkhorn: epsilon must be positive");
  }
  check_finite(c);
  check_marginals(c, m);
  SinkhornState st;
  st.log_a = log_of(m.a);
  st.log_b = log_of(m.b);
  st.log_kernel = Matrix(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) st.log_kernel(i, j) = -c.at(i, j) / epsilon;
  }
  st.alpha.assign(c.rows(), 0.0);
  st.beta.assign(c.cols(), 0.0);
  return st;
}

void sweep(SinkhornState& st, double omega) {
  const std::size_t rows = st.log_kernel.rows();
  const std::size_t cols = st.log_kernel.cols();
  std::vector<double> terms;
  for (std::size_t i = 0; i < rows; ++i) {
    if (st.log_a[i] == kNegInf) {
      st.alpha[i] = kNegInf;
      continue;
    }
    terms.clear();
    for (std::size_t j = 0; j < cols; ++j) terms.push_back(st.beta[j] + st.log_kernel(i, j));
    const double target = st.log_a[i] - log_sum_exp(terms);
    st.alpha[i] = (1.0 - omega) * st.alpha[i] + omega * target;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (st.log_b[j] == kNegInf) {
      st.beta[j] = kNegInf;
      continue;
    }
    terms.clear();
    for (std::size_t i = 0; i < rows; ++i) terms.push_back(st.alpha[i] + st.log_kernel(i, j));
    const double target = st.log_b[j] - log_sum_exp(terms);
    st.beta[j] = (1.0 - omega) * st.beta[j] + omega * target;
  }
}

Matrix plan_from(const SinkhornState& st) {
  Matrix p(st.log_kernel.rows(), st.log_kernel.cols());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double lp = st.alpha[i] + st.beta[j] + st.log_kernel(i, j);
      p(i, j) = lp == kNegInf ? 0.0 : std::exp(lp);
    }
  }
  return p;
}

double violation_of(const Matrix& p, const Marginals& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.cols(); ++j) s += p(i, j);
    worst = std::max(worst, std::abs(s - m.a[i]));
  }
  for (std::size_t j = 0; j < p.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) s += p(i, j);
    worst = std::max(worst, std::abs(s - m.b[j]));
  }
  return worst;
}

}  // namespace

Marginals default_marginals(std::size_t n1, std::size_t n2) {
  Marginals m;
  m.a.assign(n1 + 1, 1.0);
  m.a.back() = double(n2);
  m.b.assign(n2 + 1, 1.0);
  m.b.back() = double(n1);
  return m;
}

TransportPlan sinkhorn(const CostMatrix& c, const Marginals& m, double epsilon,
                       int max_iters, double tol) {
  if (max_iters < 1) {
    fail(ErrorCode::InvalidArgument, "sinkhorn: max_iters must be at least 1");
  }
  SinkhornState st = init_state(c, m, epsilon);
  TransportPlan plan;
  plan.epsilon = epsilon;
  for (int iter = 1; iter <= max_iters; ++iter) {
    sweep(st, relaxation_for(iter));
    plan.entries = plan_from(st);
    plan.marginal_violation = violation_of(plan.entries, m);
    plan.iterations_used = iter;
    if (plan.marginal_violation <= tol) {
      plan.early_stopped = iter < max_iters;
      break;
    }
  }
  return plan;
}

SinkhornGradient sinkhorn_grad(const CostMatrix& c, const Marginals& m, double epsilon,
                               int iterations, const Matrix& upstream) {
  if (iterations < 1) {
    fail(ErrorCode::InvalidArgument, "sinkhorn_grad: iterations must be at least 1");
  }
  if (upstream.rows() != c.rows() || upstream.cols() != c.cols()) {
    fail(ErrorCode::DimensionMismatch, "sinkhorn_grad: upstream shape mismatch");
  }
  SinkhornState st = init_state(c, m, epsilon);
  const std::size_t rows = c.rows();
  const std::size_t cols = c.cols();
  const int T = iterations;

  // Unrolled forward pass, recording the potentials after every half-sweep.
  std::vector<std::vector<double>> alphas(T + 1), betas(T + 1);
  alphas[0] = st.alpha;
  betas[0] = st.beta;
  for (int t = 1; t <= T; ++t) {
    sweep(st, relaxation_for(t));
    alphas[t] = st.alpha;
    betas[t] = st.beta;
  }

  // Seed adjoints from S = <upstream, P>, P_ij = exp(alpha_i + beta_j + L_ij).
  Matrix grad_log(rows, cols);
  std::vector<double> g_alpha(rows, 0.0), g_beta(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double lp = alphas[T][i] + betas[T][j] + st.log_kernel(i, j);
      const double w = lp == kNegInf ? 0.0 : upstream(i, j) * std::exp(lp);
      g_alpha[i] += w;
      g_beta[j] += w;
      grad_log(i, j) += w;
    }
  }

  std::vector<double> terms(std::max(rows, cols));
  for (int t = T; t >= 1; --t) {
    const double omega = relaxation_for(t);
    // beta^t_j = (1-w) beta^{t-1}_j + w (log b_j - lse_i(alpha^t_i + L_ij));
    // constant -inf when b_j = 0.
    std::vector<double> g_beta_prev(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
      if (st.log_b[j] == kNegInf) continue;
      g_beta_prev[j] += (1.0 - omega) * g_beta[j];
      if (g_beta[j] == 0.0) continue;
      terms.resize(rows);
      for (std::size_t i = 0; i < rows; ++i) terms[i] = alphas[t][i] + st.log_kernel(i, j);
      const double lse = log_sum_exp(terms);
      for (std::size_t i = 0; i < rows; ++i) {
        if (terms[i] == kNegInf) continue;
        const double s = omega * g_beta[j] * std::exp(terms[i] - lse);
        g_alpha[i] -= s;
        grad_log(i, j) -= s;
      }
    }
    // alpha^t_i = (1-w) alpha^{t-1}_i + w (log a_i - lse_j(beta^{t-1}_j + L_ij)).
    std::vector<double> g_alpha_prev(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      if (st.log_a[i] == kNegInf) continue;
      g_alpha_prev[i] += (1.0 - omega) * g_alpha[i];
      if (g_alpha[i] == 0.0) continue;
      terms.resize(cols);
      for (std::size_t j = 0; j < cols; ++j) terms[j] = betas[t - 1][j] + st.log_kernel(i, j);
      const double lse = log_sum_exp(terms);
      for (std::size_t j = 0; j < cols; ++j) {
        if (terms[j] == kNegInf) continue;
        const double r = omega * g_alpha[i] * std::exp(terms[j] - lse);
        g_beta_prev[j] -= r;
        grad_log(i, j) -= r;
      }
    }
    g_beta = std::move(g_beta_prev);
    g_alpha = std::move(g_alpha_prev);
  }

  SinkhornGradient grad;
  grad.dc = Matrix(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) grad.dc(i, j) = grad_log(i, j) * (-1.0 / epsilon);
  }
  if (c.augmented) {
    for (std::size_t j = 0; j < cols; ++j) grad.dgamma += grad.dc(rows - 1, j);
    for (std::size_t i = 0; i + 1 < rows; ++i) grad.dgamma += grad.dc(i, cols - 1);
  }
  return grad;
}

SinkhornGradient sinkhorn_grad(const TransportPlan& plan, const CostMatrix& c,
                               const Marginals& m, const Matrix& upstream) {
  if (plan.early_stopped) {
    fail(ErrorCode::IterationMismatch,
         "sinkhorn_grad: plan was produced with early stopping; rerun the forward "
         "pass with a fixed iteration count");
  }
  return sinkhorn_grad(c, m, plan.epsilon, plan.iterations_used, upstream);
}

namespace {

/// Kuhn-Munkres with potentials on a square matrix; returns row -> column.
std::vector<int> solve_square(const Matrix& cost) {
  const int n = int(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

HardAssignment solve_assignment(const Matrix& cost) {
  const std::size_t n1 = cost.rows();
  const std::size_t n2 = cost.cols();
  HardAssignment out;
  if (n1 == 0 || n2 == 0) {
    for (std::size_t i = 0; i < n1; ++i) out.unmatched_rows.push_back(i);
    for (std::size_t j = 0; j < n2; ++j) out.unmatched_cols.push_back(j);
    return out;
  }

  const std::size_t n = std::max(n1, n2);
  double max_entry = 0.0;
  for (double v : cost.data()) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::NonFiniteCost, "assignment cost has a non-finite entry");
    }
    max_entry = std::max(max_entry, std::abs(v));
  }
  // Padded cells share one constant, so they cannot influence which real
  // pairs the optimum selects.
  const double pad = max_entry + 1.0;
  Matrix square(n, n, pad);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) square(i, j) = cost(i, j);
  }

  const std::vector<int> row_to_col = solve_square(square);
  std::vector<char> col_used(n2, 0);
  for (std::size_t i = 0; i < n1; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && std::size_t(j) < n2) {
      out.matches.emplace_back(i, std::size_t(j));
      col_used[j] = 1;
    } else {
      out.unmatched_rows.push_back(i);
    }
  }
  for (std::size_t j = 0; j < n2; ++j) {
    if (!col_used[j]) out.unmatched_cols.push_back(j);
  }
  std::sort(out.matches.begin(), out.matches.end());
  for (const auto& [i, j] : out.matches) out.total_cost += cost(i, j);
  return out;
}

HardAssignment hungarian(const CostMatrix& c) {
  if (c.augmented) {
    fail(ErrorCode::InvalidArgument, "hungarian: expects an unaugmented cost matrix");
  }
  return solve_assignment(c.entries);
}

HardAssignment decode(const TransportPlan& plan) {
  if (plan.entries.rows() < 1 || plan.entries.cols() < 1) {
    fail(ErrorCode::InvalidArgument, "decode: plan must carry dustbin slots");
  }
  const std::size_t n1 = plan.real_rows();
  const std::size_t n2 = plan.real_cols();
  const Matrix& p = plan.entries;

  // Zero out real cells dominated by both of their dustbin alternatives.
  Matrix support(n1, n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double mass = p(i, j);
      const bool dominated = mass < p(i, n2) && mass < p(n1, j);
      support(i, j) = dominated ? 0.0 : mass;
    }
  }

  Matrix negated(n1, n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) negated(i, j) = -support(i, j);
  }
  const HardAssignment raw = solve_assignment(negated);

  HardAssignment out;
  std::vector<char> row_used(n1, 0), col_used(n2, 0);
  for (const auto& [i, j] : raw.matches) {
    if (support(i, j) > 0.0) {
      out.matches.emplace_back(i, j);
      row_used[i] = 1;
      col_used[j] = 1;
    }
  }
  for (std::size_t i = 0; i < n1; ++i) {
    if (!row_used[i]) out.unmatched_rows.push_back(i);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    if (!col_used[j]) out.unmatched_cols.push_back(j);
  }
  for (const auto& [i, j] : out.matches) out.total_cost += p(i, j);
  return out;
}

}  // namespace ott
