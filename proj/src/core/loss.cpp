#include "core/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace ott {

namespace {

constexpr double kLogClamp = 1e-30;

void check_labels(const TransportPlan& plan, const LabelPairs& labels) {
  for (const auto& [i, j] : labels) {
    if (i >= plan.real_rows() || j >= plan.real_cols()) {
      fail(ErrorCode::LabelOutOfRange, "label indexes a dustbin or out-of-range cell");
    }
  }
}

double sign(double v) { return v > 0.0 ? 1.0 : v < 0.0 ? -1.0 : 0.0; }

}  // namespace

double nll_loss(const TransportPlan& plan, const LabelPairs& labels) {
  check_labels(plan, labels);
  double loss = 0.0;
  for (const auto& [i, j] : labels) {
    loss -= std::log(std::max(plan.entries(i, j), kLogClamp));
  }
  return loss;
}

double embedding_distance(const Embedding& x, const Embedding& y, TripletDistance dist) {
  if (x.size() != y.size()) {
    fail(ErrorCode::DimensionMismatch, "embedding_distance: dimension mismatch");
  }
  double acc = 0.0;
  if (dist == TripletDistance::L1) {
    for (std::size_t k = 0; k < x.size(); ++k) acc += std::abs(x[k] - y[k]);
  } else {
    for (std::size_t k = 0; k < x.size(); ++k) acc += (x[k] - y[k]) * (x[k] - y[k]);
    acc = std::sqrt(acc);
  }
  return acc;
}

double triplet_loss(const Embedding& anchor, const Embedding& positive,
                    const Embedding& negative, double margin, TripletDistance dist) {
  const double d_pos = embedding_distance(anchor, positive, dist);
  const double d_neg = embedding_distance(anchor, negative, dist);
  return std::max(d_pos - d_neg + margin, 0.0);
}

LossBreakdown total_loss(const TransportPlan& plan, const LabelPairs& labels,
                         const std::vector<Embedding>& ref,
                         const std::vector<Embedding>& tgt,
                         const std::vector<Triplet>& triplets,
                         double alpha, double beta, double margin,
                         TripletDistance dist) {
  LossBreakdown out;
  out.alpha = alpha;
  out.beta = beta;
  out.margin = margin;
  out.nll = nll_loss(plan, labels);
  if (!triplets.empty()) {
    double acc = 0.0;
    for (const Triplet& t : triplets) {
      acc += triplet_loss(ref.at(t.anchor), tgt.at(t.positive), tgt.at(t.negative),
                          margin, dist);
    }
    out.triplet = acc / double(triplets.size());
  }
  out.total = alpha * out.triplet + beta * out.nll;
  return out;
}

LossBreakdown training_loss(const std::vector<Embedding>& ref,
                            const std::vector<Embedding>& tgt, double gamma,
                            const LabelPairs& labels,
                            const std::vector<Triplet>& triplets,
                            const LossHyperparams& hp) {
  const CostMatrix cost = augment_dustbin(cosine_cost(ref, tgt), gamma);
  const Marginals marg = default_marginals(ref.size(), tgt.size());
  // Negative tolerance: the unrolled iteration count is part of the function
  // being differentiated, so never stop early.
  const TransportPlan plan = sinkhorn(cost, marg, hp.epsilon, hp.sinkhorn_iters, -1.0);
  return total_loss(plan, labels, ref, tgt, triplets, hp.alpha, hp.beta, hp.margin,
                    hp.distance);
}

std::vector<Triplet> mine_triplets(const std::vector<Embedding>& ref,
                                   const std::vector<Embedding>& tgt,
                                   const LabelPairs& labels, TripletDistance dist) {
  std::vector<Triplet> triplets;
  for (const auto& [i, j] : labels) {
    if (i >= ref.size() || j >= tgt.size()) {
      fail(ErrorCode::LabelOutOfRange, "mine_triplets: label out of range");
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = tgt.size();
    for (std::size_t cand = 0; cand < tgt.size(); ++cand) {
      if (cand == j) continue;
      const double d = embedding_distance(ref[i], tgt[cand], dist);
      if (d < best) {
        best = d;
        best_idx = cand;
      }
    }
    if (best_idx < tgt.size()) triplets.push_back({i, j, best_idx});
  }
  return triplets;
}

LossGradient loss_grad(const std::vector<Embedding>& ref,
                       const std::vector<Embedding>& tgt, double gamma,
                       const LabelPairs& labels,
                       const std::vector<Triplet>& triplets,
                       const LossHyperparams& hp) {
  const std::size_t n1 = ref.size();
  const std::size_t n2 = tgt.size();
  const std::size_t dim = n1 ? ref.front().size() : (n2 ? tgt.front().size() : 0);

  const CostMatrix sim = cosine_cost(ref, tgt);
  const CostMatrix cost = augment_dustbin(sim, gamma);
  const Marginals marg = default_marginals(n1, n2);
  const TransportPlan plan = sinkhorn(cost, marg, hp.epsilon, hp.sinkhorn_iters, -1.0);

  LossGradient grad;
  grad.value = total_loss(plan, labels, ref, tgt, triplets, hp.alpha, hp.beta,
                          hp.margin, hp.distance);
  grad.d_ref.assign(n1, Embedding(dim, 0.0));
  grad.d_tgt.assign(n2, Embedding(dim, 0.0));

  // NLL through the soft assignment.
  if (!labels.empty() && hp.beta != 0.0) {
    Matrix upstream(plan.entries.rows(), plan.entries.cols());
    for (const auto& [i, j] : labels) {
      const double p = plan.entries(i, j);
      if (p > kLogClamp) upstream(i, j) += -hp.beta / p;
    }
    const SinkhornGradient sg = sinkhorn_grad(cost, marg, hp.epsilon,
                                              hp.sinkhorn_iters, upstream);
    grad.d_gamma = sg.dgamma;

    // Cosine cost block back to the embeddings.
    for (std::size_t i = 0; i < n1; ++i) {
      const Embedding& u = ref[i];
      double nu = 0.0;
      for (double v : u) nu += v * v;
      nu = std::sqrt(nu);
      for (std::size_t j = 0; j < n2; ++j) {
        const double gc = sg.dc(i, j);
        if (gc == 0.0) continue;
        const Embedding& v = tgt[j];
        double nv = 0.0, dot = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          nv += v[k] * v[k];
          dot += u[k] * v[k];
        }
        nv = std::sqrt(nv);
        const double inv = 1.0 / (nu * nv);
        for (std::size_t k = 0; k < dim; ++k) {
          grad.d_ref[i][k] -= gc * (v[k] * inv - dot * u[k] * inv / (nu * nu));
          grad.d_tgt[j][k] -= gc * (u[k] * inv - dot * v[k] * inv / (nv * nv));
        }
      }
    }
  }

  // Triplet term, averaged.
  if (!triplets.empty() && hp.alpha != 0.0) {
    const double w = hp.alpha / double(triplets.size());
    for (const Triplet& t : triplets) {
      const Embedding& a = ref.at(t.anchor);
      const Embedding& p = tgt.at(t.positive);
      const Embedding& n = tgt.at(t.negative);
      const double hinge = embedding_distance(a, p, hp.distance) -
                           embedding_distance(a, n, hp.distance) + hp.margin;
      if (hinge <= 0.0) continue;
      if (hp.distance == TripletDistance::L1) {
        for (std::size_t k = 0; k < dim; ++k) {
          const double sp = sign(a[k] - p[k]);
          const double sn = sign(a[k] - n[k]);
          grad.d_ref[t.anchor][k] += w * (sp - sn);
          grad.d_tgt[t.positive][k] -= w * sp;
          grad.d_tgt[t.negative][k] += w * sn;
        }
      } else {
        const double dp = embedding_distance(a, p, hp.distance);
        const double dn = embedding_distance(a, n, hp.distance);
        for (std::size_t k = 0; k < dim; ++k) {
          const double gp = dp > 0.0 ? (a[k] - p[k]) / dp : 0.0;
          const double gn = dn > 0.0 ? (a[k] - n[k]) / dn : 0.0;
          grad.d_ref[t.anchor][k] += w * (gp - gn);
          grad.d_tgt[t.positive][k] -= w * gp;
          grad.d_tgt[t.negative][k] += w * gn;
        }
      }
    }
  }

  return grad;
}

}  // namespace ott
