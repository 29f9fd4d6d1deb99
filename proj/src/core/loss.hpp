#pragma once

#include <utility>
#include <vector>

#include "core/assignment.hpp"
#include "core/types.hpp"

namespace ott {

enum class TripletDistance { L1, L2 };

struct LossBreakdown {
  double nll = 0.0;
  double triplet = 0.0;
  double total = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double margin = 0.0;
};

/// Anchor lives in the reference frame; positive and negative in the target.
struct Triplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
};

struct LossHyperparams {
  double alpha = 1.0;
  double beta = 0.5;
  double margin = 0.3;
  double epsilon = 0.1;
  int sinkhorn_iters = 100;
  TripletDistance distance = TripletDistance::L1;
};

using LabelPairs = std::vector<std::pair<std::size_t, std::size_t>>;

/// -sum log P[i][j] over the labeled real cells, entries clamped at 1e-30.
double nll_loss(const TransportPlan& plan, const LabelPairs& labels);

double embedding_distance(const Embedding& x, const Embedding& y, TripletDistance dist);

/// max{d(a,p) - d(a,n) + margin, 0}.
double triplet_loss(const Embedding& anchor, const Embedding& positive,
                    const Embedding& negative, double margin,
                    TripletDistance dist = TripletDistance::L1);

/// alpha * mean triplet + beta * nll over an existing plan.
LossBreakdown total_loss(const TransportPlan& plan, const LabelPairs& labels,
                         const std::vector<Embedding>& ref,
                         const std::vector<Embedding>& tgt,
                         const std::vector<Triplet>& triplets,
                         double alpha, double beta, double margin,
                         TripletDistance dist = TripletDistance::L1);

/// Full forward pass from embeddings: cosine cost, dustbin, fixed-iteration
/// Sinkhorn, then the weighted objective.
LossBreakdown training_loss(const std::vector<Embedding>& ref,
                            const std::vector<Embedding>& tgt, double gamma,
                            const LabelPairs& labels,
                            const std::vector<Triplet>& triplets,
                            const LossHyperparams& hp);

/// Hard-negative mining: for every labeled pair the anchor is the reference
/// embedding, the positive its labeled partner, and the negative the closest
/// non-partner target. Pairs with no candidate negative yield no triplet.
std::vector<Triplet> mine_triplets(const std::vector<Embedding>& ref,
                                   const std::vector<Embedding>& tgt,
                                   const LabelPairs& labels,
                                   TripletDistance dist = TripletDistance::L1);

struct LossGradient {
  std::vector<Embedding> d_ref;
  std::vector<Embedding> d_tgt;
  double d_gamma = 0.0;
  LossBreakdown value;
};

/// Exact gradient of training_loss w.r.t. every embedding coordinate and
/// gamma, chaining through the unrolled Sinkhorn iterations.
LossGradient loss_grad(const std::vector<Embedding>& ref,
                       const std::vector<Embedding>& tgt, double gamma,
                       const LabelPairs& labels,
                       const std::vector<Triplet>& triplets,
                       const LossHyperparams& hp);

}  // namespace ott
