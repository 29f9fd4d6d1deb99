#include "core/cost.hpp"

#include <cmath>

#include "core/geometry.hpp"

namespace ott {

namespace {

std::vector<Embedding> normalized(const std::vector<Embedding>& xs, std::size_t dim) {
  std::vector<Embedding> out;
  out.reserve(xs.size());
  for (const Embedding& x : xs) {
    if (x.size() != dim) {
      fail(ErrorCode::DimensionMismatch, "cosine_cost: embeddings have mixed dimensions");
    }
    double sq = 0.0;
    for (double v : x) {
      if (!std::isfinite(v)) {
        fail(ErrorCode::InvalidArgument, "cosine_cost: non-finite embedding entry");
      }
      sq += v * v;
    }
    const double norm = std::sqrt(sq);
    if (norm == 0.0) {
      fail(ErrorCode::ZeroNormEmbedding, "cosine_cost: zero-norm embedding");
    }
    Embedding u(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) u[k] = x[k] / norm;
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

CostMatrix cosine_cost(const std::vector<Embedding>& x1, const std::vector<Embedding>& x2) {
  const std::size_t dim = !x1.empty() ? x1.front().size()
                        : !x2.empty() ? x2.front().size()
                                      : 0;
  const auto u1 = normalized(x1, dim);
  const auto u2 = normalized(x2, dim);

  CostMatrix c;
  c.entries = Matrix(u1.size(), u2.size());
  for (std::size_t i = 0; i < u1.size(); ++i) {
    for (std::size_t j = 0; j < u2.size(); ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += u1[i][k] * u2[j][k];
      c.entries(i, j) = 1.0 - dot;
    }
  }
  return c;
}

CostMatrix iou_cost(const std::vector<BoundingBox>& warped,
                    const std::vector<BoundingBox>& targets) {
  CostMatrix c;
  c.entries = Matrix(warped.size(), targets.size());
  for (std::size_t i = 0; i < warped.size(); ++i) {
    for (std::size_t j = 0; j < targets.size(); ++j) {
      c.entries(i, j) = 1.0 - iou(warped[i], targets[j]);
    }
  }
  return c;
}

CostMatrix combine(const CostMatrix& sim, const CostMatrix& iou_costs, double sigma) {
  if (sim.augmented || iou_costs.augmented) {
    fail(ErrorCode::InvalidArgument, "combine: expects unaugmented matrices");
  }
  if (!sim.entries.same_shape(iou_costs.entries)) {
    fail(ErrorCode::DimensionMismatch, "combine: shape mismatch");
  }
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "combine: sigma must lie in [0,1]");
  }
  CostMatrix out;
  out.entries = Matrix(sim.rows(), sim.cols());
  for (std::size_t i = 0; i < sim.rows(); ++i) {
    for (std::size_t j = 0; j < sim.cols(); ++j) {
      out.entries(i, j) = sigma * sim.at(i, j) + (1.0 - sigma) * iou_costs.at(i, j);
    }
  }
  return out;
}

CostMatrix augment_dustbin(const CostMatrix& c, double gamma) {
  if (c.augmented) {
    fail(ErrorCode::AlreadyAugmented, "augment_dustbin: matrix already augmented");
  }
  if (!std::isfinite(gamma)) {
    fail(ErrorCode::NonFiniteCost, "augment_dustbin: gamma must be finite");
  }
  CostMatrix out;
  out.entries = Matrix(c.rows() + 1, c.cols() + 1, gamma);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) {
      out.entries(i, j) = c.at(i, j);
    }
  }
  out.augmented = true;
  out.gamma = gamma;
  return out;
}

}  // namespace ott
