#pragma once

#include <vector>

#include "core/types.hpp"

namespace ott {

/// Pairwise assignment cost between two detection sets. When `augmented` is
/// set the matrix carries one extra trailing row and column holding the
/// non-match cost gamma.
struct CostMatrix {
  Matrix entries;
  bool augmented = false;
  double gamma = 0.0;

  std::size_t rows() const { return entries.rows(); }
  std::size_t cols() const { return entries.cols(); }
  double at(std::size_t i, std::size_t j) const { return entries(i, j); }

  /// Detection counts excluding the dustbin slots.
  std::size_t real_rows() const { return augmented ? rows() - 1 : rows(); }
  std::size_t real_cols() const { return augmented ? cols() - 1 : cols(); }
};

/// C[i][j] = 1 - <x1_i, x2_j> on unit-normalized embeddings; range [0, 2].
CostMatrix cosine_cost(const std::vector<Embedding>& x1, const std::vector<Embedding>& x2);

/// C[i][j] = 1 - IoU(warped_i, targets_j).
CostMatrix iou_cost(const std::vector<BoundingBox>& warped,
                    const std::vector<BoundingBox>& targets);

/// sigma * sim + (1 - sigma) * iou, elementwise, on unaugmented matrices.
CostMatrix combine(const CostMatrix& sim, const CostMatrix& iou_costs, double sigma);

/// Appends the dustbin row and column, all entries equal to gamma.
CostMatrix augment_dustbin(const CostMatrix& c, double gamma);

}  // namespace ott
