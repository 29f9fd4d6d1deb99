#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "core/error.hpp"

namespace ott {

/// Axis-aligned box in pixel coordinates, corner convention (x1,y1,x2,y2).
struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }

  bool valid() const {
    return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
           std::isfinite(y2) && x1 < x2 && y1 < y2;
  }

  BoundingBox translated(double dx, double dy) const {
    return {x1 + dx, y1 + dy, x2 + dx, y2 + dy};
  }

  bool operator==(const BoundingBox&) const = default;
};

inline void require_valid(const BoundingBox& b, const char* what) {
  if (!b.valid()) {
    fail(ErrorCode::InvalidArgument,
         std::string(what) + ": degenerate or non-finite bounding box");
  }
}

/// One detected object in one frame.
struct Detection {
  BoundingBox box;
  double confidence = 1.0;
  int64_t class_id = 0;
  int64_t frame = 0;
  std::optional<std::size_t> embedding_row;
};

/// Appearance feature vector.
using Embedding = std::vector<double>;

/// Minimal row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One line of tracker output (or of a ground-truth file): a box owned by a
/// track id in a frame.
struct TrackRecord {
  int64_t frame = 0;
  int64_t track_id = 0;
  BoundingBox box;

  bool operator==(const TrackRecord&) const = default;
};

using TrackOutput = std::vector<TrackRecord>;

}  // namespace ott
