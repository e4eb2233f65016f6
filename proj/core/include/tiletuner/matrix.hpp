#pragma once

#include <cstddef>
#include <vector>

namespace tiletuner {

// Dense row-major matrix of 64-bit floats.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  double operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }

  bool operator==(const Matrix&) const = default;
};

}  // namespace tiletuner
