#pragma once

#include <vector>

#include "rheat/interval.hpp"

namespace rheat {

/// Dense complex-interval matrix, row major.
struct IntervalMatrix {
  int rows = 0, cols = 0;
  std::vector<ComplexInterval> data;

  IntervalMatrix() = default;
  IntervalMatrix(int r, int c) : rows(r), cols(c), data(size_t(r) * c) {}

  ComplexInterval& at(int i, int j) { return data[size_t(i) * cols + j]; }
  const ComplexInterval& at(int i, int j) const { return data[size_t(i) * cols + j]; }

  static IntervalMatrix identity(int n) {
    IntervalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = ComplexInterval::one();
    return m;
  }
};

inline IntervalMatrix operator*(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("IntervalMatrix: size mismatch");
  IntervalMatrix r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const ComplexInterval& aik = a.at(i, k);
      if (aik.is_point() && aik.re.lo == 0.0 && aik.im.lo == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  return r;
}

inline IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("IntervalMatrix: size mismatch");
  IntervalMatrix r(a.rows, a.cols);
  for (size_t i = 0; i < a.data.size(); ++i) r.data[i] = a.data[i] - b.data[i];
  return r;
}

/// Induced l^1 matrix norm (max column sum of |entry|), as an enclosure.
inline RealInterval norm1_upper(const IntervalMatrix& m) {
  RealInterval best(0.0);
  for (int j = 0; j < m.cols; ++j) {
    RealInterval col(0.0);
    for (int i = 0; i < m.rows; ++i) col += cabs(m.at(i, j));
    best = imax(best, col);
  }
  return best;
}

}  // namespace rheat
