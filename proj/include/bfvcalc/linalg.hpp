#pragma once

#include "bfvcalc/errors.hpp"
#include "bfvcalc/rational.hpp"

#include <optional>
#include <vector>

namespace bfvcalc {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;  // row major

inline Mat mat_zero(size_t rows, size_t cols) {
  return Mat(rows, Vec(cols, Rational(0)));
}

inline Mat mat_identity(size_t n) {
  Mat m = mat_zero(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline bool mat_is_zero(const Mat& m) {
  for (const auto& row : m)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

inline Vec mat_apply(const Mat& m, const Vec& v) {
  Vec out(m.size(), Rational(0));
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != v.size()) throw ArgumentError("matrix/vector size mismatch");
    for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  }
  return out;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.empty() || b.empty()) return {};
  size_t n = a.size(), k = b.size(), m = b[0].size();
  Mat out = mat_zero(n, m);
  for (size_t i = 0; i < n; ++i) {
    if (a[i].size() != k) throw ArgumentError("matrix size mismatch");
    for (size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  }
  return out;
}

inline Mat mat_add(const Mat& a, const Mat& b) {
  Mat out = a;
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out[i].size(); ++j) out[i][j] += b[i][j];
  return out;
}

// (1 + n)^{-1} for nilpotent n, by the geometric series. Throws if n fails
// to be nilpotent within its dimension.
inline Mat mat_inverse_unipotent(const Mat& n) {
  size_t dim = n.size();
  Mat acc = mat_identity(dim);
  Mat power = n;
  for (size_t k = 0; k < dim && !mat_is_zero(power); ++k) {
    Rational sign = (k % 2 == 0) ? Rational(-1) : Rational(1);
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) acc[i][j] += sign * power[i][j];
    power = mat_mul(power, n);
  }
  if (!mat_is_zero(power)) throw ArgumentError("matrix is not nilpotent");
  return acc;
}

// Exact Gaussian elimination for A x = b. Returns a particular solution
// with every free variable pinned to zero (deterministic), or nullopt when
// the system is inconsistent.
inline std::optional<Vec> solve_linear(Mat a, Vec b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  std::vector<int> pivot_col_of_row(rows, -1);
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t sel = rank;
    while (sel < rows && a[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[rank]);
    std::swap(b[sel], b[rank]);
    Rational inv = Rational(1) / a[rank][col];
    for (size_t j = col; j < cols; ++j) a[rank][j] *= inv;
    b[rank] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (size_t j = col; j < cols; ++j) a[i][j] -= f * a[rank][j];
      b[i] -= f * b[rank];
    }
    pivot_col_of_row[rank] = static_cast<int>(col);
    ++rank;
  }
  for (size_t i = rank; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  Vec x(cols, Rational(0));
  for (size_t r = 0; r < rank; ++r) x[static_cast<size_t>(pivot_col_of_row[r])] = b[r];
  return x;
}

}  // namespace bfvcalc
