#pragma once
// Rectangular matrices over a Field and Gauss-Jordan elimination.

#include "wtri/field.hpp"

#include <optional>
#include <vector>

namespace wtri {

using Vec = std::vector<Elem>;

/// Row-major rows x cols array of field elements. The field is passed to
/// each algorithm rather than stored.
struct Dense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> a;

  Dense() = default;
  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  Elem& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Dense from_rows(const std::vector<Vec>& rs, std::size_t cols) {
    Dense d(rs.size(), cols);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (rs[i].size() != cols) throw ShapeError("row length mismatch");
      std::copy(rs[i].begin(), rs[i].end(), d.a.begin() + static_cast<std::ptrdiff_t>(i * cols));
    }
    return d;
  }

  Vec row(std::size_t i) const {
    return Vec(a.begin() + static_cast<std::ptrdiff_t>(i * cols), a.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
  }

  bool operator==(const Dense&) const = default;
};

/// In-place reduced row echelon form. Returns pivot columns; rows past the
/// rank are zero.
inline std::vector<std::size_t> rref_inplace(Dense& m, const Field& F) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && m(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
    }
    const Elem inv = F.inv(m(r, c));
    if (inv != 1) {
      for (std::size_t j = c; j < m.cols; ++j) m(r, j) = F.mul(m(r, j), inv);
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      const Elem f = m(i, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < m.cols; ++j) {
        if (m(r, j)) m(i, j) = F.sub(m(i, j), F.mul(f, m(r, j)));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// RREF of the span of `vectors`, with zero rows dropped.
inline std::vector<Vec> rref_basis(const std::vector<Vec>& vectors, std::size_t dim, const Field& F) {
  if (vectors.empty()) return {};
  Dense m = Dense::from_rows(vectors, dim);
  const auto piv = rref_inplace(m, F);
  std::vector<Vec> out;
  out.reserve(piv.size());
  for (std::size_t i = 0; i < piv.size(); ++i) out.push_back(m.row(i));
  return out;
}

inline std::size_t rank(Dense m, const Field& F) { return rref_inplace(m, F).size(); }

/// Basis of {v : A v = 0}. One basis vector per free column, with a 1 in
/// that column (standard RREF null-space basis).
inline std::vector<Vec> kernel_basis(const Dense& A, const Field& F) {
  Dense m = A;
  const auto piv = rref_inplace(m, F);
  std::vector<bool> is_pivot(A.cols, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<Vec> out;
  for (std::size_t free = 0; free < A.cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(A.cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F.neg(m(i, free));
    out.push_back(std::move(v));
  }
  return out;
}

/// Some solution of A v = b, or nullopt if inconsistent.
inline std::optional<Vec> rref_solve(const Dense& A, const Vec& b, const Field& F) {
  if (b.size() != A.rows) throw ShapeError("right-hand side length does not match row count");
  Dense aug(A.rows, A.cols + 1);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) aug(i, j) = A(i, j);
    aug(i, A.cols) = b[i];
  }
  const auto piv = rref_inplace(aug, F);
  if (!piv.empty() && piv.back() == A.cols) return std::nullopt;
  Vec v(A.cols, 0);
  for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = aug(i, A.cols);
  return v;
}

/// Index of the first nonzero entry, or v.size() for the zero vector.
inline std::size_t leading_index(const Vec& v) {
  std::size_t i = 0;
  while (i < v.size() && v[i] == 0) ++i;
  return i;
}

inline bool is_zero(const Vec& v) { return leading_index(v) == v.size(); }

/// Scales v so its first nonzero coordinate is 1.
inline Vec projective_normalize(Vec v, const Field& F) {
  const auto i = leading_index(v);
  if (i == v.size()) return v;
  const Elem inv = F.inv(v[i]);
  for (auto& x : v) x = F.mul(x, inv);
  return v;
}

/// Reduces v against rows of an RREF basis with the given pivots.
inline Vec reduce_against(Vec v, const std::vector<Vec>& basis, const std::vector<std::size_t>& pivots,
                          const Field& F) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Elem c = v[pivots[i]];
    if (c == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (basis[i][j]) v[j] = F.sub(v[j], F.mul(c, basis[i][j]));
    }
  }
  return v;
}

inline std::vector<std::size_t> pivots_of(const std::vector<Vec>& rref_rows) {
  std::vector<std::size_t> p;
  p.reserve(rref_rows.size());
  for (const auto& r : rref_rows) p.push_back(leading_index(r));
  return p;
}

}  // namespace wtri
