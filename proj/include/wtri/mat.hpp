#pragma once
// Square matrices over a Field, and characteristic polynomials.

#include "wtri/linalg.hpp"
#include "wtri/poly.hpp"

#include <sstream>
#include <string>

namespace wtri {

/// n x n matrix, row-major.
class Mat {
 public:
  Mat() = default;
  Mat(Field f, std::size_t n) : f_(std::move(f)), n_(n), e_(n * n, 0) {}
  Mat(Field f, std::size_t n, std::vector<Elem> entries) : f_(std::move(f)), n_(n), e_(std::move(entries)) {
    if (e_.size() != n_ * n_) throw ShapeError("matrix needs n*n entries");
    for (auto x : e_) {
      if (!f_.contains(x)) throw FieldError("matrix entry outside the field");
    }
  }
  static Mat from_ints(const Field& f, std::size_t n, std::initializer_list<std::int64_t> xs) {
    std::vector<Elem> v;
    for (auto x : xs) v.push_back(f.from_int(x));
    return Mat(f, n, std::move(v));
  }
  static Mat identity(const Field& f, std::size_t n) {
    Mat m(f, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  /// E_{i,j} with 0-based indices.
  static Mat unit(const Field& f, std::size_t n, std::size_t i, std::size_t j) {
    Mat m(f, n);
    m(i, j) = 1;
    return m;
  }
  /// Matrix whose columns are the given vectors.
  static Mat from_columns(const Field& f, const std::vector<Vec>& cols) {
    const std::size_t n = cols.size();
    Mat m(f, n);
    for (std::size_t j = 0; j < n; ++j) {
      if (cols[j].size() != n) throw ShapeError("column length mismatch");
      for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }
  /// Companion matrix of a monic polynomial: subdiagonal ones, last column -c_i.
  static Mat companion(const Poly& f) {
    if (!f.is_monic() || f.degree() < 1) throw PreconditionError("companion matrix needs a monic non-constant polynomial");
    const auto n = static_cast<std::size_t>(f.degree());
    const Field& F = f.field();
    Mat m(F, n);
    for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = 1;
    for (std::size_t i = 0; i < n; ++i) m(i, n - 1) = F.neg(f.coeff(i));
    return m;
  }

  const Field& field() const { return f_; }
  std::size_t n() const { return n_; }
  const std::vector<Elem>& entries() const { return e_; }
  std::vector<Elem>& entries() { return e_; }
  Elem& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

  bool operator==(const Mat& o) const { return n_ == o.n_ && e_ == o.e_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }
  bool operator<(const Mat& o) const { return e_ < o.e_; }

  bool is_zero() const {
    for (auto x : e_) {
      if (x) return false;
    }
    return true;
  }

  Mat operator+(const Mat& o) const {
    check(o);
    Mat r(f_, n_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = f_.add(e_[i], o.e_[i]);
    return r;
  }
  Mat operator-(const Mat& o) const {
    check(o);
    Mat r(f_, n_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = f_.sub(e_[i], o.e_[i]);
    return r;
  }
  Mat operator*(const Mat& o) const {
    check(o);
    Mat r(f_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < n_; ++k) {
        const Elem a = (*this)(i, k);
        if (!a) continue;
        for (std::size_t j = 0; j < n_; ++j) r(i, j) = f_.add(r(i, j), f_.mul(a, o(k, j)));
      }
    }
    return r;
  }
  Vec operator*(const Vec& v) const {
    if (v.size() != n_) throw ShapeError("vector length mismatch");
    Vec r(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) r[i] = f_.add(r[i], f_.mul((*this)(i, j), v[j]));
    }
    return r;
  }
  Mat scaled(Elem s) const {
    Mat r(*this);
    for (auto& x : r.e_) x = f_.mul(x, s);
    return r;
  }
  Mat transpose() const {
    Mat r(f_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    }
    return r;
  }
  Elem trace() const {
    Elem t = 0;
    for (std::size_t i = 0; i < n_; ++i) t = f_.add(t, (*this)(i, i));
    return t;
  }
  Vec column(std::size_t j) const {
    Vec c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  Dense dense() const {
    Dense d(n_, n_);
    d.a = e_;
    return d;
  }
  std::size_t rank() const { return wtri::rank(dense(), f_); }

  bool is_upper_triangular() const {
    for (std::size_t i = 1; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if ((*this)(i, j)) return false;
      }
    }
    return true;
  }

  std::optional<Mat> inverse() const {
    Dense aug(n_, 2 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, n_ + i) = 1;
    }
    const auto piv = rref_inplace(aug, f_);
    if (piv.size() < n_ || piv[n_ - 1] != n_ - 1) return std::nullopt;
    Mat r(f_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) r(i, j) = aug(i, n_ + j);
    }
    return r;
  }
  Mat inverse_or_throw() const {
    auto inv = inverse();
    if (!inv) throw PreconditionError("matrix is singular");
    return *inv;
  }

  /// `[[a,b],[c,d]]` style rendering.
  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < n_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < n_; ++j) os << (j ? "," : "") << (*this)(i, j);
      os << "]";
    }
    os << "]";
    return os.str();
  }

 private:
  void check(const Mat& o) const {
    if (o.n_ != n_) throw ShapeError("matrix size mismatch");
    if (o.f_ != f_) throw ShapeError("matrix field mismatch");
  }

  Field f_;
  std::size_t n_ = 0;
  std::vector<Elem> e_;
};

/// Coefficients (constant first, monic degree n) of det(tI - A) for a
/// row-major n x n array, via Berkowitz's division-free recurrence.
inline std::vector<Elem> charpoly_coeffs(const Elem* a, std::size_t n, const Field& F) {
  if (n == 0) return {1};
  // polys hold coefficients highest degree first.
  std::vector<Elem> cur{1, F.neg(a[(n - 1) * n + (n - 1)])};
  // Grow the trailing principal submatrix from size 1 to n.
  for (std::size_t s = 2; s <= n; ++s) {
    const std::size_t top = n - s;  // index of the new row/column
    const std::size_t m = s - 1;    // size of the existing block (rows top+1..n-1)
    // Toeplitz column: 1, -a_tt, -R C, -R A C, ..., -R A^{m-1} C
    std::vector<Elem> col(s + 1);
    col[0] = 1;
    col[1] = F.neg(a[top * n + top]);
    Vec v(m), w(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = a[(top + 1 + i) * n + top];  // C
    for (std::size_t k = 0; k < m; ++k) {
      Elem rv = 0;
      for (std::size_t j = 0; j < m; ++j) rv = F.add(rv, F.mul(a[top * n + top + 1 + j], v[j]));
      col[k + 2] = F.neg(rv);
      if (k + 1 < m) {
        for (std::size_t i = 0; i < m; ++i) {
          Elem acc = 0;
          for (std::size_t j = 0; j < m; ++j) acc = F.add(acc, F.mul(a[(top + 1 + i) * n + top + 1 + j], v[j]));
          w[i] = acc;
        }
        std::swap(v, w);
      }
    }
    std::vector<Elem> next(s + 1, 0);
    for (std::size_t i = 0; i <= s; ++i) {
      Elem acc = 0;
      for (std::size_t j = 0; j < cur.size() && j <= i; ++j) acc = F.add(acc, F.mul(col[i - j], cur[j]));
      next[i] = acc;
    }
    cur = std::move(next);
  }
  std::reverse(cur.begin(), cur.end());
  return cur;
}

/// Monic characteristic polynomial det(tI - M).
inline Poly char_poly(const Mat& M) {
  return Poly(M.field(), charpoly_coeffs(M.entries().data(), M.n(), M.field()));
}

}  // namespace wtri
