#pragma once
// Linear subspaces of M_n(F), stored as the RREF of their row-major
// vectorizations, and the plain-text space file format.

#include "wtri/mat.hpp"

#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace wtri {

inline constexpr std::uint64_t kDefaultSweepBudget = 1ULL << 28;

/// q^d, saturating at UINT64_MAX.
inline std::uint64_t checked_pow(std::uint64_t q, std::size_t d) {
  unsigned __int128 r = 1;
  for (std::size_t i = 0; i < d; ++i) {
    r *= q;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

class MatSpace {
 public:
  MatSpace() = default;
  MatSpace(Field f, std::size_t n) : f_(std::move(f)), n_(n) {}

  /// Canonical space spanned by `mats` (all of size n over f).
  static MatSpace span(const Field& f, std::size_t n, const std::vector<Mat>& mats) {
    std::vector<Vec> rows;
    rows.reserve(mats.size());
    for (const auto& m : mats) {
      if (m.n() != n) throw ShapeError("matrix size mismatch in span");
      if (m.field() != f) throw ShapeError("matrix field mismatch in span");
      rows.push_back(m.entries());
    }
    return from_vectors(f, n, rows);
  }
  static MatSpace from_vectors(const Field& f, std::size_t n, const std::vector<Vec>& rows) {
    MatSpace s(f, n);
    s.rows_ = rref_basis(rows, n * n, f);
    s.pivots_ = pivots_of(s.rows_);
    return s;
  }
  static MatSpace full(const Field& f, std::size_t n) {
    std::vector<Mat> b;
    for (std::size_t i = 0; i < n * n; ++i) b.push_back(Mat::unit(f, n, i / n, i % n));
    return span(f, n, b);
  }

  const Field& field() const { return f_; }
  std::size_t n() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  Mat basis(std::size_t i) const { return Mat(f_, n_, rows_[i]); }
  std::vector<Mat> basis() const {
    std::vector<Mat> b;
    for (std::size_t i = 0; i < dim(); ++i) b.push_back(basis(i));
    return b;
  }

  bool operator==(const MatSpace& o) const { return n_ == o.n_ && f_ == o.f_ && rows_ == o.rows_; }
  bool operator!=(const MatSpace& o) const { return !(*this == o); }
  bool operator<(const MatSpace& o) const { return rows_ < o.rows_; }

  bool contains(const Mat& m) const {
    if (m.n() != n_ || m.field() != f_) throw ShapeError("matrix does not match space");
    return is_zero(reduce_against(m.entries(), rows_, pivots_, f_));
  }
  bool contains(const MatSpace& o) const {
    for (const auto& r : o.rows_) {
      if (!is_zero(reduce_against(r, rows_, pivots_, f_))) return false;
    }
    return true;
  }

  /// Coordinates of a member in the canonical basis (the pivot entries).
  Vec coordinates(const Mat& m) const {
    if (!contains(m)) throw PreconditionError("matrix is not in the space");
    Vec c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = m.entries()[pivots_[i]];
    return c;
  }

  Mat combination(const Vec& coeffs) const {
    if (coeffs.size() != dim()) throw ShapeError("coefficient count mismatch");
    Mat m(f_, n_);
    auto& e = m.entries();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (!coeffs[i]) continue;
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (rows_[i][j]) e[j] = f_.add(e[j], f_.mul(coeffs[i], rows_[i][j]));
      }
    }
    return m;
  }

  /// Element number `index` in lexicographic coefficient order (first
  /// coefficient most significant).
  Mat element_at(std::uint64_t index) const {
    Vec c(dim(), 0);
    for (std::size_t i = dim(); i-- > 0;) {
      c[i] = index % f_.q();
      index /= f_.q();
    }
    return combination(c);
  }

  std::uint64_t element_count() const { return checked_pow(f_.q(), dim()); }

  MatSpace operator+(const MatSpace& o) const {
    std::vector<Vec> all = rows_;
    all.insert(all.end(), o.rows_.begin(), o.rows_.end());
    return from_vectors(f_, n_, all);
  }

  /// Subspace of members whose coordinates c satisfy sum_i c_i * L(basis_i) = 0,
  /// where L maps a basis matrix to a constraint vector.
  MatSpace solve_subspace(const std::function<Vec(const Mat&)>& constraint) const {
    if (dim() == 0) return *this;
    std::vector<Vec> images;
    for (std::size_t i = 0; i < dim(); ++i) images.push_back(constraint(basis(i)));
    const std::size_t rows = images.front().size();
    Dense A(rows, dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      for (std::size_t r = 0; r < rows; ++r) A(r, i) = images[i][r];
    }
    std::vector<Vec> out;
    for (const auto& k : kernel_basis(A, f_)) out.push_back(combination(k).entries());
    return from_vectors(f_, n_, out);
  }

  MatSpace intersect(const MatSpace& o) const {
    // Members of *this with zero residual modulo o.
    return solve_subspace([&](const Mat& m) { return reduce_against(m.entries(), o.rows_, o.pivots_, f_); });
  }

  std::string to_string() const;

 private:
  Field f_;
  std::size_t n_ = 0;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

/// Sequential stream over all q^d elements in lexicographic coefficient order.
class ElementStream {
 public:
  ElementStream(const MatSpace& s, std::uint64_t budget = kDefaultSweepBudget) : s_(s), total_(s.element_count()) {
    if (total_ > budget) {
      throw BudgetExceeded("sweep of " + std::to_string(s.field().q()) + "^" + std::to_string(s.dim()) +
                           " elements exceeds budget " + std::to_string(budget));
    }
  }
  std::uint64_t size() const { return total_; }
  std::optional<Mat> next() {
    if (i_ >= total_) return std::nullopt;
    return s_.element_at(i_++);
  }

 private:
  const MatSpace& s_;
  std::uint64_t total_;
  std::uint64_t i_ = 0;
};

inline ElementStream enumerate_elements(const MatSpace& s, std::uint64_t budget = kDefaultSweepBudget) {
  return ElementStream(s, budget);
}

/// {P M P^-1 : M in S}.
inline MatSpace conjugate_space(const MatSpace& s, const Mat& P) {
  auto inv = P.inverse();
  if (!inv) throw PreconditionError("conjugating matrix is singular");
  std::vector<Mat> img;
  for (const auto& b : s.basis()) img.push_back(P * b * *inv);
  return MatSpace::span(s.field(), s.n(), img);
}

/// Reversal permutation matrix, ones where i + j = n - 1 (0-based).
inline Mat reversal(const Field& f, std::size_t n) {
  Mat p(f, n);
  for (std::size_t i = 0; i < n; ++i) p(i, n - 1 - i) = 1;
  return p;
}

/// P S^T P^-1 with P the reversal permutation.
inline MatSpace transpose_dual(const MatSpace& s) {
  const Mat P = reversal(s.field(), s.n());
  std::vector<Mat> img;
  for (const auto& b : s.basis()) img.push_back(P * b.transpose() * P);
  return MatSpace::span(s.field(), s.n(), img);
}

/// Orthogonal complement for the trace form (M, N) -> tr(MN).
inline MatSpace trace_orthogonal(const MatSpace& s) {
  const std::size_t n = s.n(), nn = n * n;
  Dense A(s.dim(), nn);
  for (std::size_t r = 0; r < s.dim(); ++r) {
    // tr(MN) = sum_{i,j} M_ij N_ji
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) A(r, j * n + i) = s.rows()[r][i * n + j];
    }
  }
  if (s.dim() == 0) return MatSpace::full(s.field(), n);
  return MatSpace::from_vectors(s.field(), n, kernel_basis(A, s.field()));
}

// ---------------------------------------------------------------------------
// Space file format
//
//   field GF(3)
//   n 3
//   dim 6
//   mat <n*n integers row-major>    (dim times)
//
// `#` starts a comment.

inline void write_space(std::ostream& os, const MatSpace& s) {
  os << "field " << s.field().descriptor() << "\n";
  os << "n " << s.n() << "\n";
  os << "dim " << s.dim() << "\n";
  for (const auto& r : s.rows()) {
    os << "mat";
    for (auto x : r) os << " " << x;
    os << "\n";
  }
}

inline std::string MatSpace::to_string() const {
  std::ostringstream os;
  write_space(os, *this);
  return os.str();
}

/// Parses one space. With `strict`, a dependent basis is an error; otherwise
/// the listed matrices are canonicalized. Reading stops after `dim` mats, so
/// several spaces can be read back to back from one stream.
inline MatSpace read_space(std::istream& is, bool strict = false, std::size_t* line_counter = nullptr) {
  std::size_t local_line = 0;
  std::size_t& lineno = line_counter ? *line_counter : local_line;
  std::optional<Field> field;
  std::optional<std::size_t> n, dim;
  std::vector<Vec> mats;
  std::string line;
  auto fail = [&](const std::string& msg, std::size_t col) -> ParseError { return ParseError(msg, lineno, col); };
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto kw_end = line.find_first_of(" \t", first);
    const std::string kw = line.substr(first, kw_end == std::string::npos ? std::string::npos : kw_end - first);
    const std::size_t arg_col = kw_end == std::string::npos ? line.size() + 1 : kw_end + 2;
    const std::string arg = kw_end == std::string::npos ? "" : line.substr(kw_end);
    if (kw == "field") {
      if (field) throw fail("duplicate field line", first + 1);
      try {
        field = Field::parse(arg);
      } catch (const Error& e) {
        throw fail(e.what(), arg_col);
      }
    } else if (kw == "n" || kw == "dim") {
      std::uint64_t v = 0;
      try {
        v = detail::parse_u64(arg, kw);
      } catch (const Error& e) {
        throw fail(e.what(), arg_col);
      }
      if (kw == "n") {
        if (n) throw fail("duplicate n line", first + 1);
        if (v == 0 || v > 64) throw fail("n must be in 1..64", arg_col);
        n = v;
      } else {
        if (dim) throw fail("duplicate dim line", first + 1);
        dim = v;
      }
    } else if (kw == "mat") {
      if (!field || !n || !dim) throw fail("mat before field, n and dim", first + 1);
      std::istringstream ss(arg);
      Vec v;
      std::string tok;
      while (ss >> tok) {
        std::uint64_t x = 0;
        try {
          x = detail::parse_u64(tok, "entry");
        } catch (const Error& e) {
          throw fail(e.what(), arg_col);
        }
        if (x >= field->q()) throw fail("entry " + tok + " is not an element of " + field->descriptor(), arg_col);
        v.push_back(x);
      }
      if (v.size() != *n * *n) {
        throw fail("expected " + std::to_string(*n * *n) + " entries, got " + std::to_string(v.size()), arg_col);
      }
      mats.push_back(std::move(v));
      if (mats.size() == *dim) break;
    } else {
      throw fail("unknown keyword '" + kw + "'", first + 1);
    }
    if (field && n && dim && *dim == 0) break;
  }
  if (!field || !n || !dim) throw ParseError("incomplete space: need field, n and dim lines", lineno, 0);
  if (mats.size() != *dim) {
    throw ParseError("expected " + std::to_string(*dim) + " mat lines, got " + std::to_string(mats.size()), lineno, 0);
  }
  auto s = MatSpace::from_vectors(*field, *n, mats);
  if (strict && s.dim() != *dim) throw ParseError("basis is linearly dependent (strict mode)", lineno, 0);
  return s;
}

inline MatSpace parse_space(const std::string& text, bool strict = false) {
  std::istringstream is(text);
  return read_space(is, strict);
}

}  // namespace wtri
