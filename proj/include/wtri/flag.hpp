#pragma once
// Complete flags, the spaces T_F they determine, and invariant subspaces.

#include "wtri/subspaces.hpp"

#include <sstream>

namespace wtri {

/// Subspace of F^n as its canonical RREF basis.
using Subspace = std::vector<Vec>;

/// Complete flag given by an ordered basis; V_i = span(e_1..e_i).
class Flag {
 public:
  Flag() = default;
  Flag(Field f, std::vector<Vec> basis) : f_(std::move(f)), basis_(std::move(basis)) {
    const std::size_t n = basis_.size();
    for (const auto& v : basis_) {
      if (v.size() != n) throw ShapeError("flag basis must have n vectors of length n");
    }
    if (n > 0 && rank(Dense::from_rows(basis_, n), f_) != n) throw PreconditionError("flag basis is dependent");
  }
  static Flag standard(const Field& f, std::size_t n) {
    std::vector<Vec> b;
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, 0);
      e[i] = 1;
      b.push_back(std::move(e));
    }
    return Flag(f, std::move(b));
  }

  const Field& field() const { return f_; }
  std::size_t n() const { return basis_.size(); }
  const std::vector<Vec>& basis() const { return basis_; }

  /// Matrix with the basis vectors as columns.
  Mat matrix() const { return Mat::from_columns(f_, basis_); }

  /// Canonical RREF basis of V_i.
  Subspace level(std::size_t i) const {
    return rref_basis(std::vector<Vec>(basis_.begin(), basis_.begin() + static_cast<std::ptrdiff_t>(i)), n(), f_);
  }
  std::vector<Subspace> chain() const {
    std::vector<Subspace> c;
    for (std::size_t i = 0; i <= n(); ++i) c.push_back(level(i));
    return c;
  }

  /// Same subspace chain (the flag as a geometric object).
  bool same_chain(const Flag& o) const { return chain() == o.chain(); }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      os << "e" << (i + 1) << " =";
      for (auto x : basis_[i]) os << " " << x;
      os << "\n";
    }
    return os.str();
  }

 private:
  Field f_;
  std::vector<Vec> basis_;
};

/// Image of a flag under P.
inline Flag transform(const Flag& F, const Mat& P) {
  std::vector<Vec> b;
  for (const auto& v : F.basis()) b.push_back(P * v);
  return Flag(F.field(), std::move(b));
}

/// T_F: endomorphisms leaving every V_i invariant (upper triangular in the flag basis).
inline MatSpace flag_space(const Flag& F) {
  const std::size_t n = F.n();
  const Mat P = F.matrix();
  const Mat Pinv = P.inverse_or_throw();
  std::vector<Mat> gens;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) gens.push_back(P * Mat::unit(F.field(), n, i, j) * Pinv);
  }
  return MatSpace::span(F.field(), n, gens);
}

inline bool subspace_contains(const Subspace& U, const Vec& v, const Field& F) {
  return is_zero(reduce_against(v, U, pivots_of(U), F));
}

inline bool subspace_includes(const Subspace& big, const Subspace& small, const Field& F) {
  for (const auto& v : small) {
    if (!subspace_contains(big, v, F)) return false;
  }
  return true;
}

/// S U ⊆ U.
inline bool is_invariant(const MatSpace& S, const Subspace& U) {
  const auto piv = pivots_of(U);
  for (const auto& b : S.basis()) {
    for (const auto& u : U) {
      if (!is_zero(reduce_against(b * u, U, piv, S.field()))) return false;
    }
  }
  return true;
}

/// Every S-invariant subspace of F^n, optionally only those of the listed
/// dimensions, ordered by dimension then enumeration order.
inline std::vector<Subspace> invariant_subspaces(const MatSpace& S, const std::vector<std::size_t>& dims = {},
                                                 std::uint64_t budget = 1ULL << 20) {
  const std::size_t n = S.n();
  std::vector<Subspace> out;
  for (std::size_t k = 0; k <= n; ++k) {
    if (!dims.empty() && std::find(dims.begin(), dims.end(), k) == dims.end()) continue;
    enumerate_subspaces(n, k, S.field(), {}, [&](const Subspace& U) {
      if (is_invariant(S, U)) out.push_back(U);
      return true;
    }, budget);
  }
  return out;
}

/// Pairwise comparable under inclusion.
inline bool is_chain(const std::vector<Subspace>& subs, const Field& F) {
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t j = i + 1; j < subs.size(); ++j) {
      if (!subspace_includes(subs[i], subs[j], F) && !subspace_includes(subs[j], subs[i], F)) return false;
    }
  }
  return true;
}

}  // namespace wtri
