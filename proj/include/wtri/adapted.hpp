#pragma once
// Adapted vectors and hyperplanes.
//
// x is adapted for S when no nonzero u in S has range F x and trace 0;
// a hyperplane H is adapted when no nonzero u in S has kernel H and trace 0.
// Both reduce to: the trace is injective on a linear subspace of S.

#include "wtri/space.hpp"

namespace wtri {

/// Rows spanning the annihilator {phi : phi(v) = 0 for v in span(vs)}.
inline std::vector<Vec> annihilator(const std::vector<Vec>& vs, std::size_t n, const Field& F) {
  if (vs.empty()) {
    std::vector<Vec> all;
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, 0);
      e[i] = 1;
      all.push_back(std::move(e));
    }
    return all;
  }
  return kernel_basis(Dense::from_rows(vs, n), F);
}

/// S ∩ Hom(V, F x): members whose columns are all multiples of x.
inline MatSpace range_constrained(const MatSpace& S, const Vec& x) {
  if (x.size() != S.n()) throw ShapeError("vector length mismatch");
  if (is_zero(x)) throw PreconditionError("range vector must be nonzero");
  const Field& F = S.field();
  const std::size_t n = S.n();
  const auto phi = annihilator({x}, n, F);
  return S.solve_subspace([&](const Mat& u) {
    Vec out;
    out.reserve(phi.size() * n);
    for (const auto& row : phi) {
      for (std::size_t j = 0; j < n; ++j) {
        Elem acc = 0;
        for (std::size_t i = 0; i < n; ++i) acc = F.add(acc, F.mul(row[i], u(i, j)));
        out.push_back(acc);
      }
    }
    return out;
  });
}

/// Members of S vanishing on span(H).
inline MatSpace kernel_constrained(const MatSpace& S, const std::vector<Vec>& H) {
  return S.solve_subspace([&](const Mat& u) {
    Vec out;
    for (const auto& h : H) {
      const Vec uh = u * h;
      out.insert(out.end(), uh.begin(), uh.end());
    }
    if (out.empty()) out.push_back(0);
    return out;
  });
}

/// The trace is injective on W.
inline bool trace_injective(const MatSpace& W) {
  if (W.dim() == 0) return true;
  if (W.dim() > 1) return false;
  return W.basis(0).trace() != 0;
}

inline bool is_adapted_vector(const MatSpace& S, const Vec& x) { return trace_injective(range_constrained(S, x)); }

/// Canonical functional (first nonzero coordinate 1) annihilating the hyperplane spanned by H.
inline Vec hyperplane_functional(const std::vector<Vec>& H, std::size_t n, const Field& F) {
  for (const auto& h : H) {
    if (h.size() != n) throw ShapeError("hyperplane vector length mismatch");
  }
  const auto ann = annihilator(H, n, F);
  if (ann.size() != 1) throw PreconditionError("vectors do not span a hyperplane");
  return projective_normalize(ann.front(), F);
}

inline bool is_adapted_hyperplane(const MatSpace& S, const std::vector<Vec>& H) {
  hyperplane_functional(H, S.n(), S.field());
  return trace_injective(kernel_constrained(S, H));
}

/// Projective points of F^n (first nonzero coordinate 1) in lexicographic
/// order, visited until `visit` returns true. `reverse` walks the same list
/// backwards. Returns the accepted point, if any.
template <class Visit>
std::optional<Vec> scan_projective(std::size_t n, const Field& F, bool reverse, Visit&& visit,
                                   std::uint64_t budget = kDefaultSweepBudget) {
  const std::uint64_t q = F.q();
  // Points with leading index i number q^(n-1-i); leading index n-1 comes first.
  if (checked_pow(q, n) > budget) throw BudgetExceeded("projective scan exceeds budget");
  std::vector<std::size_t> leads;
  for (std::size_t i = n; i-- > 0;) leads.push_back(i);
  if (reverse) std::reverse(leads.begin(), leads.end());
  for (std::size_t lead : leads) {
    const std::size_t free = n - 1 - lead;
    const std::uint64_t count = checked_pow(q, free);
    for (std::uint64_t t = 0; t < count; ++t) {
      std::uint64_t idx = reverse ? count - 1 - t : t;
      Vec v(n, 0);
      v[lead] = 1;
      for (std::size_t j = n; j-- > lead + 1;) {
        v[j] = idx % q;
        idx /= q;
      }
      if (visit(v)) return v;
    }
  }
  return std::nullopt;
}

/// First adapted projective representative in lexicographic order (last when
/// `reverse`), or nullopt.
inline std::optional<Vec> find_adapted_vector(const MatSpace& S, bool reverse = false) {
  return scan_projective(S.n(), S.field(), reverse, [&](const Vec& x) { return is_adapted_vector(S, x); });
}

}  // namespace wtri
