#pragma once
// Recovery of the invariant complete flag of an optimal weakly
// triangularizable space, by induction on n:
//
//   1. pick an adapted vector x (it becomes the last basis vector);
//   2. S' = {u in S : u(x) in F x} induces an optimal space T on V / F x;
//   3. S contains a unique rank-1 idempotent pi with range F x;
//   4. recover a flag of T, lift its basis into Ker pi, append x.
//
// n = 2 is handled directly through the trace-orthogonal complement of S.
// Every dimension count that optimality forces is checked along the way and
// recorded in a RecoveryTrace; a failed check raises TheoremViolation. The
// final gate is flag_space(result) == S.

#include "wtri/adapted.hpp"
#include "wtri/flag.hpp"
#include "wtri/triang.hpp"

#include <sstream>

namespace wtri {

/// Precondition failure carrying a non-triangularizable element.
struct NotWeaklyTriangularizable : PreconditionError {
  NotWeaklyTriangularizable(const std::string& what, Mat w) : PreconditionError(what), witness(std::move(w)) {}
  Mat witness;
};

struct Check {
  std::string name;
  bool ok = false;
};

struct LevelRecord {
  std::size_t n = 0;
  std::string kind;  // "trivial", "base", "inductive"
  std::optional<Vec> adapted;
  std::size_t dim_space = 0;
  std::size_t dim_s_prime = 0;
  std::size_t dim_range_line = 0;
  std::size_t dim_quotient = 0;
  std::size_t rank_sx = 0;
  std::size_t dim_s_second = 0;
  std::size_t dim_restricted = 0;
  std::optional<Mat> pi;
  std::optional<Mat> pi_prime;
  std::optional<Elem> alpha;
  // base case
  std::optional<Mat> v0;
  std::optional<Vec> j;
  std::optional<Elem> beta;
  std::optional<std::vector<Vec>> basis;
  std::vector<Check> checks;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.ok) return false;
    }
    return true;
  }
};

/// Linear maps read off the space written in a recovered basis. Rows of
/// `phi` are phi(e_j); columns of `psi` are psi(e_j); `h` lists h on the
/// basis E_ij (i <= j) of upper-triangular (n-2) x (n-2) matrices.
struct StructureMaps {
  std::size_t n = 0;
  Dense f, phi, g, psi, h;
  Elem alpha = 0;
  std::vector<Check> checks;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.ok) return false;
    }
    return true;
  }
  bool all_maps_zero() const {
    auto zero = [](const Dense& d) {
      for (auto x : d.a) {
        if (x) return false;
      }
      return true;
    };
    return zero(f) && zero(phi) && zero(g) && zero(psi) && zero(h) && alpha == 0;
  }
};

struct RecoveryTrace {
  std::string field;
  std::vector<LevelRecord> levels;  // outermost level first once complete
  std::optional<StructureMaps> maps;

  bool ok() const {
    for (const auto& l : levels) {
      if (!l.ok()) return false;
    }
    return !maps || maps->ok();
  }

  std::string to_text() const;
};

namespace detail {

inline std::string vec_text(const Vec& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

inline std::string dense_text(const Dense& d) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < d.rows; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < d.cols; ++j) os << (j ? "," : "") << d(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace detail

inline std::string RecoveryTrace::to_text() const {
  std::ostringstream os;
  os << "# recovery-trace\n";
  os << "field: " << field << "\n";
  os << "levels: " << levels.size() << "\n";
  os << "status: " << (ok() ? "ok" : "FAILED") << "\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    os << "\n[level " << (i + 1) << "]\n";
    os << "n: " << l.n << "\n";
    os << "kind: " << l.kind << "\n";
    os << "dim_space: " << l.dim_space << "\n";
    if (l.adapted) os << "adapted_vector: " << detail::vec_text(*l.adapted) << "\n";
    if (l.kind == "inductive") {
      os << "dim_s_prime: " << l.dim_s_prime << "\n";
      os << "dim_range_line: " << l.dim_range_line << "\n";
      os << "dim_quotient: " << l.dim_quotient << "\n";
      os << "rank_s_x: " << l.rank_sx << "\n";
      os << "dim_s_second: " << l.dim_s_second << "\n";
      os << "dim_restricted: " << l.dim_restricted << "\n";
    }
    if (l.pi) os << "pi: " << l.pi->to_string() << "\n";
    if (l.pi_prime) os << "pi_prime: " << l.pi_prime->to_string() << "\n";
    if (l.alpha) os << "alpha: " << *l.alpha << "\n";
    if (l.v0) os << "v0: " << l.v0->to_string() << "\n";
    if (l.j) os << "j: " << detail::vec_text(*l.j) << "\n";
    if (l.beta) os << "beta: " << *l.beta << "\n";
    if (l.basis) {
      for (std::size_t k = 0; k < l.basis->size(); ++k) os << "e" << (k + 1) << ": " << detail::vec_text((*l.basis)[k]) << "\n";
    }
    for (const auto& c : l.checks) os << "check " << c.name << ": " << (c.ok ? "ok" : "FAILED") << "\n";
  }
  if (maps) {
    os << "\n[structure]\n";
    os << "n: " << maps->n << "\n";
    os << "f: " << detail::dense_text(maps->f) << "\n";
    os << "phi: " << detail::dense_text(maps->phi) << "\n";
    os << "g: " << detail::dense_text(maps->g) << "\n";
    os << "psi: " << detail::dense_text(maps->psi) << "\n";
    os << "h: " << detail::dense_text(maps->h) << "\n";
    os << "alpha: " << maps->alpha << "\n";
    os << "all_maps_zero: " << (maps->all_maps_zero() ? "yes" : "no") << "\n";
    for (const auto& c : maps->checks) os << "check " << c.name << ": " << (c.ok ? "ok" : "FAILED") << "\n";
  }
  return os.str();
}

struct RecoverOptions {
  /// Scan adapted vectors from the end of the lexicographic order.
  bool reverse_scan = false;
  /// Exhaustively confirm weak triangularizability when q^d is within this budget.
  std::uint64_t precondition_budget = 1ULL << 20;
};

namespace detail {

class Recorder {
 public:
  Recorder(RecoveryTrace& tr, LevelRecord& lvl) : tr_(tr), lvl_(lvl) {}
  void operator()(const std::string& name, bool ok) {
    lvl_.checks.push_back({name, ok});
    if (!ok) fail(name);
  }
  [[noreturn]] void fail(const std::string& name) {
    tr_.levels.push_back(lvl_);
    std::reverse(tr_.levels.begin(), tr_.levels.end());
    throw TheoremViolation("theorem violation at n=" + std::to_string(lvl_.n) + ": " + name, tr_.to_text());
  }

 private:
  RecoveryTrace& tr_;
  LevelRecord& lvl_;
};

inline void require_weakly_triangularizable(const MatSpace& S, std::uint64_t budget) {
  if (S.element_count() > budget) return;
  auto v = space_weakly_triangularizable(S, SweepMode::exhaustive(budget));
  if (!v.holds()) {
    throw NotWeaklyTriangularizable("space is not weakly triangularizable; witness " + v.witness->to_string(),
                                    *v.witness);
  }
}

inline std::size_t tri_dim(std::size_t n) { return n * (n + 1) / 2; }

inline Flag base_case_impl(const MatSpace& S, RecoveryTrace& tr) {
  const Field& F = S.field();
  LevelRecord lvl;
  lvl.n = 2;
  lvl.kind = "base";
  lvl.dim_space = S.dim();
  Recorder check(tr, lvl);
  const MatSpace perp = trace_orthogonal(S);
  check("orthogonal complement is a line", perp.dim() == 1);
  const Mat v0 = perp.basis(0);
  lvl.v0 = v0;
  check("tr(v0) = 0", v0.trace() == 0);
  // j with (j, v0 j) independent
  auto j = scan_projective(2, F, false, [&](const Vec& x) {
    const Vec y = v0 * x;
    return rank(Dense::from_rows({x, y}, 2), F) == 2;
  });
  check("v0 is not scalar", j.has_value());
  lvl.j = *j;
  const Vec vj = v0 * *j;
  const Mat B = Mat::from_columns(F, {vj, *j});
  const Mat R = B.inverse_or_throw() * v0 * B;
  check("v0 has the form [[0,1],[beta,0]]", R(0, 0) == 0 && R(0, 1) == 1 && R(1, 1) == 0);
  lvl.beta = R(1, 0);
  check("beta = 0", R(1, 0) == 0);
  Flag flag(F, {vj, *j});
  lvl.basis = flag.basis();
  check("flag space equals S", flag_space(flag) == S);
  tr.levels.push_back(lvl);
  return flag;
}

inline Flag recover_impl(const MatSpace& S, const RecoverOptions& opt, RecoveryTrace& tr) {
  const Field& F = S.field();
  const std::size_t n = S.n();
  if (n == 1) {
    LevelRecord lvl;
    lvl.n = 1;
    lvl.kind = "trivial";
    lvl.dim_space = S.dim();
    Recorder check(tr, lvl);
    check("dim S = 1", S.dim() == 1);
    tr.levels.push_back(lvl);
    return Flag::standard(F, 1);
  }
  if (n == 2) return base_case_impl(S, tr);

  LevelRecord lvl;
  lvl.n = n;
  lvl.kind = "inductive";
  lvl.dim_space = S.dim();
  Recorder check(tr, lvl);

  const auto x_opt = find_adapted_vector(S, opt.reverse_scan);
  check("adapted vector exists", x_opt.has_value());
  const Vec x = *x_opt;
  lvl.adapted = x;

  const MatSpace line = range_constrained(S, x);
  lvl.dim_range_line = line.dim();
  check("dim S∩Hom(V,Fx) = 1", line.dim() == 1);
  const Elem tr_line = line.basis(0).trace();
  check("trace nonzero on S∩Hom(V,Fx)", tr_line != 0);
  const Mat pi = line.basis(0).scaled(F.inv(tr_line));
  lvl.pi = pi;
  check("pi idempotent of rank 1", pi * pi == pi && pi.rank() == 1 && pi * x == x);

  const auto phi = annihilator({x}, n, F);
  const MatSpace s_prime = S.solve_subspace([&](const Mat& u) {
    const Vec ux = u * x;
    Vec out;
    for (const auto& row : phi) {
      Elem acc = 0;
      for (std::size_t i = 0; i < n; ++i) acc = F.add(acc, F.mul(row[i], ux[i]));
      out.push_back(acc);
    }
    return out;
  });
  lvl.dim_s_prime = s_prime.dim();
  check("dim S' = n(n-1)/2 + 1", s_prime.dim() == tri_dim(n - 1) + 1);

  {
    std::vector<Vec> images;
    for (const auto& b : S.basis()) images.push_back(b * x);
    lvl.rank_sx = rank(Dense::from_rows(images, n), F);
    check("S x = V", lvl.rank_sx == n);
  }

  // V/Fx coordinates: standard vectors except x's leading index, then x.
  const std::size_t lead = leading_index(x);
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == lead) continue;
    Vec e(n, 0);
    e[i] = 1;
    cols.push_back(std::move(e));
  }
  cols.push_back(x);
  const Mat C = Mat::from_columns(F, cols);
  const Mat Cinv = C.inverse_or_throw();
  std::vector<Mat> quotient_gens;
  for (const auto& u : s_prime.basis()) {
    const Mat B = Cinv * u * C;
    Mat top(F, n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = 0; j + 1 < n; ++j) top(i, j) = B(i, j);
    }
    quotient_gens.push_back(top);
  }
  const MatSpace T = MatSpace::span(F, n - 1, quotient_gens);
  lvl.dim_quotient = T.dim();
  check("dim T = n(n-1)/2", T.dim() == tri_dim(n - 1));

  const Flag sub = recover_impl(T, opt, tr);

  // Unique lift into Ker pi: pi(v) = (w . v) x with w^T the row of pi at x's leading index.
  const Vec w = pi.transpose().column(lead);
  std::vector<Vec> basis;
  for (const auto& f : sub.basis()) {
    Vec lifted(n, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!f[i]) continue;
      for (std::size_t r = 0; r < n; ++r) lifted[r] = F.add(lifted[r], F.mul(f[i], cols[i][r]));
    }
    Elem c = 0;
    for (std::size_t r = 0; r < n; ++r) c = F.add(c, F.mul(w[r], lifted[r]));
    for (std::size_t r = 0; r < n; ++r) lifted[r] = F.sub(lifted[r], F.mul(c, x[r]));
    basis.push_back(std::move(lifted));
  }
  basis.push_back(x);
  check("lifted basis is independent", rank(Dense::from_rows(basis, n), F) == n);
  check("lift lies in Ker pi", [&] {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!is_zero(pi * basis[i])) return false;
    }
    return true;
  }());
  lvl.basis = basis;
  Flag flag(F, basis);

  // Hyperplane H = span(e_2..e_n) and the dual bookkeeping.
  const std::vector<Vec> H(basis.begin() + 1, basis.end());
  check("H = span(e2..en) is adapted", is_adapted_hyperplane(S, H));
  const MatSpace vanish = kernel_constrained(S, H);
  check("unique idempotent with kernel H", vanish.dim() == 1 && vanish.basis(0).trace() != 0);
  const Mat pi_prime = vanish.basis(0).scaled(F.inv(vanish.basis(0).trace()));
  lvl.pi_prime = pi_prime;
  check("pi' idempotent", pi_prime * pi_prime == pi_prime);
  const Vec h_functional = hyperplane_functional(H, n, F);
  const MatSpace s_second = S.solve_subspace([&](const Mat& u) {
    Vec out;
    for (const auto& h : H) {
      const Vec uh = u * h;
      Elem acc = 0;
      for (std::size_t i = 0; i < n; ++i) acc = F.add(acc, F.mul(h_functional[i], uh[i]));
      out.push_back(acc);
    }
    return out;
  });
  lvl.dim_s_second = s_second.dim();
  lvl.dim_restricted = s_second.dim() - vanish.dim();
  check("dim S'' = n(n-1)/2 + 1", s_second.dim() == tri_dim(n - 1) + 1);
  check("dim W = n(n-1)/2", lvl.dim_restricted == tri_dim(n - 1));
  {
    const Mat P = flag.matrix();
    const Mat inB = P.inverse_or_throw() * pi_prime * P;
    lvl.alpha = inB(n - 1, 0);
    bool shape = inB(0, 0) == 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if ((i == 0 && j == 0) || (i == n - 1 && j == 0)) continue;
        if (inB(i, j)) shape = false;
      }
    }
    check("pi' = E11 + alpha En1 in the basis", shape);
  }

  check("flag space equals S", flag_space(flag) == S);
  tr.levels.push_back(lvl);
  return flag;
}

}  // namespace detail

/// Direct treatment of n = 2 through S's trace-orthogonal line F v0.
inline std::pair<Flag, RecoveryTrace> base_case_n2(const MatSpace& S, std::uint64_t budget = 1ULL << 20) {
  if (S.n() != 2) throw PreconditionError("base case needs n = 2");
  if (S.dim() != 3) throw PreconditionError("base case needs dim S = 3");
  detail::require_weakly_triangularizable(S, budget);
  RecoveryTrace tr;
  tr.field = S.field().descriptor();
  Flag f = detail::base_case_impl(S, tr);
  return {std::move(f), std::move(tr)};
}

/// The unique trace-1 element of S ∩ Hom(V, F x). Throws TheoremViolation
/// when it does not exist or is not a rank-1 idempotent.
inline Mat find_rank1_idempotent(const MatSpace& S, const Vec& x) {
  const MatSpace line = range_constrained(S, x);
  if (line.dim() != 1) {
    throw TheoremViolation("S ∩ Hom(V,Fx) has dimension " + std::to_string(line.dim()) + ", expected 1", S.to_string());
  }
  const Elem t = line.basis(0).trace();
  if (t == 0) throw TheoremViolation("no trace-1 element with range F x", S.to_string());
  const Mat pi = line.basis(0).scaled(S.field().inv(t));
  if (pi * pi != pi || pi.rank() != 1) throw TheoremViolation("trace-1 element is not a rank-1 idempotent", S.to_string());
  return pi;
}

/// Recovers the flag F with flag_space(F) == S for an optimal weakly
/// triangularizable S. Throws NotWeaklyTriangularizable / PreconditionError
/// on bad input and TheoremViolation if any forced property fails.
inline std::pair<Flag, RecoveryTrace> recover_flag(const MatSpace& S, const RecoverOptions& opt = {}) {
  const std::size_t n = S.n();
  if (S.dim() != detail::tri_dim(n)) {
    throw PreconditionError("dim S = " + std::to_string(S.dim()) + ", expected n(n+1)/2 = " +
                            std::to_string(detail::tri_dim(n)));
  }
  detail::require_weakly_triangularizable(S, opt.precondition_budget);
  RecoveryTrace tr;
  tr.field = S.field().descriptor();
  Flag f = detail::recover_impl(S, opt, tr);
  std::reverse(tr.levels.begin(), tr.levels.end());
  return {std::move(f), std::move(tr)};
}

namespace detail {

// Members of M whose entries outside `free` equal `target` (zero elsewhere).
struct PatternSolution {
  std::optional<Mat> value;
  bool unique = false;
};

inline PatternSolution solve_pattern(const MatSpace& M, const Mat& target, const std::vector<bool>& free) {
  const Field& F = M.field();
  const std::size_t nn = M.n() * M.n();
  std::vector<std::size_t> fixed;
  for (std::size_t p = 0; p < nn; ++p) {
    if (!free[p]) fixed.push_back(p);
  }
  Dense A(fixed.size(), M.dim());
  Vec b(fixed.size());
  for (std::size_t r = 0; r < fixed.size(); ++r) {
    for (std::size_t i = 0; i < M.dim(); ++i) A(r, i) = M.rows()[i][fixed[r]];
    b[r] = target.entries()[fixed[r]];
  }
  PatternSolution out;
  if (M.dim() == 0) {
    if (target.is_zero()) out.value = Mat(F, M.n());
    out.unique = true;
    return out;
  }
  auto sol = rref_solve(A, b, F);
  if (sol) out.value = M.combination(*sol);
  out.unique = kernel_basis(A, F).empty();
  return out;
}

inline std::vector<Mat> upper_units(const Field& F, std::size_t n) {
  std::vector<Mat> u;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) u.push_back(Mat::unit(F, n, i, j));
  }
  return u;
}

inline MatSpace block_image(const MatSpace& K, std::size_t r0, std::size_t c0, std::size_t size) {
  std::vector<Mat> img;
  for (const auto& b : K.basis()) {
    Mat m(K.field(), size);
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) m(i, j) = b(r0 + i, c0 + j);
    }
    img.push_back(m);
  }
  return MatSpace::span(K.field(), size, img);
}

}  // namespace detail

/// Re-expresses S in the basis of F and extracts the maps f, phi, g, psi, h
/// and the scalar alpha, checking the matrix properties along the way.
/// Requires n >= 3 and flag_space(F) == S.
inline RecoveryTrace extract_structure_maps(const MatSpace& S, const Flag& flag) {
  const Field& F = S.field();
  const std::size_t n = S.n();
  if (n < 3) throw PreconditionError("structure maps need n >= 3");
  if (flag.n() != n || flag.field() != F) throw ShapeError("flag does not match space");
  if (flag_space(flag) != S) throw PreconditionError("flag space does not equal S");

  RecoveryTrace tr;
  tr.field = F.descriptor();
  StructureMaps sm;
  sm.n = n;
  const std::size_t a = n - 1, m = n - 2;
  const Mat P = flag.matrix();
  const MatSpace M = conjugate_space(S, P.inverse_or_throw());
  auto check = [&](const std::string& name, bool ok) {
    sm.checks.push_back({name, ok});
    if (!ok) {
      tr.maps = sm;
      throw TheoremViolation("structure check failed: " + name, tr.to_text());
    }
  };
  auto pos = [&](std::size_t i, std::size_t j) { return i * n + j; };
  auto solve = [&](const Mat& target, const std::vector<std::pair<std::size_t, std::size_t>>& free_cells) {
    std::vector<bool> fr(n * n, false);
    for (auto [i, j] : free_cells) fr[pos(i, j)] = true;
    return detail::solve_pattern(M, target, fr);
  };

  check("contains E_nn", M.contains(Mat::unit(F, n, a, a)));

  {
    const MatSpace K = M.solve_subspace([&](const Mat& u) { return u.column(a); });
    const MatSpace img = detail::block_image(K, 0, 0, n - 1);
    const MatSpace tri = MatSpace::span(F, n - 1, detail::upper_units(F, n - 1));
    check("last-column-zero members map bijectively onto T_{n-1}", img.dim() == K.dim() && img == tri);
  }
  {
    std::vector<Vec> lastcols;
    for (const auto& b : M.basis()) lastcols.push_back(b.column(a));
    check("every last column occurs", rank(Dense::from_rows(lastcols, n), F) == n);
  }
  {
    Mat target(F, n);
    target(0, 0) = 1;
    auto s = solve(target, {{a, 0}});
    check("contains E11 + alpha En1, unique", s.value.has_value() && s.unique);
    sm.alpha = (*s.value)(a, 0);
  }
  {
    // M' : bottom-right blocks of members stabilising span(e2..en).
    const MatSpace stab = M.solve_subspace([&](const Mat& u) {
      Vec out;
      for (std::size_t j = 1; j < n; ++j) out.push_back(u(0, j));
      return out;
    });
    const MatSpace Mp = detail::block_image(stab, 1, 1, n - 1);
    for (const auto& U : detail::upper_units(F, m)) {
      Mat target(F, n - 1);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) target(i, j) = U(i, j);
      }
      std::vector<bool> fr((n - 1) * (n - 1), false);
      for (std::size_t j = 0; j < m; ++j) fr[m * (n - 1) + j] = true;
      check("M' contains [[U',0],[?,0]]", detail::solve_pattern(Mp, target, fr).value.has_value());
    }
    check("M' contains E_{n-1,n-1}", Mp.contains(Mat::unit(F, n - 1, n - 2, n - 2)));
    std::vector<Vec> lastcols;
    for (const auto& b : Mp.basis()) lastcols.push_back(b.column(n - 2));
    check("M' reaches every last column", rank(Dense::from_rows(lastcols, n - 1), F) == n - 1);
  }
  {
    for (const auto& U : detail::upper_units(F, n - 1)) {
      Mat target(F, n);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) target(i + 1, j + 1) = U(i, j);
      }
      std::vector<std::pair<std::size_t, std::size_t>> fr;
      for (std::size_t i = 1; i < n; ++i) fr.emplace_back(i, 0);
      auto s = solve(target, fr);
      check("unique [[0,0],[?,U]]", s.value.has_value() && s.unique);
    }
    const MatSpace first_row_zero = M.solve_subspace([&](const Mat& u) {
      Vec out;
      for (std::size_t j = 0; j < n; ++j) out.push_back(u(0, j));
      return out;
    });
    bool ok = true;
    for (const auto& b : first_row_zero.basis()) {
      for (std::size_t j = 1; j + 1 < n; ++j) {
        if (b(a, j)) ok = false;
      }
    }
    check("first-row-zero members vanish on the last row's middle", ok);
  }

  sm.f = Dense(1, m);
  sm.phi = Dense(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    Mat target(F, n);
    target(0, 1 + j) = 1;
    std::vector<std::pair<std::size_t, std::size_t>> fr;
    for (std::size_t c = 0; c < a; ++c) fr.emplace_back(a, c);
    auto s = solve(target, fr);
    check("A_L exists and is unique", s.value.has_value() && s.unique);
    sm.f(0, j) = (*s.value)(a, 0);
    for (std::size_t c = 0; c < m; ++c) sm.phi(j, c) = (*s.value)(a, 1 + c);
  }
  sm.g = Dense(1, m);
  sm.psi = Dense(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    Mat target(F, n);
    target(1 + j, a) = 1;
    std::vector<std::pair<std::size_t, std::size_t>> fr;
    for (std::size_t r = 1; r < a; ++r) fr.emplace_back(r, 0);
    fr.emplace_back(a, 0);
    auto s = solve(target, fr);
    check("B_C exists and is unique", s.value.has_value() && s.unique);
    sm.g(0, j) = (*s.value)(a, 0);
    for (std::size_t r = 0; r < m; ++r) sm.psi(r, j) = (*s.value)(1 + r, 0);
  }
  {
    const auto units = detail::upper_units(F, m);
    sm.h = Dense(1, units.size());
    for (std::size_t k = 0; k < units.size(); ++k) {
      Mat target(F, n);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) target(1 + i, 1 + j) = units[k](i, j);
      }
      auto s = solve(target, {{a, 0}});
      check("G_U exists and is unique", s.value.has_value() && s.unique);
      sm.h(0, k) = (*s.value)(a, 0);
    }
  }
  auto zero = [](const Dense& d) {
    for (auto x : d.a) {
      if (x) return false;
    }
    return true;
  };
  check("phi vanishes", zero(sm.phi));
  check("f and g vanish", zero(sm.f) && zero(sm.g));
  check("alpha = 0", sm.alpha == 0);
  check("contains E11", M.contains(Mat::unit(F, n, 0, 0)));
  check("transpose dual contains E_nn", transpose_dual(M).contains(Mat::unit(F, n, a, a)));
  check("psi vanishes", zero(sm.psi));
  check("contains E_1n", M.contains(Mat::unit(F, n, 0, a)));
  check("h vanishes", zero(sm.h));
  check("M equals T_n", M == MatSpace::span(F, n, detail::upper_units(F, n)));
  tr.maps = std::move(sm);
  return tr;
}

}  // namespace wtri
