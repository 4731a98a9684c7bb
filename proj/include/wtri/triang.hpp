#pragma once
// Triangularizability of single matrices and of whole spaces.

#include "wtri/space.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

namespace wtri {

/// True iff M is conjugate to an upper-triangular matrix over its field,
/// i.e. iff its characteristic polynomial splits.
inline bool is_triangularizable(const Mat& M) { return splits_over(char_poly(M)); }

namespace detail {

inline Mat triangularize_rec(const Mat& A) {
  const Field& F = A.field();
  const std::size_t m = A.n();
  if (m <= 1) return Mat::identity(F, m);
  const auto roots = roots_with_multiplicity(char_poly(A));
  if (roots.empty()) throw PreconditionError("matrix is not triangularizable: " + A.to_string());
  const Elem lambda = roots.front().first;
  const Mat shifted = A - Mat::identity(F, m).scaled(lambda);
  const auto ker = kernel_basis(shifted.dense(), F);
  const Vec& v = ker.front();
  // Complete v to a basis with the standard vectors other than v's leading index.
  const std::size_t lead = leading_index(v);
  std::vector<Vec> cols{v};
  for (std::size_t i = 0; i < m; ++i) {
    if (i == lead) continue;
    Vec e(m, 0);
    e[i] = 1;
    cols.push_back(std::move(e));
  }
  const Mat C = Mat::from_columns(F, cols);
  const Mat B = C.inverse_or_throw() * A * C;
  Mat sub(F, m - 1);
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 1; j < m; ++j) sub(i - 1, j - 1) = B(i, j);
  }
  const Mat Q = triangularize_rec(sub);
  Mat D = Mat::identity(F, m);
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 1; j < m; ++j) D(i, j) = Q(i - 1, j - 1);
  }
  return C * D;
}

}  // namespace detail

/// Invertible P with P^-1 M P upper triangular. Throws PreconditionError when
/// M is not triangularizable.
inline Mat triangularize(const Mat& M) {
  if (!is_triangularizable(M)) throw PreconditionError("matrix is not triangularizable: " + M.to_string());
  Mat P = detail::triangularize_rec(M);
#ifdef WTRI_CHECK_POSTCONDITIONS
  if (!(P.inverse_or_throw() * M * P).is_upper_triangular()) {
    throw TheoremViolation("triangularize postcondition failed", M.to_string());
  }
#endif
  return P;
}

struct SweepMode {
  enum class Kind { Exhaustive, Sample };
  Kind kind = Kind::Exhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultSweepBudget;
  unsigned threads = 1;

  static SweepMode exhaustive(std::uint64_t budget = kDefaultSweepBudget, unsigned threads = 1) {
    SweepMode m;
    m.budget = budget;
    m.threads = threads;
    return m;
  }
  static SweepMode sample(std::uint64_t count, std::uint64_t seed) {
    SweepMode m;
    m.kind = Kind::Sample;
    m.samples = count;
    m.seed = seed;
    return m;
  }
};

struct Verdict {
  enum class Kind { True, False, NoCounterexample };
  Kind kind = Kind::True;
  std::optional<Mat> witness;
  std::uint64_t checked = 0;

  bool holds() const { return kind != Kind::False; }
  bool certified() const { return kind == Kind::True; }
};

/// Element-wise triangularizability of S. Exhaustive mode is exact and
/// returns the lexicographically first witness; sample mode can only refute.
inline Verdict space_weakly_triangularizable(const MatSpace& S, const SweepMode& mode = SweepMode::exhaustive()) {
  Verdict v;
  if (mode.kind == SweepMode::Kind::Sample) {
    std::mt19937_64 rng(mode.seed);
    std::uniform_int_distribution<std::uint64_t> coef(0, S.field().q() - 1);
    for (std::uint64_t i = 0; i < mode.samples; ++i) {
      Vec c(S.dim());
      for (auto& x : c) x = coef(rng);
      Mat m = S.combination(c);
      ++v.checked;
      if (!is_triangularizable(m)) {
        v.kind = Verdict::Kind::False;
        v.witness = std::move(m);
        return v;
      }
    }
    v.kind = Verdict::Kind::NoCounterexample;
    return v;
  }
  const std::uint64_t total = S.element_count();
  if (total > mode.budget) {
    throw BudgetExceeded("sweep of " + std::to_string(S.field().q()) + "^" + std::to_string(S.dim()) +
                         " elements exceeds budget " + std::to_string(mode.budget));
  }
  const unsigned workers = std::max(1u, std::min<unsigned>(mode.threads, static_cast<unsigned>(total / 4096 + 1)));
  std::atomic<std::uint64_t> first_bad{total};
  auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (i >= first_bad.load(std::memory_order_relaxed)) return;
      if (!is_triangularizable(S.element_at(i))) {
        std::uint64_t cur = first_bad.load();
        while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  };
  if (workers == 1) {
    scan(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = w * chunk, hi = std::min(total, lo + chunk);
      if (lo < hi) pool.emplace_back(scan, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  const std::uint64_t bad = first_bad.load();
  v.checked = bad < total ? bad + 1 : total;
  if (bad < total) {
    v.kind = Verdict::Kind::False;
    v.witness = S.element_at(bad);
  }
  return v;
}

}  // namespace wtri
