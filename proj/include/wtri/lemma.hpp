#pragma once
// Brute-force checks of the split-pencil divisibility lemma: if p - λq
// splits for every λ (p monic of degree d, q monic of degree d-1, |F| > 2)
// then q divides p. Over GF(2) the statement fails for odd d.

#include "wtri/poly.hpp"
#include "wtri/space.hpp"

#include <thread>
#include <tuple>

namespace wtri {

namespace detail {

inline void require_pencil_shape(const Poly& p, const Poly& q) {
  if (p.field() != q.field()) throw FieldError("pencil polynomials live over different fields");
  if (!p.is_monic() || !q.is_monic()) throw PreconditionError("pencil polynomials must be monic");
  if (p.degree() < 1 || q.degree() != p.degree() - 1) throw PreconditionError("pencil needs deg q = deg p - 1 >= 0");
}

// Monic polynomial of degree d whose lower coefficients are the base-q digits of idx (c0 least significant).
inline Poly monic_from_index(const Field& F, std::size_t d, std::uint64_t idx) {
  std::vector<Elem> c(d + 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    c[i] = idx % F.q();
    idx /= F.q();
  }
  c[d] = 1;
  return Poly(F, std::move(c));
}

}  // namespace detail

/// p - λq splits over F for every λ in F.
inline bool pencil_splits_all(const Poly& p, const Poly& q) {
  detail::require_pencil_shape(p, q);
  const Field& F = p.field();
  for (Elem lam : F.elements()) {
    if (!splits_over(p - q.scaled(lam))) return false;
  }
  return true;
}

struct LemmaReport {
  std::string field;
  std::size_t degree = 0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t hypothesis_pairs = 0;
  std::vector<std::pair<Poly, Poly>> violations;
};

/// Exhaustive sweep over monic p (degree d) and monic q (degree d-1).
/// Shards split the leading free coefficient of p.
inline LemmaReport verify_pencil_lemma(const Field& F, std::size_t d, unsigned threads = 1,
                                  std::uint64_t budget = kDefaultSweepBudget) {
  if (F.q() <= 2) throw PreconditionError("the lemma needs |F| > 2");
  if (d < 1) throw PreconditionError("degree must be at least 1");
  const std::uint64_t total = checked_pow(F.q(), 2 * d - 1);
  if (total > budget) throw BudgetExceeded("lemma sweep of " + std::to_string(total) + " pairs exceeds budget");

  const std::uint64_t np = checked_pow(F.q(), d), nq = checked_pow(F.q(), d - 1);
  const std::uint64_t top = F.q(), per_top = np / top;  // p index = low + top_coeff * per_top
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(top)));
  std::vector<LemmaReport> parts(workers);
  auto run = [&](unsigned w) {
    LemmaReport& r = parts[w];
    // cache the pencil-independent q list
    std::vector<Poly> qs;
    for (std::uint64_t j = 0; j < nq; ++j) qs.push_back(detail::monic_from_index(F, d - 1, j));
    for (std::uint64_t t = w; t < top; t += workers) {
      for (std::uint64_t low = 0; low < per_top; ++low) {
        const Poly p = detail::monic_from_index(F, d, t * per_top + low);
        for (const auto& q : qs) {
          ++r.pairs_checked;
          if (!pencil_splits_all(p, q)) continue;
          ++r.hypothesis_pairs;
          if (!q.divides(p)) r.violations.emplace_back(p, q);
        }
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  LemmaReport out;
  out.field = F.descriptor();
  out.degree = d;
  for (auto& r : parts) {
    out.pairs_checked += r.pairs_checked;
    out.hypothesis_pairs += r.hypothesis_pairs;
    out.violations.insert(out.violations.end(), r.violations.begin(), r.violations.end());
  }
  std::sort(out.violations.begin(), out.violations.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.coeffs(), a.second.coeffs()) < std::tie(b.first.coeffs(), b.second.coeffs());
  });
  return out;
}

struct CounterexampleReport {
  std::size_t degree = 0;
  Poly p, q;
  bool hypothesis_holds = false;
  bool q_divides_p = true;
  bool confirmed() const { return hypothesis_holds && !q_divides_p; }
};

/// p = t^d, q = t^d - (t-1)^d over GF(2), d odd >= 3.
inline CounterexampleReport f2_counterexample(std::size_t d) {
  if (d < 3) throw PreconditionError("degree must be at least 3");
  if (d % 2 == 0) throw PreconditionError("even degree is not a counterexample claim");
  const Field F = Field::make(2, 1, std::nullopt, true);
  const Poly t = Poly::x(F);
  const Poly tm1 = t - Poly::constant(F, 1);
  Poly pw = Poly::constant(F, 1);
  for (std::size_t i = 0; i < d; ++i) pw = pw * tm1;
  CounterexampleReport r;
  r.degree = d;
  r.p = Poly::monomial(F, 1, d);
  r.q = r.p - pw;
  r.hypothesis_holds = pencil_splits_all(r.p, r.q);
  r.q_divides_p = r.q.divides(r.p);
  return r;
}

}  // namespace wtri
