#pragma once
// Enumeration of k-dimensional subspaces of F^m as RREF bases.
//
// Order: pivot patterns (increasing column tuples) in lexicographic order;
// within a pattern, free entries in odometer order with the first free slot
// (row-major) most significant. Every subspace therefore has a global index
// in [0, grassmann_count), which is what campaign shards partition.

#include "wtri/linalg.hpp"
#include "wtri/space.hpp"

#include <limits>

namespace wtri {

/// Gaussian binomial [m choose k]_q. Throws on overflow.
inline std::uint64_t grassmann_count(std::size_t m, std::size_t k, std::uint64_t q) {
  if (k > m) throw PreconditionError("subspace dimension exceeds ambient dimension");
  unsigned __int128 r = 1;
  auto qpow = [&](std::size_t e) {
    unsigned __int128 x = 1;
    for (std::size_t i = 0; i < e; ++i) {
      x *= q;
      if (x > (static_cast<unsigned __int128>(1) << 100)) throw BudgetExceeded("Gaussian binomial overflows");
    }
    return x;
  };
  for (std::size_t i = 0; i < k; ++i) {
    r = r * (qpow(m - i) - 1);
    r /= (qpow(i + 1) - 1);
    if (r > std::numeric_limits<std::uint64_t>::max()) throw BudgetExceeded("Gaussian binomial overflows");
  }
  return static_cast<std::uint64_t>(r);
}

/// Streams RREF bases of k-dim subspaces of F^m with global indices in [lo, hi).
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(std::size_t m, std::size_t k, Field f) : m_(m), k_(k), f_(std::move(f)) {
    if (k > m) throw PreconditionError("subspace dimension exceeds ambient dimension");
    std::vector<std::size_t> pv(k);
    for (std::size_t i = 0; i < k; ++i) pv[i] = i;
    std::uint64_t cum = 0;
    while (true) {
      Pattern p;
      p.pivots = pv;
      std::vector<bool> is_piv(m, false);
      for (auto c : pv) is_piv[c] = true;
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = pv[r] + 1; c < m; ++c) {
          if (!is_piv[c]) p.slots.emplace_back(r, c);
        }
      }
      p.first = cum;
      p.count = checked_pow(f_.q(), p.slots.size());
      if (p.count == std::numeric_limits<std::uint64_t>::max() || cum + p.count < cum) {
        throw BudgetExceeded("subspace count overflows");
      }
      cum += p.count;
      patterns_.push_back(std::move(p));
      // next combination
      std::size_t i = k;
      while (i > 0 && pv[i - 1] == m - k + (i - 1)) --i;
      if (i == 0) break;
      ++pv[i - 1];
      for (std::size_t j = i; j < k; ++j) pv[j] = pv[j - 1] + 1;
    }
    total_ = cum;
    seek(0);
  }

  std::uint64_t total() const { return total_; }
  std::size_t ambient() const { return m_; }
  std::size_t dim() const { return k_; }
  const Field& field() const { return f_; }

  /// Positions the cursor so the next call to next() yields subspace `index`.
  void seek(std::uint64_t index) {
    next_index_ = index;
    fresh_ = true;
  }

  std::uint64_t index() const { return next_index_; }

  /// Writes the next basis into `rows` (k vectors of length m). Returns false
  /// past the end or once `hi` is reached.
  bool next(std::vector<Vec>& rows, std::uint64_t hi = std::numeric_limits<std::uint64_t>::max()) {
    if (next_index_ >= total_ || next_index_ >= hi) return false;
    if (fresh_) {
      load(next_index_, rows);
      fresh_ = false;
    } else {
      advance(rows);
    }
    ++next_index_;
    return true;
  }

  /// Pivot pattern of the subspace with the given index.
  const std::vector<std::size_t>& pivots_at(std::uint64_t index) const { return patterns_[pattern_of(index)].pivots; }

 private:
  struct Pattern {
    std::vector<std::size_t> pivots;
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    std::uint64_t first = 0;
    std::uint64_t count = 0;
  };

  std::size_t pattern_of(std::uint64_t index) const {
    std::size_t lo = 0, hi = patterns_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (patterns_[mid].first <= index) lo = mid;
      else hi = mid;
    }
    return lo;
  }

  void load(std::uint64_t index, std::vector<Vec>& rows) {
    cur_ = pattern_of(index);
    const auto& p = patterns_[cur_];
    rows.assign(k_, Vec(m_, 0));
    for (std::size_t r = 0; r < k_; ++r) rows[r][p.pivots[r]] = 1;
    digits_.assign(p.slots.size(), 0);
    std::uint64_t local = index - p.first;
    for (std::size_t s = p.slots.size(); s-- > 0;) {
      digits_[s] = local % f_.q();
      local /= f_.q();
      rows[p.slots[s].first][p.slots[s].second] = digits_[s];
    }
  }

  void advance(std::vector<Vec>& rows) {
    const auto& p = patterns_[cur_];
    const std::uint64_t q = f_.q();
    for (std::size_t s = p.slots.size(); s-- > 0;) {
      if (++digits_[s] < q) {
        rows[p.slots[s].first][p.slots[s].second] = digits_[s];
        return;
      }
      digits_[s] = 0;
      rows[p.slots[s].first][p.slots[s].second] = 0;
    }
    // odometer wrapped: move to the next pattern
    load(next_index_, rows);
  }

  std::size_t m_, k_;
  Field f_;
  std::vector<Pattern> patterns_;
  std::uint64_t total_ = 0;
  std::uint64_t next_index_ = 0;
  bool fresh_ = true;
  std::size_t cur_ = 0;
  std::vector<std::uint64_t> digits_;
};

/// Complement coordinates for a quotient F^m / span(C): C is reduced to RREF
/// and the non-pivot positions index the quotient.
struct QuotientFrame {
  std::size_t m = 0;
  std::vector<Vec> constraint_rref;
  std::vector<std::size_t> free_positions;

  QuotientFrame() = default;
  QuotientFrame(const std::vector<Vec>& constraints, std::size_t m, const Field& F) : m(m) {
    constraint_rref = rref_basis(constraints, m, F);
    if (constraint_rref.size() != constraints.size()) throw PreconditionError("constraint vectors are dependent");
    std::vector<bool> piv(m, false);
    for (auto c : pivots_of(constraint_rref)) piv[c] = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (!piv[i]) free_positions.push_back(i);
    }
  }

  std::size_t quotient_dim() const { return free_positions.size(); }

  Vec lift(const Vec& v) const {
    Vec out(m, 0);
    for (std::size_t i = 0; i < free_positions.size(); ++i) out[free_positions[i]] = v[i];
    return out;
  }
};

/// Calls `visit(rows)` with the canonical RREF basis of every k-dim subspace
/// of F^m containing span(must_contain), in enumeration order. Stops early if
/// `visit` returns false.
template <class Visit>
void enumerate_subspaces(std::size_t m, std::size_t k, const Field& F, const std::vector<Vec>& must_contain,
                         Visit&& visit, std::uint64_t budget = kDefaultSweepBudget) {
  QuotientFrame frame(must_contain, m, F);
  const std::size_t c = must_contain.size();
  if (c > k) throw PreconditionError("more constraints than the subspace dimension");
  SubspaceEnumerator en(frame.quotient_dim(), k - c, F);
  if (en.total() > budget) throw BudgetExceeded("subspace enumeration exceeds budget");
  std::vector<Vec> rows;
  while (en.next(rows)) {
    std::vector<Vec> all = frame.constraint_rref;
    for (const auto& r : rows) all.push_back(frame.lift(r));
    if (c == 0) {
      if (!visit(static_cast<const std::vector<Vec>&>(rows))) return;
    } else {
      const auto canon = rref_basis(all, m, F);
      if (!visit(canon)) return;
    }
  }
}

/// All k-dim subspaces as RREF bases.
inline std::vector<std::vector<Vec>> all_subspaces(std::size_t m, std::size_t k, const Field& F,
                                                   std::uint64_t budget = kDefaultSweepBudget) {
  std::vector<std::vector<Vec>> out;
  enumerate_subspaces(m, k, F, {}, [&](const std::vector<Vec>& r) {
    out.push_back(r);
    return true;
  }, budget);
  return out;
}

}  // namespace wtri
