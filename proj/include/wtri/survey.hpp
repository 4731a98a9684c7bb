#pragma once
// Named families of matrix spaces, flag counts, and exhaustive campaigns over
// all subspaces of M_n(F) of a given dimension.
//
// A campaign walks the Grassmannian by global index. Each candidate is tested
// by sweeping its projective points (scalar multiples share splitting) and
// stopping at the first element whose characteristic polynomial does not
// split. When the identity is a constraint, only a complement of F·I is swept
// since M and M + λI split together. Hits are canonicalized and run through
// flag recovery, structure-map extraction and the invariant-chain check.

#include "wtri/recover.hpp"
#include "wtri/subspaces.hpp"

#include <chrono>
#include <fstream>
#include <mutex>
#include <random>

namespace wtri {

// ---------------------------------------------------------------- families

/// P T_n P^-1 (T_n when P is absent).
inline MatSpace gen_triangular(std::size_t n, const Field& F, const std::optional<Mat>& P = std::nullopt) {
  if (!P) return flag_space(Flag::standard(F, n));
  if (P->n() != n || P->field() != F) throw ShapeError("conjugating matrix does not match n and field");
  if (!P->inverse()) throw PreconditionError("conjugating matrix is singular");
  return flag_space(transform(Flag::standard(F, n), *P));
}

inline MatSpace gen_sym(std::size_t n, const Field& F) {
  std::vector<Mat> g;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) g.push_back(i == j ? Mat::unit(F, n, i, i) : Mat::unit(F, n, i, j) + Mat::unit(F, n, j, i));
  }
  return MatSpace::span(F, n, g);
}

inline MatSpace gen_sl(std::size_t n, const Field& F) {
  std::vector<Mat> g;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) g.push_back(Mat::unit(F, n, i, j));
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) g.push_back(Mat::unit(F, n, i, i) - Mat::unit(F, n, n - 1, n - 1));
  return MatSpace::span(F, n, g);
}

/// Block upper-triangular space: diagonal blocks from `spaces`, arbitrary blocks above.
inline MatSpace gen_joint(const std::vector<MatSpace>& spaces) {
  if (spaces.empty()) throw PreconditionError("joint of no spaces");
  const Field F = spaces.front().field();
  std::size_t n = 0;
  std::vector<std::size_t> offset;
  for (const auto& s : spaces) {
    if (s.field() != F) throw ShapeError("joint of spaces over different fields");
    offset.push_back(n);
    n += s.n();
  }
  std::vector<Mat> g;
  for (std::size_t b = 0; b < spaces.size(); ++b) {
    const std::size_t o = offset[b], m = spaces[b].n();
    for (const auto& x : spaces[b].basis()) {
      Mat big(F, n);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) big(o + i, o + j) = x(i, j);
      }
      g.push_back(big);
    }
    for (std::size_t i = o; i < o + m; ++i) {
      for (std::size_t j = o + m; j < n; ++j) g.push_back(Mat::unit(F, n, i, j));
    }
  }
  return MatSpace::span(F, n, g);
}

/// Uniformly random d-dimensional subspace of M_n(F).
inline MatSpace gen_random(std::size_t n, const Field& F, std::size_t d, std::uint64_t seed) {
  if (d > n * n) throw PreconditionError("dimension exceeds n^2");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Elem> coef(0, F.q() - 1);
  std::vector<Vec> rows;
  while (true) {
    MatSpace s = MatSpace::from_vectors(F, n, rows);
    if (s.dim() == d) return s;
    rows = s.rows();
    Vec v(n * n);
    for (auto& x : v) x = coef(rng);
    rows.push_back(std::move(v));
  }
}

/// Uniformly random invertible matrix.
inline Mat random_invertible(std::size_t n, const Field& F, std::mt19937_64& rng) {
  std::uniform_int_distribution<Elem> coef(0, F.q() - 1);
  while (true) {
    Mat P(F, n);
    for (auto& x : P.entries()) x = coef(rng);
    if (P.rank() == n) return P;
  }
}

// ---------------------------------------------------------------- flags

/// prod_{i=1..n} (q^i - 1)/(q - 1).
inline std::uint64_t flag_count_formula(std::size_t n, std::uint64_t q) {
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    r *= grassmann_count(i, 1, q);
    if (r > std::numeric_limits<std::uint64_t>::max()) throw BudgetExceeded("flag count overflows");
  }
  return static_cast<std::uint64_t>(r);
}

/// Visits every complete flag as its chain V_1 ⊂ ... ⊂ V_{n-1} of RREF bases.
template <class Visit>
void enumerate_flags(std::size_t n, const Field& F, Visit&& visit, std::uint64_t budget = kDefaultSweepBudget) {
  std::vector<Subspace> chain;
  std::function<void(const Subspace&)> rec = [&](const Subspace& cur) {
    if (cur.size() + 1 >= n) {
      visit(static_cast<const std::vector<Subspace>&>(chain));
      return;
    }
    enumerate_subspaces(n, cur.size() + 1, F, cur, [&](const Subspace& next) {
      chain.push_back(next);
      rec(next);
      chain.pop_back();
      return true;
    }, budget);
  };
  rec({});
}

/// Number of complete flags of F^n: by direct enumeration for n <= 3,
/// checked against the product formula, and by the formula beyond.
inline std::uint64_t count_flags(std::size_t n, const Field& F) {
  const std::uint64_t formula = flag_count_formula(n, F.q());
  if (n > 3) return formula;
  std::uint64_t counted = 0;
  enumerate_flags(n, F, [&](const std::vector<Subspace>&) { ++counted; });
  if (counted != formula) {
    throw Error("flag enumeration (" + std::to_string(counted) + ") disagrees with the product formula (" +
                std::to_string(formula) + ")");
  }
  return counted;
}

// ---------------------------------------------------------------- split kernel

/// Fast "characteristic polynomial splits" test on raw row-major arrays.
/// Split verdicts of all monic degree-n polynomials are tabulated when q^n is small.
class SplitKernel {
 public:
  static constexpr std::uint64_t kMaxTable = 1ULL << 16;

  SplitKernel(const Field& F, std::size_t n) : F_(F), n_(n), q_(F.q()) {
    small_prime_ = F.is_prime_field() && F.p() < (1ULL << 16) && n <= 3;
    const std::uint64_t size = checked_pow(q_, n);
    if (size <= kMaxTable) {
      table_.resize(size);
      std::vector<Elem> c(n + 1, 0);
      c[n] = 1;
      for (std::uint64_t idx = 0; idx < size; ++idx) {
        std::uint64_t t = idx;
        for (std::size_t i = 0; i < n; ++i) {
          c[i] = t % q_;
          t /= q_;
        }
        table_[idx] = splits_over(Poly(F_, c)) ? 1 : 0;
      }
    }
  }

  bool splits(const Elem* a) const {
    Elem c[4];
    if (small_prime_) {
      c[n_] = 1;
      const std::int64_t p = static_cast<std::int64_t>(F_.p());
      auto md = [p](std::int64_t v) { return static_cast<Elem>(((v % p) + p) % p); };
      auto A = [a](std::size_t i) { return static_cast<std::int64_t>(a[i]); };
      if (n_ == 1) {
        c[0] = md(-A(0));
      } else if (n_ == 2) {
        c[1] = md(-(A(0) + A(3)));
        c[0] = md(A(0) * A(3) - A(1) * A(2));
      } else {
        const std::int64_t tr = A(0) + A(4) + A(8);
        const std::int64_t m2 = A(0) * A(4) - A(1) * A(3) + A(0) * A(8) - A(2) * A(6) + A(4) * A(8) - A(5) * A(7);
        const std::int64_t det = A(0) * (A(4) * A(8) - A(5) * A(7)) - A(1) * (A(3) * A(8) - A(5) * A(6)) +
                                 A(2) * (A(3) * A(7) - A(4) * A(6));
        c[2] = md(-tr);
        c[1] = md(m2);
        c[0] = md(-det);
      }
      return lookup(c);
    }
    const auto cp = charpoly_coeffs(a, n_, F_);
    if (!table_.empty()) return lookup(cp.data());
    return splits_over(Poly(F_, cp));
  }

 private:
  bool lookup(const Elem* c) const {
    if (table_.empty()) return splits_over(Poly(F_, std::vector<Elem>(c, c + n_ + 1)));
    std::uint64_t idx = 0;
    for (std::size_t i = n_; i-- > 0;) idx = idx * q_ + c[i];
    return table_[idx] != 0;
  }

  Field F_;
  std::size_t n_;
  std::uint64_t q_;
  bool small_prime_ = false;
  std::vector<std::uint8_t> table_;
};

namespace detail {

// Sweeps the projective points of span(gens) (k generators of length nn),
// lexicographic with the first coefficient most significant.
class ProjectiveSweep {
 public:
  ProjectiveSweep(const Field& F, std::size_t nn) : F_(F), nn_(nn), q_(F.q()), p_(F.p()), prime_(F.is_prime_field()) {
    acc_.resize(nn);
  }

  bool all_split(const std::vector<Elem>& gens, std::size_t k, const SplitKernel& K) {
    digits_.assign(k, 0);
    for (std::size_t lead = k; lead-- > 0;) {
      std::copy(gens.begin() + static_cast<std::ptrdiff_t>(lead * nn_),
                gens.begin() + static_cast<std::ptrdiff_t>((lead + 1) * nn_), acc_.begin());
      std::fill(digits_.begin(), digits_.end(), 0);
      while (true) {
        if (!K.splits(acc_.data())) return false;
        std::size_t j = k - 1;
        while (j > lead) {
          const Elem old = digits_[j];
          const Elem nw = old + 1 == q_ ? 0 : old + 1;
          digits_[j] = nw;
          add_scaled(gens.data() + j * nn_, prime_ ? 1 : F_.sub(nw, old));
          if (nw != 0) break;
          --j;
        }
        if (j == lead) break;
      }
    }
    return true;
  }

 private:
  void add_scaled(const Elem* g, Elem s) {
    if (prime_) {
      // digits step by +1, and the wrap q-1 -> 0 is also +1 mod p
      for (std::size_t e = 0; e < nn_; ++e) {
        Elem v = acc_[e] + g[e];
        acc_[e] = v >= p_ ? v - p_ : v;
      }
    } else {
      for (std::size_t e = 0; e < nn_; ++e) acc_[e] = F_.add(acc_[e], F_.mul(s, g[e]));
    }
  }

  Field F_;
  std::size_t nn_;
  std::uint64_t q_, p_;
  bool prime_;
  std::vector<Elem> acc_;
  std::vector<Elem> digits_;
};

}  // namespace detail

// ---------------------------------------------------------------- campaigns

struct CampaignSpec {
  enum class Mode { Exhaustive, Random };
  std::size_t n = 2;
  Field field;
  std::size_t dim = 0;  // 0 means n(n+1)/2
  bool contains_identity = false;
  std::vector<Mat> constraints;  // further must-contain matrices
  Mode mode = Mode::Exhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned shards = 1;
  unsigned threads = 1;
  std::uint64_t budget = kDefaultSweepBudget;  // cap on the number of candidates
  std::string journal;
  bool resume = false;

  std::size_t target_dim() const { return dim ? dim : n * (n + 1) / 2; }
  bool optimal() const { return target_dim() == n * (n + 1) / 2; }
};

struct HitRecord {
  std::uint64_t index = 0;
  MatSpace space;
  bool checked = false;  // full verification ran (optimal dimension only)
  std::optional<Flag> flag;
  bool sweep_confirmed = false;
  bool has_identity = false;
  bool adapted_found = false;
  bool flag_space_equal = false;
  bool chain_matches = false;
  bool maps_checked = false;
  bool maps_zero = false;
  std::string alarm;

  bool recovered() const {
    return checked && alarm.empty() && flag && sweep_confirmed && has_identity && adapted_found && flag_space_equal &&
           chain_matches && (!maps_checked || maps_zero);
  }
};

struct ShardStat {
  std::size_t index = 0;
  std::uint64_t lo = 0, hi = 0;
  std::uint64_t total = 0;
  std::uint64_t hits = 0;
  bool resumed = false;
  double seconds = 0;
};

struct CampaignReport {
  std::size_t n = 0;
  std::string field;
  std::size_t dim = 0;
  bool contains_identity = false;
  std::size_t extra_constraints = 0;
  std::string mode;
  std::uint64_t seed = 0;
  std::uint64_t total = 0;
  std::vector<HitRecord> hits;  // ascending candidate index
  std::vector<ShardStat> shards;
  std::optional<std::uint64_t> expected_hits;
  double seconds = 0;

  std::uint64_t non_hits() const { return total - hits.size(); }
  std::size_t alarms() const {
    std::size_t a = 0;
    for (const auto& h : hits) a += h.alarm.empty() ? 0 : 1;
    return a;
  }
  bool all_recovered() const {
    for (const auto& h : hits) {
      if (!h.recovered()) return false;
    }
    return true;
  }

  std::string to_text(bool timing = false, bool with_spaces = false) const;
};

namespace detail {

inline std::string flag_inline(const Flag& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.n(); ++i) {
    os << (i ? "; " : "") << "e" << (i + 1) << " =";
    for (auto x : f.basis()[i]) os << " " << x;
  }
  return os.str();
}

inline std::string journal_header(const CampaignSpec& s) {
  std::ostringstream os;
  os << "# campaign n " << s.n << " field " << s.field.descriptor() << " dim " << s.target_dim() << " identity "
     << (s.contains_identity ? 1 : 0) << " constraints " << s.constraints.size();
  for (const auto& c : s.constraints) {
    os << " [";
    for (std::size_t i = 0; i < c.entries().size(); ++i) os << (i ? " " : "") << c.entries()[i];
    os << "]";
  }
  os << " shards " << s.shards << " mode "
     << (s.mode == CampaignSpec::Mode::Exhaustive ? "exhaustive" : "random " + std::to_string(s.samples) + " " + std::to_string(s.seed));
  return os.str();
}

}  // namespace detail

inline std::string CampaignReport::to_text(bool timing, bool with_spaces) const {
  std::ostringstream os;
  os << "# campaign: " << mode << "\n";
  os << "# n: " << n << "\n";
  os << "# field: " << field << "\n";
  os << "# dim: " << dim << "\n";
  os << "# contains_identity: " << (contains_identity ? "yes" : "no") << "\n";
  os << "# extra_constraints: " << extra_constraints << "\n";
  if (mode != "exhaustive") os << "# seed: " << seed << "\n";
  os << "# shards: " << shards.size() << "\n";
  os << "# total: " << total << "\n";
  os << "# hits: " << hits.size() << "\n";
  os << "# non_hits: " << non_hits() << "\n";
  if (expected_hits) os << "# expected_hits: " << *expected_hits << "\n";
  os << "# all_recovered: " << (all_recovered() ? "yes" : "no") << "\n";
  os << "# alarms: " << alarms() << "\n";
  if (timing) os << "# seconds: " << seconds << "\n";
  if (contains_identity) {
    os << "note: an optimal weakly triangularizable space always contains the identity, so the identity constraint "
          "loses no hits\n";
  }
  for (const auto& s : shards) {
    os << "shard " << s.index << " range " << s.lo << ".." << s.hi << " total " << s.total << " hits " << s.hits
       << (s.resumed ? " resumed" : "");
    if (timing) os << " seconds " << s.seconds;
    os << "\n";
  }
  for (const auto& h : hits) {
    os << "hit " << h.index << ": ";
    if (!h.checked) {
      os << "weakly triangularizable\n";
    } else if (!h.alarm.empty()) {
      os << "ALARM " << h.alarm << "\n";
    } else {
      os << (h.recovered() ? "recovered" : "FAILED");
      if (h.flag) os << "; " << detail::flag_inline(*h.flag);
      if (h.maps_checked) os << "; maps " << (h.maps_zero ? "zero" : "NONZERO");
      os << "\n";
    }
    if (with_spaces) os << h.space.to_string();
  }
  return os.str();
}

/// Full check of one optimal hit: independent exhaustive sweep, identity,
/// adapted vector, flag recovery, structure maps (n >= 3), invariant chain.
inline HitRecord verify_hit(const MatSpace& S, std::uint64_t index = 0) {
  HitRecord h;
  h.index = index;
  h.space = S;
  h.checked = true;
  const std::size_t n = S.n();
  try {
    h.sweep_confirmed = space_weakly_triangularizable(S).certified();
    h.has_identity = S.contains(Mat::identity(S.field(), n));
    h.adapted_found = find_adapted_vector(S).has_value();
    auto [flag, trace] = recover_flag(S);
    h.flag_space_equal = flag_space(flag) == S;
    if (n >= 3) {
      auto maps = extract_structure_maps(S, flag);
      h.maps_checked = true;
      h.maps_zero = maps.maps && maps.maps->ok() && maps.maps->all_maps_zero();
    }
    const auto inv = invariant_subspaces(S);
    h.chain_matches = inv == flag.chain() && is_chain(inv, S.field());
    h.flag = std::move(flag);
  } catch (const TheoremViolation& e) {
    h.alarm = std::string(e.what()) + "\n" + e.trace;
  } catch (const Error& e) {
    h.alarm = e.what();
  }
  return h;
}

namespace detail {

struct JournalShard {
  ShardStat stat;
  std::vector<std::pair<std::uint64_t, MatSpace>> hits;
};

inline std::vector<JournalShard> read_journal(const std::string& path, const std::string& header) {
  std::vector<JournalShard> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return out;
  ++lineno;
  if (line != header) throw PreconditionError("journal " + path + " belongs to a different campaign");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string kw, range_kw, range, total_kw, hits_kw;
    JournalShard js;
    ss >> kw >> js.stat.index >> range_kw >> range >> total_kw >> js.stat.total >> hits_kw >> js.stat.hits;
    const auto dots = range.find("..");
    if (!ss || kw != "shard" || range_kw != "range" || total_kw != "total" || hits_kw != "hits" ||
        dots == std::string::npos) {
      throw ParseError("malformed journal shard line", lineno, 1);
    }
    js.stat.lo = detail::parse_u64(range.substr(0, dots), "range");
    js.stat.hi = detail::parse_u64(range.substr(dots + 2), "range");
    for (std::uint64_t i = 0; i < js.stat.hits; ++i) {
      if (!std::getline(in, line)) throw ParseError("journal truncated inside a shard", lineno, 1);
      ++lineno;
      std::istringstream hs(line);
      std::string hk;
      std::uint64_t idx = 0;
      if (!(hs >> hk >> idx) || hk != "hit") throw ParseError("expected 'hit <index>'", lineno, 1);
      js.hits.emplace_back(idx, read_space(in, false, &lineno));
    }
    js.stat.resumed = true;
    out.push_back(std::move(js));
  }
  return out;
}

}  // namespace detail

/// Runs a campaign. Shards are contiguous index ranges processed by a pool of
/// `threads` workers; the merged report does not depend on either count.
inline CampaignReport run_campaign(const CampaignSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  const Field& F = spec.field;
  const std::size_t n = spec.n, nn = n * n, d = spec.target_dim();
  if (n == 0) throw PreconditionError("n must be positive");

  std::vector<Vec> cons;
  if (spec.contains_identity) cons.push_back(Mat::identity(F, n).entries());
  for (const auto& c : spec.constraints) {
    if (c.n() != n || c.field() != F) throw ShapeError("constraint matrix does not match n and field");
    cons.push_back(c.entries());
  }
  if (cons.size() > d) throw PreconditionError("more constraints than the target dimension");
  const QuotientFrame frame(cons, nn, F);
  SubspaceEnumerator probe(frame.quotient_dim(), d - cons.size(), F);
  const std::uint64_t total_space = probe.total();

  // Candidate list: index ranges (exhaustive) or sorted sample indices.
  std::vector<std::uint64_t> samples;
  std::uint64_t total = total_space;
  if (spec.mode == CampaignSpec::Mode::Random) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, total_space - 1);
    for (std::uint64_t i = 0; i < spec.samples; ++i) samples.push_back(pick(rng));
    std::sort(samples.begin(), samples.end());
    total = samples.size();
  }
  if (total > spec.budget) {
    throw BudgetExceeded("campaign of " + std::to_string(total) + " candidates exceeds budget " +
                         std::to_string(spec.budget));
  }

  const unsigned K = std::max(1u, spec.shards);
  std::vector<ShardStat> stats(K);
  for (unsigned s = 0; s < K; ++s) {
    stats[s].index = s;
    stats[s].lo = total * s / K;
    stats[s].hi = total * (s + 1) / K;
  }
  std::vector<std::vector<std::pair<std::uint64_t, MatSpace>>> shard_hits(K);
  std::vector<bool> done(K, false);

  const std::string header = detail::journal_header(spec);
  std::ofstream journal;
  std::mutex journal_mu;
  if (!spec.journal.empty()) {
    if (spec.resume) {
      for (auto& js : detail::read_journal(spec.journal, header)) {
        if (js.stat.index >= K || js.stat.lo != stats[js.stat.index].lo || js.stat.hi != stats[js.stat.index].hi) {
          throw PreconditionError("journal shard boundaries do not match the campaign");
        }
        stats[js.stat.index] = js.stat;
        shard_hits[js.stat.index] = std::move(js.hits);
        done[js.stat.index] = true;
      }
      const bool fresh = !std::ifstream(spec.journal).good();
      journal.open(spec.journal, std::ios::app);
      if (fresh) journal << header << "\n";
    } else {
      journal.open(spec.journal, std::ios::trunc);
      journal << header << "\n";
    }
    if (!journal) throw Error("cannot open journal " + spec.journal);
    journal.flush();
  }

  const std::size_t extra = spec.constraints.size();
  const SplitKernel kernel(F, n);
  auto run_shard = [&](unsigned s) {
    const auto ts = std::chrono::steady_clock::now();
    ShardStat& st = stats[s];
    auto& found = shard_hits[s];
    SubspaceEnumerator en(frame.quotient_dim(), d - cons.size(), F);
    detail::ProjectiveSweep sweep(F, nn);
    // sweep generators: the constraints (identity left out) then the lifted rows
    const std::size_t skip = spec.contains_identity ? 1 : 0;
    const std::size_t k = cons.size() - skip + (d - cons.size());
    std::vector<Elem> gens(k * nn, 0);
    for (std::size_t c = skip; c < cons.size(); ++c) std::copy(cons[c].begin(), cons[c].end(), gens.begin() + static_cast<std::ptrdiff_t>((c - skip) * nn));
    const std::size_t base = cons.size() - skip;
    std::vector<Vec> rows;
    auto test = [&](std::uint64_t index) {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        Elem* g = gens.data() + (base + r) * nn;
        std::fill(g, g + nn, 0);
        for (std::size_t i = 0; i < frame.free_positions.size(); ++i) g[frame.free_positions[i]] = rows[r][i];
      }
      ++st.total;
      if (k == 0 || sweep.all_split(gens, k, kernel)) {
        std::vector<Vec> all = cons;
        for (const auto& r : rows) all.push_back(frame.lift(r));
        found.emplace_back(index, MatSpace::from_vectors(F, n, all));
      }
    };
    if (spec.mode == CampaignSpec::Mode::Exhaustive) {
      en.seek(st.lo);
      std::uint64_t index = st.lo;
      while (en.next(rows, st.hi)) test(index++);
    } else {
      for (std::uint64_t i = st.lo; i < st.hi; ++i) {
        en.seek(samples[i]);
        en.next(rows);
        test(samples[i]);
      }
    }
    st.hits = found.size();
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - ts).count();
    if (journal.is_open()) {
      std::lock_guard<std::mutex> lock(journal_mu);
      journal << "shard " << s << " range " << st.lo << ".." << st.hi << " total " << st.total << " hits " << st.hits
              << "\n";
      for (const auto& [idx, sp] : found) {
        journal << "hit " << idx << "\n";
        write_space(journal, sp);
      }
      journal.flush();
    }
  };

  std::vector<unsigned> todo;
  for (unsigned s = 0; s < K; ++s) {
    if (!done[s]) todo.push_back(s);
  }
  const unsigned workers = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(todo.size())));
  if (workers <= 1) {
    for (auto s : todo) run_shard(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < todo.size();) run_shard(todo[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  CampaignReport rep;
  rep.n = n;
  rep.field = F.descriptor();
  rep.dim = d;
  rep.contains_identity = spec.contains_identity;
  rep.extra_constraints = extra;
  rep.mode = spec.mode == CampaignSpec::Mode::Exhaustive ? "exhaustive" : "random " + std::to_string(spec.samples);
  rep.seed = spec.seed;
  rep.shards = stats;
  for (const auto& st : stats) rep.total += st.total;
  for (auto& sh : shard_hits) {
    for (auto& [idx, sp] : sh) {
      if (spec.optimal()) {
        rep.hits.push_back(verify_hit(sp, idx));
      } else {
        HitRecord h;
        h.index = idx;
        h.space = sp;
        rep.hits.push_back(std::move(h));
      }
    }
  }
  std::sort(rep.hits.begin(), rep.hits.end(), [](const HitRecord& a, const HitRecord& b) { return a.index < b.index; });
  if (spec.optimal() && spec.mode == CampaignSpec::Mode::Exhaustive && extra == 0) rep.expected_hits = count_flags(n, F);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace wtri
