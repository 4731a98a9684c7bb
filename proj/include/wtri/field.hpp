#pragma once
// Finite fields GF(p^k) with elements packed as base-p integers.
//
// An element of GF(p^k) is the integer sum_i c_i p^i where c_0 + c_1 t + ...
// + c_{k-1} t^{k-1} is its representative modulo the defining polynomial.
// Small extension fields get full addition/multiplication tables; prime
// fields use direct modular arithmetic.

#include "wtri/errors.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace wtri {

using Elem = std::uint64_t;

namespace detail {

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % sp == 0) return n == sp;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Dense polynomials over Z/p as coefficient vectors (constant first, trimmed).
// Only used to validate and search defining polynomials; the general
// polynomial type lives in poly.hpp.
namespace zp {

using P = std::vector<std::uint64_t>;

inline void trim(P& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline P sub(P a, const P& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline P mod(P a, const P& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = powmod64(m.back(), p - 2, p);
  while (a.size() >= m.size()) {
    const std::uint64_t c = mulmod64(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod64(c, m[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

inline P mulmod(const P& a, const P& b, const P& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  P r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod64(a[i], b[j], p)) % p;
  }
  return mod(std::move(r), m, p);
}

inline P powmod(P base, std::uint64_t e, const P& m, std::uint64_t p) {
  P r = mod(P{1}, m, p);
  base = mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = mulmod(r, base, m, p);
    base = mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

inline P gcd(P a, P b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    P r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's test: gcd(t^{p^i} - t, m) = 1 for i <= k/2 and m | t^{p^k} - t.
inline bool is_irreducible(const P& m, std::uint64_t p) {
  const std::size_t k = m.size() - 1;
  if (k == 0) return false;
  if (k == 1) return true;
  const P t{0, 1};
  P frob = mod(t, m, p);
  for (std::size_t i = 1; i <= k; ++i) {
    frob = powmod(frob, p, m, p);
    P diff = sub(frob, t, p);
    if (i <= k / 2) {
      P g = gcd(m, diff, p);
      if (g.size() != 1) return false;
    }
    if (i == k && !mod(diff, m, p).empty()) return false;
  }
  return true;
}

}  // namespace zp

struct FieldData {
  std::uint64_t p = 0;
  unsigned k = 1;
  std::uint64_t q = 0;
  std::vector<std::uint64_t> modulus;  // monic, constant first, degree k (empty when k == 1)
  bool exploratory = false;
  std::uint32_t table_q = 0;            // nonzero when tables are populated
  std::vector<std::uint32_t> add_tab;   // q*q
  std::vector<std::uint32_t> mul_tab;   // q*q
  std::vector<std::uint32_t> neg_tab;   // q
  std::vector<std::uint32_t> inv_tab;   // q, inv_tab[0] unused
};

}  // namespace detail

/// Handle to an immutable finite field context. Copies share state.
class Field {
 public:
  static constexpr std::uint64_t kTableLimit = 1024;

  Field() = default;

  /// Builds GF(p^k). `modulus` (constant first, monic, degree k) is required
  /// iff k > 1. Characteristic 2 is refused unless `exploratory` is set.
  static Field make(std::uint64_t p, unsigned k = 1,
                    std::optional<std::vector<std::uint64_t>> modulus = std::nullopt,
                    bool exploratory = false);

  /// GF(p^k) with the first monic irreducible modulus in packed-integer order.
  static Field with_default_modulus(std::uint64_t p, unsigned k, bool exploratory = false);

  /// Parses `GF(p)`, `GF(q)` for a prime power q, `GF(p^k)` or
  /// `GF(p^k; c0,c1,...,ck)`.
  static Field parse(std::string_view text, bool exploratory = false);

  bool valid() const { return static_cast<bool>(d_); }
  std::uint64_t p() const { return d_->p; }
  unsigned k() const { return d_->k; }
  std::uint64_t q() const { return d_->q; }
  bool exploratory() const { return d_->exploratory; }
  bool is_prime_field() const { return d_->k == 1; }
  const std::vector<std::uint64_t>& modulus() const { return d_->modulus; }

  std::string descriptor() const;

  bool operator==(const Field& o) const {
    if (d_ == o.d_) return true;
    if (!d_ || !o.d_) return false;
    return d_->p == o.d_->p && d_->k == o.d_->k && d_->modulus == o.d_->modulus;
  }
  bool operator!=(const Field& o) const { return !(*this == o); }

  bool contains(Elem a) const { return a < d_->q; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t v) const {
    const auto p = static_cast<std::int64_t>(d_->p);
    std::int64_t r = v % p;
    if (r < 0) r += p;
    return static_cast<Elem>(r);
  }

  Elem add(Elem a, Elem b) const {
    const auto& d = *d_;
    if (d.k == 1) {
      Elem s = a + b;
      return s >= d.p ? s - d.p : s;
    }
    if (d.table_q) return d.add_tab[a * d.table_q + b];
    return digitwise(a, b, false);
  }

  Elem neg(Elem a) const {
    const auto& d = *d_;
    if (d.k == 1) return a == 0 ? 0 : d.p - a;
    if (d.table_q) return d.neg_tab[a];
    return digitwise(0, a, true);
  }

  Elem sub(Elem a, Elem b) const {
    const auto& d = *d_;
    if (d.k == 1) return a >= b ? a - b : a + d.p - b;
    return add(a, neg(b));
  }

  Elem mul(Elem a, Elem b) const {
    const auto& d = *d_;
    if (d.k == 1) return detail::mulmod64(a, b, d.p);
    if (d.table_q) return d.mul_tab[a * d.table_q + b];
    return poly_mul(a, b);
  }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  /// Multiplicative inverse; throws on zero.
  Elem inv(Elem a) const {
    if (a == 0) throw FieldError("inverse of zero");
    const auto& d = *d_;
    if (d.table_q) return d.inv_tab[a];
    return pow(a, d.q - 2);
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// The unique b with b^p = a (Frobenius is bijective on a finite field).
  Elem pth_root(Elem a) const { return pow(a, d_->q / d_->p); }

  /// All elements in packed order.
  std::vector<Elem> elements() const {
    std::vector<Elem> v(d_->q);
    for (Elem i = 0; i < d_->q; ++i) v[i] = i;
    return v;
  }

 private:
  explicit Field(std::shared_ptr<const detail::FieldData> d) : d_(std::move(d)) {}

  Elem digitwise(Elem a, Elem b, bool subtract) const {
    const auto p = d_->p;
    Elem r = 0, scale = 1;
    for (unsigned i = 0; i < d_->k; ++i) {
      const Elem x = a % p, y = b % p;
      a /= p;
      b /= p;
      const Elem z = subtract ? (x + p - y) % p : (x + y) % p;
      r += z * scale;
      scale *= p;
    }
    return r;
  }

  Elem poly_mul(Elem a, Elem b) const {
    const auto p = d_->p;
    const unsigned k = d_->k;
    std::vector<std::uint64_t> x(k), y(k);
    for (unsigned i = 0; i < k; ++i) {
      x[i] = a % p;
      a /= p;
      y[i] = b % p;
      b /= p;
    }
    std::vector<std::uint64_t> prod(2 * k - 1, 0);
    for (unsigned i = 0; i < k; ++i) {
      if (!x[i]) continue;
      for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + detail::mulmod64(x[i], y[j], p)) % p;
    }
    auto red = detail::zp::mod(std::move(prod), d_->modulus, p);
    Elem r = 0, scale = 1;
    for (std::size_t i = 0; i < red.size(); ++i) {
      r += red[i] * scale;
      scale *= p;
    }
    return r;
  }

  std::shared_ptr<const detail::FieldData> d_;
};

inline Field Field::make(std::uint64_t p, unsigned k, std::optional<std::vector<std::uint64_t>> modulus,
                         bool exploratory) {
  if (!detail::is_prime_u64(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  if (p == 2 && !exploratory) throw FieldError("characteristic 2 requires the exploratory flag");
  if (p >= (1ULL << 62)) throw FieldError("characteristic too large");
  if (k < 1) throw FieldError("extension degree must be at least 1");
  auto d = std::make_shared<detail::FieldData>();
  d->p = p;
  d->k = k;
  d->exploratory = (p == 2);
  unsigned __int128 q = 1;
  for (unsigned i = 0; i < k; ++i) {
    q *= p;
    if (q > (static_cast<unsigned __int128>(1) << 62)) throw FieldError("field cardinality exceeds a machine word");
  }
  d->q = static_cast<std::uint64_t>(q);
  if (k == 1) {
    if (modulus && !modulus->empty()) throw FieldError("a prime field takes no modulus");
  } else {
    if (!modulus) throw FieldError("extension degree > 1 requires a modulus");
    auto m = *modulus;
    for (auto c : m) {
      if (c >= p) throw FieldError("modulus coefficient out of range");
    }
    detail::zp::trim(m);
    if (m.size() != k + 1) throw FieldError("modulus degree must equal the extension degree");
    if (m.back() != 1) throw FieldError("modulus must be monic");
    if (!detail::zp::is_irreducible(m, p)) throw FieldError("modulus is reducible");
    d->modulus = std::move(m);
  }
  Field f(d);
  if (k > 1 && d->q <= kTableLimit) {
    const auto qq = static_cast<std::uint32_t>(d->q);
    d->add_tab.resize(std::size_t(qq) * qq);
    d->mul_tab.resize(std::size_t(qq) * qq);
    d->neg_tab.resize(qq);
    d->inv_tab.assign(qq, 0);
    for (std::uint32_t a = 0; a < qq; ++a) {
      d->neg_tab[a] = static_cast<std::uint32_t>(f.digitwise(0, a, true));
      for (std::uint32_t b = 0; b < qq; ++b) {
        d->add_tab[std::size_t(a) * qq + b] = static_cast<std::uint32_t>(f.digitwise(a, b, false));
        const auto m = static_cast<std::uint32_t>(f.poly_mul(a, b));
        d->mul_tab[std::size_t(a) * qq + b] = m;
        if (m == 1) d->inv_tab[a] = b;
      }
    }
    d->table_q = qq;
  }
  return f;
}

inline Field Field::with_default_modulus(std::uint64_t p, unsigned k, bool exploratory) {
  if (k == 1) return make(p, 1, std::nullopt, exploratory);
  if (!detail::is_prime_u64(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  // Scan monic polynomials of degree k by the packed value of the lower coefficients.
  std::uint64_t count = 1;
  for (unsigned i = 0; i < k; ++i) count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<std::uint64_t> m(k + 1, 0);
    std::uint64_t c = code;
    for (unsigned i = 0; i < k; ++i) {
      m[i] = c % p;
      c /= p;
    }
    m[k] = 1;
    if (m[0] == 0) continue;
    if (detail::zp::is_irreducible(m, p)) return make(p, k, m, exploratory);
  }
  throw FieldError("no irreducible polynomial found");
}

inline std::string Field::descriptor() const {
  std::ostringstream os;
  if (d_->k == 1) {
    os << "GF(" << d_->p << ")";
  } else {
    os << "GF(" << d_->p << "^" << d_->k << ";";
    for (std::size_t i = 0; i < d_->modulus.size(); ++i) os << (i ? "," : " ") << d_->modulus[i];
    os << ")";
  }
  return os.str();
}

namespace detail {

inline std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  s = strip(s);
  if (s.empty()) throw ParseError("empty " + std::string(what));
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("invalid " + std::string(what) + " '" + std::string(s) + "'");
    if (v > (~0ULL - 9) / 10) throw ParseError(std::string(what) + " overflows");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace detail

inline Field Field::parse(std::string_view text, bool exploratory) {
  auto s = detail::strip(text);
  if (s.size() < 5 || s.substr(0, 3) != "GF(" || s.back() != ')') {
    throw ParseError("field descriptor must look like GF(p) or GF(p^k; c0,...,ck): '" + std::string(text) + "'");
  }
  s = s.substr(3, s.size() - 4);
  std::string_view head = s, tail;
  bool has_modulus = false;
  if (auto semi = s.find(';'); semi != std::string_view::npos) {
    head = s.substr(0, semi);
    tail = s.substr(semi + 1);
    has_modulus = true;
  }
  std::uint64_t p = 0;
  unsigned k = 1;
  if (auto caret = head.find('^'); caret != std::string_view::npos) {
    p = detail::parse_u64(head.substr(0, caret), "characteristic");
    k = static_cast<unsigned>(detail::parse_u64(head.substr(caret + 1), "extension degree"));
  } else {
    const auto q = detail::parse_u64(head, "field size");
    if (has_modulus) throw ParseError("a modulus requires the GF(p^k; ...) form");
    if (detail::is_prime_u64(q)) return make(q, 1, std::nullopt, exploratory);
    // prime power q = p^k
    for (std::uint64_t cand = 2; cand * cand <= q; ++cand) {
      if (q % cand) continue;
      std::uint64_t r = q;
      unsigned e = 0;
      while (r % cand == 0) {
        r /= cand;
        ++e;
      }
      if (r != 1) break;
      return with_default_modulus(cand, e, exploratory);
    }
    throw FieldError(std::to_string(q) + " is not a prime power");
  }
  if (!has_modulus) return with_default_modulus(p, k, exploratory);
  std::vector<std::uint64_t> m;
  std::size_t pos = 0;
  while (pos <= tail.size()) {
    auto comma = tail.find(',', pos);
    if (comma == std::string_view::npos) comma = tail.size();
    m.push_back(detail::parse_u64(tail.substr(pos, comma - pos), "modulus coefficient"));
    pos = comma + 1;
  }
  return make(p, k, m, exploratory);
}

}  // namespace wtri
