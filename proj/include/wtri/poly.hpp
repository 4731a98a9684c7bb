#pragma once
// Univariate polynomials over a Field, with the split test used throughout.

#include "wtri/field.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace wtri {

/// Dense polynomial, constant term first, no trailing zeros.
class Poly {
 public:
  static constexpr int kZeroDegree = -1;

  Poly() = default;
  explicit Poly(Field f) : f_(std::move(f)) {}
  Poly(Field f, std::vector<Elem> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
    for (auto c : c_) {
      if (!f_.contains(c)) throw FieldError("polynomial coefficient outside the field");
    }
    trim();
  }

  /// Builds from integers reduced into the prime subfield.
  static Poly from_ints(const Field& f, std::initializer_list<std::int64_t> cs) {
    std::vector<Elem> v;
    for (auto c : cs) v.push_back(f.from_int(c));
    return Poly(f, std::move(v));
  }
  static Poly monomial(const Field& f, Elem c, std::size_t deg) {
    std::vector<Elem> v(deg + 1, 0);
    v[deg] = c;
    return Poly(f, std::move(v));
  }
  static Poly constant(const Field& f, Elem c) { return Poly(f, {c}); }
  static Poly x(const Field& f) { return monomial(f, 1, 1); }

  const Field& field() const { return f_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return c_ != o.c_; }

  Elem eval(Elem x) const {
    Elem r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = f_.add(f_.mul(r, x), *it);
    return r;
  }

  Poly operator+(const Poly& o) const {
    std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_.add(coeff(i), o.coeff(i));
    return Poly(f_, std::move(r));
  }
  Poly operator-(const Poly& o) const {
    std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_.sub(coeff(i), o.coeff(i));
    return Poly(f_, std::move(r));
  }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(f_);
    std::vector<Elem> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = f_.add(r[i + j], f_.mul(c_[i], o.c_[j]));
    }
    return Poly(f_, std::move(r));
  }
  Poly scaled(Elem s) const {
    std::vector<Elem> r(c_);
    for (auto& c : r) c = f_.mul(c, s);
    return Poly(f_, std::move(r));
  }

  /// Quotient and remainder; throws on division by zero.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw FieldError("polynomial division by zero");
    if (degree() < d.degree()) return {Poly(f_), *this};
    std::vector<Elem> r(c_);
    std::vector<Elem> quo(c_.size() - d.c_.size() + 1, 0);
    const Elem li = f_.inv(d.lead());
    for (std::size_t i = quo.size(); i-- > 0;) {
      const Elem c = f_.mul(r[i + d.c_.size() - 1], li);
      quo[i] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) r[i + j] = f_.sub(r[i + j], f_.mul(c, d.c_[j]));
    }
    r.resize(d.c_.size() - 1);
    return {Poly(f_, std::move(quo)), Poly(f_, std::move(r))};
  }
  Poly operator%(const Poly& d) const { return divmod(d).second; }
  Poly operator/(const Poly& d) const { return divmod(d).first; }

  bool divides(const Poly& other) const { return (other % *this).is_zero(); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(f_.inv(lead()));
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(f_);
    std::vector<Elem> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = f_.mul(f_.from_int(static_cast<std::int64_t>(i % f_.p())), c_[i]);
    return Poly(f_, std::move(r));
  }

  /// this^e mod m.
  Poly pow_mod(std::uint64_t e, const Poly& m) const {
    Poly r = Poly::constant(f_, 1) % m;
    Poly b = *this % m;
    while (e) {
      if (e & 1) r = (r * b) % m;
      b = (b * b) % m;
      e >>= 1;
    }
    return r;
  }

  /// Constant-first coefficient list, e.g. `[1, 0, 1]` for t^2 + 1.
  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i];
    os << "]";
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  Field f_;
  std::vector<Elem> c_;
};

/// Monic gcd. Throws when both inputs are zero.
inline Poly poly_gcd(Poly a, Poly b) {
  if (a.is_zero() && b.is_zero()) throw PreconditionError("gcd of two zero polynomials");
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Monic product of the distinct irreducible factors of f.
inline Poly radical(const Poly& f) {
  if (f.is_zero()) throw PreconditionError("radical of the zero polynomial");
  const Field& F = f.field();
  if (f.degree() == 0) return Poly::constant(F, 1);
  const Poly df = f.derivative();
  if (df.is_zero()) {
    // f(t) = g(t^p); the p-th root of g's coefficients gives h with h^p = f.
    const auto p = F.p();
    std::vector<Elem> h(static_cast<std::size_t>(f.degree()) / p + 1, 0);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = F.pth_root(f.coeff(i * p));
    return radical(Poly(F, std::move(h)));
  }
  const Poly g = poly_gcd(f, df);
  const Poly w = (f / g).monic();
  if (g.degree() == 0) return w;
  const Poly rg = radical(g);
  // lcm(w, rad(g))
  return ((w * rg) / poly_gcd(w, rg)).monic();
}

/// True iff f is a product of linear factors over its field.
inline bool splits_over(const Poly& f) {
  if (f.is_zero()) throw PreconditionError("split test of the zero polynomial");
  const Poly r = radical(f);
  if (r.degree() <= 1) return true;
  const Poly t = Poly::x(f.field());
  return (t.pow_mod(f.field().q(), r) - t % r).is_zero();
}

inline bool splits_over(const Poly& f, const Field& F) {
  if (f.field() != F) throw ShapeError("polynomial is not over the given field");
  return splits_over(f);
}

namespace detail {

// Distinct roots of a squarefree product of linear factors g (monic).
inline void split_linear(const Poly& g, std::vector<Elem>& out) {
  const Field& F = g.field();
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(F.neg(g.coeff(0)));
    return;
  }
  // Equal-degree splitting with deterministic shifts: gcd(g, (t + a)^((q-1)/2) - 1).
  for (Elem a = 0; a < F.q(); ++a) {
    const Poly shifted = Poly(F, {a, 1});
    const Poly h = shifted.pow_mod((F.q() - 1) / 2, g) - Poly::constant(F, 1);
    if (h.is_zero()) continue;
    const Poly d = poly_gcd(g, h);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_linear(d, out);
      split_linear((g / d).monic(), out);
      return;
    }
  }
  throw FieldError("root splitting failed");
}

}  // namespace detail

/// All roots in the field with multiplicities, ordered by element value.
inline std::vector<std::pair<Elem, unsigned>> roots_with_multiplicity(const Poly& f) {
  if (f.is_zero()) throw PreconditionError("roots of the zero polynomial");
  const Field& F = f.field();
  std::vector<Elem> roots;
  if (f.degree() >= 1) {
    if (F.p() == 2 || F.q() <= 4096) {
      for (Elem a = 0; a < F.q(); ++a) {
        if (f.eval(a) == 0) roots.push_back(a);
      }
    } else {
      const Poly t = Poly::x(F);
      const Poly m = f.monic();
      const Poly g = poly_gcd(m, t.pow_mod(F.q(), m) - t);
      detail::split_linear(g, roots);
      std::sort(roots.begin(), roots.end());
    }
  }
  std::vector<std::pair<Elem, unsigned>> out;
  for (Elem r : roots) {
    const Poly lin(F, {F.neg(r), 1});
    Poly rest = f;
    unsigned mult = 0;
    while (true) {
      auto [qq, rr] = rest.divmod(lin);
      if (!rr.is_zero()) break;
      ++mult;
      rest = std::move(qq);
    }
    out.emplace_back(r, mult);
  }
  return out;
}

inline std::vector<std::pair<Elem, unsigned>> roots_with_multiplicity(const Poly& f, const Field& F) {
  if (f.field() != F) throw ShapeError("polynomial is not over the given field");
  return roots_with_multiplicity(f);
}

}  // namespace wtri
