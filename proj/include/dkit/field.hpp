#pragma once

#include <boost/container/small_vector.hpp>

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dkit/rational.hpp"

namespace dkit {

/// Dense univariate polynomial over Q, coefficients from degree 0 upward.
/// Canonical form has no trailing zero coefficients (the zero polynomial is
/// the empty vector).
using Poly = std::vector<Rational>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  poly_trim(r);
  return r;
}

inline Poly poly_scale(const Poly& a, const Rational& c) {
  if (c == 0) return {};
  Poly r = a;
  for (auto& x : r) x *= c;
  return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_scale(b, rational(-1))); }

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  poly_trim(r);
  return r;
}

/// Euclidean division a = q*b + r with deg r < deg b. Requires b != 0.
inline std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  require(!b.empty(), errc::zero_division, "polynomial division by zero");
  Poly rem = a, quot;
  const int db = poly_deg(b);
  if (poly_deg(a) >= db) quot.assign(a.size() - b.size() + 1, Rational(0));
  while (poly_deg(rem) >= db) {
    const int shift = poly_deg(rem) - db;
    Rational c = rem.back() / b.back();
    quot[shift] = c;
    for (int i = 0; i <= db; ++i) rem[shift + i] -= c * b[i];
    poly_trim(rem);
  }
  poly_trim(quot);
  return {quot, rem};
}

inline Poly poly_derivative(const Poly& p) {
  Poly r;
  for (size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * Rational(static_cast<long>(i)));
  poly_trim(r);
  return r;
}

inline Poly poly_monic(Poly p) {
  poly_trim(p);
  if (p.empty()) return p;
  Rational lc = p.back();
  for (auto& c : p) c /= lc;
  return p;
}

inline Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

/// Extended gcd: returns (g, u, v) monic with u*a + v*b = g.
inline std::tuple<Poly, Poly, Poly> poly_ext_gcd(Poly a, Poly b) {
  Poly u0{Rational(1)}, v0{}, u1{}, v1{Rational(1)};
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    auto [q, r] = poly_divmod(a, b);
    Poly u2 = poly_sub(u0, poly_mul(q, u1));
    Poly v2 = poly_sub(v0, poly_mul(q, v1));
    a = std::move(b);
    b = std::move(r);
    u0 = std::move(u1);
    u1 = std::move(u2);
    v0 = std::move(v1);
    v1 = std::move(v2);
  }
  if (a.empty()) return {a, u0, v0};
  Rational lc = a.back();
  for (auto& c : a) c /= lc;
  for (auto& c : u0) c /= lc;
  for (auto& c : v0) c /= lc;
  return {a, u0, v0};
}

// ---------------------------------------------------------------------------

enum class FieldKind { rationals, quotient };

struct FieldSpecData {
  FieldKind kind = FieldKind::rationals;
  Poly modulus;  // monic, deg >= 1; empty for rationals
  bool separable = true;
  int degree = 1;  // coefficient length of elements
  // x^k mod f for k in [degree, 2*degree-2], used by element multiplication.
  std::vector<Poly> reduction_table;
};

/// A base field: Q itself or a quotient Q[x]/(f) with f monic. Specs are
/// interned so that equality is pointer equality and elements can carry a
/// stable raw pointer.
class FieldSpec {
 public:
  FieldSpec() : data_(rationals().data_) {}

  static FieldSpec rationals() {
    static FieldSpecData q{FieldKind::rationals, {}, true, 1, {}};
    return FieldSpec(&q);
  }

  static FieldSpec quotient(Poly modulus) {
    poly_trim(modulus);
    require(poly_deg(modulus) >= 1, errc::validation_failed, "quotient modulus must have degree >= 1");
    require(modulus.back() == 1, errc::validation_failed, "quotient modulus must be monic");
    static std::mutex mu;
    static std::vector<std::unique_ptr<FieldSpecData>> registry;
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& d : registry)
      if (d->modulus == modulus) return FieldSpec(d.get());
    auto d = std::make_unique<FieldSpecData>();
    d->kind = FieldKind::quotient;
    d->modulus = modulus;
    d->degree = poly_deg(modulus);
    Poly g = poly_gcd(modulus, poly_derivative(modulus));
    d->separable = poly_deg(g) == 0;
    // x^k mod f for k = degree .. 2*degree-2, consumed by element multiplication
    Poly xk(static_cast<size_t>(d->degree) + 1, Rational(0));
    xk.back() = 1;
    for (int k = d->degree; k <= 2 * d->degree - 2; ++k) {
      d->reduction_table.push_back(poly_divmod(xk, modulus).second);
      xk.insert(xk.begin(), Rational(0));
    }
    registry.push_back(std::move(d));
    return FieldSpec(registry.back().get());
  }

  FieldKind kind() const { return data_->kind; }
  bool is_rationals() const { return data_->kind == FieldKind::rationals; }
  int degree() const { return data_->degree; }
  bool separable() const { return data_->separable; }
  const Poly& modulus() const { return data_->modulus; }
  const FieldSpecData* raw() const { return data_; }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.data_ == b.data_; }
  friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return a.data_ != b.data_; }

  std::string describe() const {
    if (is_rationals()) return "Q";
    std::string s = "Q[x]/(";
    for (int i = poly_deg(modulus()); i >= 0; --i) {
      const Rational& c = modulus()[i];
      if (c == 0) continue;
      if (i != poly_deg(modulus()) && sgn(c) >= 0) s += "+";
      if (i == 0 || c != 1) s += format_rational(c);
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s + ")";
  }

 private:
  friend class FieldElement;
  explicit FieldSpec(const FieldSpecData* d) : data_(d) {}

  const FieldSpecData* data_;
};

/// Cyclotomic base fields used by the graded machinery. m = 1, 2 live in Q;
/// m = 3, 4, 6 are the degree-2 cyclotomic quotients.
inline FieldSpec cyclotomic_field(int m) {
  switch (m) {
    case 1:
    case 2:
      return FieldSpec::rationals();
    case 3:
      return FieldSpec::quotient({rational(1), rational(1), rational(1)});  // x^2+x+1
    case 4:
      return FieldSpec::quotient({rational(1), rational(0), rational(1)});  // x^2+1
    case 6:
      return FieldSpec::quotient({rational(1), rational(-1), rational(1)});  // x^2-x+1
    default:
      fail(errc::missing_root_of_unity, "no shipped cyclotomic field for m=" + std::to_string(m));
  }
}

// ---------------------------------------------------------------------------

/// Element of the base field, stored as the canonical representative
/// polynomial of degree < deg(f) (a single rational for Q).
class FieldElement {
 public:
  using Coeffs = boost::container::small_vector<Rational, 2>;

  FieldElement() : spec_(FieldSpec::rationals().raw()), c_(1, Rational(0)) {}

  explicit FieldElement(FieldSpec spec) : spec_(spec.raw()), c_(spec.degree(), Rational(0)) {}

  FieldElement(FieldSpec spec, Rational scalar) : FieldElement(spec) { c_[0] = std::move(scalar); }

  static FieldElement from_coeffs(FieldSpec spec, std::vector<Rational> coeffs) {
    require(static_cast<int>(coeffs.size()) <= spec.degree(), errc::validation_failed,
            "coefficient list longer than field degree");
    FieldElement e(spec);
    for (size_t i = 0; i < coeffs.size(); ++i) e.c_[i] = std::move(coeffs[i]);
    return e;
  }

  FieldSpec spec() const { return FieldSpec(spec_); }
  const FieldSpecData* raw_spec() const { return spec_; }

  int size() const { return static_cast<int>(c_.size()); }
  const Rational& coeff(int i) const { return c_[static_cast<size_t>(i)]; }
  Rational& coeff(int i) { return c_[static_cast<size_t>(i)]; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }

  bool is_one() const {
    if (c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  /// The rational part; errors if the element has a nonzero x-component.
  const Rational& as_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
      require(c_[i] == 0, errc::validation_failed, "element is not rational");
    return c_[0];
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    return a.c_ == b.c_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  FieldElement& operator+=(const FieldElement& o) {
    check_same(*this, o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  FieldElement& operator-=(const FieldElement& o) {
    check_same(*this, o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator-(FieldElement a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    FieldElement r;
    r.spec_ = a.spec_;
    if (a.c_.size() == 1) {
      r.c_.resize(1);
      r.c_[0] = a.c_[0] * b.c_[0];
      return r;
    }
    const int d = static_cast<int>(a.c_.size());
    Coeffs prod(static_cast<size_t>(2 * d - 1), Rational(0));
    for (int i = 0; i < d; ++i) {
      if (a.c_[static_cast<size_t>(i)] == 0) continue;
      for (int j = 0; j < d; ++j) prod[static_cast<size_t>(i + j)] += a.c_[static_cast<size_t>(i)] * b.c_[static_cast<size_t>(j)];
    }
    r.c_.assign(static_cast<size_t>(d), Rational(0));
    for (int i = 0; i < d; ++i) r.c_[static_cast<size_t>(i)] = prod[static_cast<size_t>(i)];
    for (int k = d; k <= 2 * d - 2; ++k) {
      const Rational& hi = prod[static_cast<size_t>(k)];
      if (hi == 0) continue;
      const Poly& red = a.spec_->reduction_table[static_cast<size_t>(k - d)];
      for (size_t i = 0; i < red.size(); ++i) r.c_[i] += hi * red[i];
    }
    return r;
  }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  FieldElement& scale(const Rational& c) {
    for (auto& x : c_) x *= c;
    return *this;
  }

  /// Multiplicative inverse via extended gcd with the modulus. ZeroDivision
  /// on zero; NotInvertible when gcd(rep, f) != 1 (reducible modulus), which
  /// signals the quotient ring is not a field at this element.
  FieldElement inverse() const {
    require(!is_zero(), errc::zero_division, "inverse of zero");
    FieldElement r;
    r.spec_ = spec_;
    if (c_.size() == 1) {
      r.c_.resize(1);
      r.c_[0] = 1 / c_[0];
      return r;
    }
    Poly rep(c_.begin(), c_.end());
    poly_trim(rep);
    auto [g, u, v] = poly_ext_gcd(rep, spec_->modulus);
    (void)v;
    require(poly_deg(g) == 0, errc::not_invertible,
            "element shares a factor with the modulus; quotient ring is not a field here");
    r.c_.assign(c_.size(), Rational(0));
    for (size_t i = 0; i < u.size() && i < r.c_.size(); ++i) r.c_[i] = u[i];
    return r;
  }

  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

  FieldElement pow(long e) const {
    FieldElement base = *this, acc = one_like(*this);
    require(e >= 0 || !is_zero(), errc::zero_division, "0^negative");
    if (e < 0) {
      base = inverse();
      e = -e;
    }
    while (e > 0) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  static FieldElement one_like(const FieldElement& a) {
    FieldElement r;
    r.spec_ = a.spec_;
    r.c_.assign(a.c_.size(), Rational(0));
    r.c_[0] = 1;
    return r;
  }

  std::vector<Rational> coeff_vector() const { return std::vector<Rational>(c_.begin(), c_.end()); }

 private:
  static void check_same(const FieldElement& a, const FieldElement& b) {
    require(a.spec_ == b.spec_, errc::field_mismatch, "operands live in different fields");
  }

  const FieldSpecData* spec_;
  Coeffs c_;
};

inline FieldElement fe(FieldSpec spec, long num, long den = 1) {
  return FieldElement(spec, rational(num, den));
}

/// x mod f as an element (the canonical generator of a quotient field).
inline FieldElement field_generator(FieldSpec spec) {
  require(spec.kind() == FieldKind::quotient, errc::validation_failed, "Q has no generator element");
  FieldElement e(spec);
  e.coeff(1) = 1;
  return e;
}

/// A primitive m-th root of unity in the given field, or MissingRootOfUnity.
/// m = 1 and m = 2 need no extension; for cyclotomic quotients the class of x
/// is checked to have exact order m.
inline FieldElement primitive_root_of_unity(FieldSpec spec, int m) {
  require(m >= 1, errc::validation_failed, "order must be positive");
  if (m == 1) return fe(spec, 1);
  if (m == 2) return fe(spec, -1);
  if (spec.kind() == FieldKind::quotient) {
    FieldElement x = field_generator(spec);
    FieldElement one = FieldElement::one_like(x);
    if (x.pow(m) == one) {
      bool primitive = true;
      for (int d = 1; d < m; ++d)
        if (m % d == 0 && x.pow(d) == one) primitive = false;
      if (primitive) return x;
    }
  }
  fail(errc::missing_root_of_unity,
       "field " + spec.describe() + " has no designated primitive root of order " + std::to_string(m));
}

}  // namespace dkit
