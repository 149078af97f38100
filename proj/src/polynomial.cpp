#include "agd/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

#include "agd/errors.hpp"

namespace agd {

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  unsigned da = std::accumulate(a.begin(), a.end(), 0u);
  unsigned db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  assert(index < nvars);
  Polynomial p(nvars);
  Exponents e(nvars, 0);
  e[index] = 1;
  p.add_term(e, Rational(1));
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Exponents(nvars_, 0);
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  assert(is_constant());
  return terms_.begin()->second;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  assert(e.size() == nvars_);
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  assert(nvars_ == o.nvars_);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  assert(nvars_ == o.nvars_);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  assert(nvars_ == o.nvars_);
  Polynomial r(nvars_);
  Exponents e(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial r = Polynomial::constant(nvars_, Rational(1));
  Polynomial base = *this;
  while (n > 0) {
    if (n & 1u) r = r * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r(nvars_);
  if (c == 0) return r;
  for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
  return r;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  assert(var < nvars_);
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, c * Rational(e[var]));
  }
  return r;
}

unsigned Polynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0u));
  return d;
}

const Exponents& Polynomial::leading_exponents() const {
  assert(!terms_.empty());
  return terms_.rbegin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
  assert(!terms_.empty());
  return terms_.rbegin()->second;
}

std::optional<Polynomial> Polynomial::divided_exactly_by(const Polynomial& o) const {
  assert(nvars_ == o.nvars_);
  if (o.is_zero()) throw DivisionByZeroError("polynomial division by zero");
  Polynomial r = *this;
  Polynomial q(nvars_);
  const Exponents& eo = o.leading_exponents();
  const Rational& co = o.leading_coefficient();
  while (!r.is_zero()) {
    const Exponents& er = r.leading_exponents();
    Exponents diff(nvars_);
    // The leading monomial of an exact quotient times o must cancel r's
    // leading monomial, so bail out as soon as divisibility fails.
    bool divisible = true;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (er[i] < eo[i]) {
        divisible = false;
        break;
      }
      diff[i] = er[i] - eo[i];
    }
    if (!divisible) return std::nullopt;
    Rational coeff = r.leading_coefficient() / co;
    Polynomial t(nvars_);
    t.add_term(diff, coeff);
    q += t;
    r -= t * o;
  }
  return q;
}

Polynomial Polynomial::lifted(std::size_t new_nvars) const {
  assert(new_nvars >= nvars_);
  Polynomial r(new_nvars);
  for (const auto& [e, c] : terms_) {
    Exponents ext(new_nvars, 0);
    std::copy(e.begin(), e.end(), ext.begin());
    r.terms_.emplace(std::move(ext), c);
  }
  return r;
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  assert(names.size() == nvars_);
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Leading term first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string piece;
    if (mono.empty()) {
      piece = mag.str();
    } else if (mag == 1) {
      piece = mono;
    } else {
      piece = mag.str() + "*" + mono;
    }
    if (first) {
      out << (negative ? "-" : "") << piece;
      first = false;
    } else {
      out << (negative ? " - " : " + ") << piece;
    }
  }
  return out.str();
}

namespace {

// Highest variable index occurring in p, or nullopt for a constant.
std::optional<std::size_t> main_variable(const Polynomial& p) {
  std::optional<std::size_t> v;
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = e.size(); i-- > 0;) {
      if (e[i] > 0) {
        if (!v || i > *v) v = i;
        break;
      }
    }
  }
  return v;
}

// Coefficient of v^deg in p, viewed as a polynomial in v (the coefficient
// polynomial has exponent zero in v).
Polynomial coefficient_in(const Polynomial& p, std::size_t v, unsigned deg) {
  Polynomial r(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[v] != deg) continue;
    Exponents stripped = e;
    stripped[v] = 0;
    r.add_term(stripped, c);
  }
  return r;
}

Polynomial times_var_pow(const Polynomial& p, std::size_t v, unsigned k) {
  if (k == 0) return p;
  Polynomial r(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    Exponents shifted = e;
    shifted[v] += k;
    r.add_term(shifted, c);
  }
  return r;
}

Polynomial monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return p.scaled(Rational(1) / p.leading_coefficient());
}

// Content of p w.r.t. v: gcd of its coefficient polynomials in v.
Polynomial content_in(const Polynomial& p, std::size_t v) {
  Polynomial c(p.nvars());
  unsigned d = p.degree_in(v);
  for (unsigned k = 0; k <= d; ++k) {
    Polynomial coeff = coefficient_in(p, v, k);
    if (coeff.is_zero()) continue;
    c = poly_gcd(c, coeff);
    if (c.is_constant() && !c.is_zero()) break;
  }
  return c;
}

// Pseudo-remainder of a modulo b w.r.t. v; deg_v(b) >= 1.
Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, std::size_t v) {
  const unsigned db = b.degree_in(v);
  const Polynomial lb = coefficient_in(b, v, db);
  while (!a.is_zero()) {
    const unsigned da = a.degree_in(v);
    if (da < db) break;
    const Polynomial la = coefficient_in(a, v, da);
    a = lb * a - times_var_pow(la * b, v, da - db);
  }
  return a;
}

} // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  assert(a.nvars() == b.nvars());
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant())
    return Polynomial::constant(a.nvars(), Rational(1));

  const std::size_t va = *main_variable(a);
  const std::size_t vb = *main_variable(b);
  const std::size_t v = std::max(va, vb);
  // If only one side involves v, the gcd divides the other side's
  // v-coefficients, i.e. its content w.r.t. v.
  if (va != vb) {
    if (va < vb) return poly_gcd(a, content_in(b, v));
    return poly_gcd(content_in(a, v), b);
  }

  const Polynomial ca = content_in(a, v);
  const Polynomial cb = content_in(b, v);
  const Polynomial cg = poly_gcd(ca, cb);
  Polynomial pa = *a.divided_exactly_by(ca);
  Polynomial pb = *b.divided_exactly_by(cb);
  if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);

  // Primitive pseudo-remainder sequence.
  while (true) {
    Polynomial r = pseudo_remainder(pa, pb, v);
    if (r.is_zero()) break;
    pa = pb;
    pb = *r.divided_exactly_by(content_in(r, v));
  }
  return monic(cg * pb);
}

} // namespace agd
