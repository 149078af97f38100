#include "agd/scalar_expr.hpp"

#include <cassert>

#include "agd/errors.hpp"

namespace agd {

ScalarExpr::ScalarExpr(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  canonicalize();
}

ScalarExpr ScalarExpr::constant(std::size_t nvars, const Rational& c) {
  return from_poly(Polynomial::constant(nvars, c));
}

ScalarExpr ScalarExpr::variable(std::size_t nvars, std::size_t index) {
  return from_poly(Polynomial::variable(nvars, index));
}

ScalarExpr ScalarExpr::from_poly(Polynomial p) {
  const std::size_t n = p.nvars();
  return ScalarExpr(std::move(p), Polynomial::constant(n, Rational(1)));
}

ScalarExpr ScalarExpr::fraction(Polynomial num, Polynomial den) {
  if (den.is_zero())
    throw DivisionByZeroError("division by syntactically zero polynomial");
  return ScalarExpr(std::move(num), std::move(den));
}

void ScalarExpr::canonicalize() {
  assert(num_.nvars() == den_.nvars());
  assert(!den_.is_zero());
  if (num_.is_zero()) {
    den_ = Polynomial::constant(num_.nvars(), Rational(1));
    return;
  }
  Polynomial g = poly_gcd(num_, den_);
  if (!(g.is_constant() && g.constant_value() == 1)) {
    num_ = *num_.divided_exactly_by(g);
    den_ = *den_.divided_exactly_by(g);
  }
  const Rational lc = den_.leading_coefficient();
  if (lc != 1) {
    const Rational inv = Rational(1) / lc;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

bool ScalarExpr::is_one() const {
  return den_.is_constant() && num_.is_constant() && !num_.is_zero() &&
         num_.constant_value() == den_.constant_value();
}

ScalarExpr ScalarExpr::operator-() const { return ScalarExpr(-num_, den_); }

ScalarExpr ScalarExpr::operator+(const ScalarExpr& o) const {
  assert(nvars() == o.nvars());
  return ScalarExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ScalarExpr ScalarExpr::operator-(const ScalarExpr& o) const {
  assert(nvars() == o.nvars());
  return ScalarExpr(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

ScalarExpr ScalarExpr::operator*(const ScalarExpr& o) const {
  assert(nvars() == o.nvars());
  return ScalarExpr(num_ * o.num_, den_ * o.den_);
}

ScalarExpr ScalarExpr::operator/(const ScalarExpr& o) const {
  assert(nvars() == o.nvars());
  if (o.is_zero())
    throw DivisionByZeroError("division by syntactically zero polynomial");
  return ScalarExpr(num_ * o.den_, den_ * o.num_);
}

ScalarExpr ScalarExpr::pow(unsigned n) const {
  ScalarExpr r = ScalarExpr::constant(nvars(), Rational(1));
  ScalarExpr base = *this;
  while (n > 0) {
    if (n & 1u) r = r * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return r;
}

ScalarExpr ScalarExpr::partial(std::size_t var) const {
  if (var >= nvars())
    throw ShapeError("coordinate index out of range in partial derivative");
  // (n/d)' = (n'd - nd') / d^2
  return ScalarExpr(num_.derivative(var) * den_ - num_ * den_.derivative(var),
                    den_ * den_);
}

ScalarExpr ScalarExpr::lifted(std::size_t new_nvars) const {
  return ScalarExpr(num_.lifted(new_nvars), den_.lifted(new_nvars));
}

std::string ScalarExpr::str(const std::vector<std::string>& names) const {
  if (is_polynomial()) return num_.str(names);
  return "(" + num_.str(names) + ")/(" + den_.str(names) + ")";
}

} // namespace agd
