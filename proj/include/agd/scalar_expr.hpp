#pragma once

#include <string>
#include <vector>

#include "agd/polynomial.hpp"

namespace agd {

/// Exact rational function of the patch coordinates; the coefficient type of
/// every tensor in the workbench. Values are kept canonical: numerator and
/// denominator coprime, denominator monic under grlex (leading coefficient 1,
/// hence positive). Zero is 0/1. Two values are equal iff their canonical
/// numerators and denominators are identical, which makes is_zero a decision,
/// not a tolerance.
class ScalarExpr {
public:
  explicit ScalarExpr(std::size_t nvars)
      : num_(nvars), den_(Polynomial::constant(nvars, Rational(1))) {}

  static ScalarExpr constant(std::size_t nvars, const Rational& c);
  static ScalarExpr variable(std::size_t nvars, std::size_t index);
  static ScalarExpr from_poly(Polynomial p);
  // Throws DivisionByZeroError when den is the zero polynomial.
  static ScalarExpr fraction(Polynomial num, Polynomial den);

  std::size_t nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_polynomial() const { return den_.is_constant(); }
  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  ScalarExpr operator-() const;
  ScalarExpr operator+(const ScalarExpr& o) const;
  ScalarExpr operator-(const ScalarExpr& o) const;
  ScalarExpr operator*(const ScalarExpr& o) const;
  // Throws DivisionByZeroError when o is zero.
  ScalarExpr operator/(const ScalarExpr& o) const;
  ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
  ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }

  ScalarExpr pow(unsigned n) const;

  // Exact quotient-rule derivative in the given coordinate direction.
  ScalarExpr partial(std::size_t var) const;

  ScalarExpr lifted(std::size_t new_nvars) const;

  bool operator==(const ScalarExpr& o) const = default;

  // Rendering that parses back to the same canonical value.
  std::string str(const std::vector<std::string>& names) const;

private:
  ScalarExpr(Polynomial num, Polynomial den);
  void canonicalize();

  Polynomial num_;
  Polynomial den_;
};

} // namespace agd
