#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agd/rational.hpp"

namespace agd {

// Exponent vector of a monomial; size equals the variable count of the
// polynomial it belongs to.
using Exponents = std::vector<unsigned>;

// Graded lexicographic order: compare total degree first, then the exponent
// vectors lexicographically. This is the fixed monomial order behind every
// canonical form in the workbench.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Multivariate polynomial over Q in a fixed number of variables.
/// Stored term map never contains zero coefficients, so equality of values
/// is equality of representations.
class Polynomial {
public:
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Requires is_constant(); returns 0 for the zero polynomial.
  Rational constant_value() const;

  const std::map<Exponents, Rational, GrlexLess>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  // Accumulates c * x^e and drops the term if the result cancels.
  void add_term(const Exponents& e, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial operator*(const Polynomial& o) const;
  Polynomial pow(unsigned n) const;
  Polynomial scaled(const Rational& c) const;
  Polynomial derivative(std::size_t var) const;

  unsigned degree_in(std::size_t var) const;
  unsigned total_degree() const;

  // Leading term under grlex; both require a nonzero polynomial.
  const Exponents& leading_exponents() const;
  const Rational& leading_coefficient() const;

  // Exact polynomial division; nullopt when o does not divide exactly.
  std::optional<Polynomial> divided_exactly_by(const Polynomial& o) const;

  // Same polynomial viewed in a larger variable set (appended variables).
  Polynomial lifted(std::size_t new_nvars) const;

  bool operator==(const Polynomial& o) const = default;

  // Rendering that parses back to the same canonical value.
  std::string str(const std::vector<std::string>& names) const;

private:
  std::size_t nvars_;
  std::map<Exponents, Rational, GrlexLess> terms_;
};

inline Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
inline Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

// Monic gcd under grlex: gcd(0,0) = 0, otherwise the leading coefficient of
// the result is 1. Primitive pseudo-remainder sequences on the highest
// occurring variable, recursing into the coefficients for contents.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

} // namespace agd
