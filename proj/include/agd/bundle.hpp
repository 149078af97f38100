#pragma once

#include <string>
#include <vector>

#include "agd/patch.hpp"
#include "agd/scalar_expr.hpp"

namespace agd {

/// Trivialized vector bundle over a patch: a rank and an ordered global frame.
/// Rank 0 is legal; every section of a rank-0 bundle is the zero section.
class VectorBundle {
public:
  VectorBundle(CoordinatePatch patch, std::vector<std::string> frame_names);

  const CoordinatePatch& patch() const { return patch_; }
  std::size_t rank() const { return frame_.size(); }
  const std::vector<std::string>& frame_names() const { return frame_; }
  const std::string& frame_name(std::size_t a) const { return frame_.at(a); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const VectorBundle& o) const = default;

private:
  CoordinatePatch patch_;
  std::vector<std::string> frame_;
};

/// Section of a bundle written in its global frame.
class Section {
public:
  Section(VectorBundle bundle, std::vector<ScalarExpr> components);
  static Section zero(const VectorBundle& b);
  static Section frame(const VectorBundle& b, std::size_t a);

  const VectorBundle& bundle() const { return bundle_; }
  std::size_t rank() const { return comps_.size(); }
  const ScalarExpr& comp(std::size_t a) const { return comps_.at(a); }
  const std::vector<ScalarExpr>& components() const { return comps_; }
  bool is_zero() const;

  Section operator+(const Section& o) const;
  Section operator-(const Section& o) const;
  Section operator-() const;
  Section scaled(const ScalarExpr& f) const;

  bool operator==(const Section& o) const = default;

  std::string str() const;

private:
  VectorBundle bundle_;
  std::vector<ScalarExpr> comps_;
};

/// Vector field on a patch, as coefficients of the coordinate derivations.
class VectorField {
public:
  VectorField(CoordinatePatch patch, std::vector<ScalarExpr> components);
  static VectorField zero(const CoordinatePatch& p);
  static VectorField coordinate(const CoordinatePatch& p, std::size_t i);

  const CoordinatePatch& patch() const { return patch_; }
  std::size_t dimension() const { return comps_.size(); }
  const ScalarExpr& comp(std::size_t i) const { return comps_.at(i); }
  const std::vector<ScalarExpr>& components() const { return comps_; }
  bool is_zero() const;

  // Derivation action on functions: sum_i X^i d f / d x^i.
  ScalarExpr apply(const ScalarExpr& f) const;

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField scaled(const ScalarExpr& f) const;

  bool operator==(const VectorField& o) const = default;

  std::string str() const;

private:
  CoordinatePatch patch_;
  std::vector<ScalarExpr> comps_;
};

// Commutator of vector fields: [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i.
VectorField vf_bracket(const VectorField& x, const VectorField& y);

/// Vector bundle morphism over the identity of the patch, stored as a
/// target-rank x source-rank matrix: (K mu)^alpha = K^alpha_a mu^a.
class BundleMorphism {
public:
  BundleMorphism(VectorBundle source, VectorBundle target,
                 std::vector<std::vector<ScalarExpr>> matrix);
  static BundleMorphism zero(const VectorBundle& source, const VectorBundle& target);
  static BundleMorphism identity(const VectorBundle& bundle);

  const VectorBundle& source() const { return source_; }
  const VectorBundle& target() const { return target_; }
  const ScalarExpr& entry(std::size_t t, std::size_t s) const {
    return matrix_.at(t).at(s);
  }
  bool is_zero() const;

  Section apply(const Section& mu) const;
  // Column s as a section of the target: the image of the s-th frame element.
  Section column(std::size_t s) const;

  BundleMorphism compose(const BundleMorphism& inner) const; // *this after inner
  BundleMorphism operator+(const BundleMorphism& o) const;
  BundleMorphism operator-(const BundleMorphism& o) const;

  bool operator==(const BundleMorphism& o) const = default;

private:
  VectorBundle source_;
  VectorBundle target_;
  std::vector<std::vector<ScalarExpr>> matrix_;
};

// Pretty-printer shared by sections and fields: sum of coeff*name pieces.
std::string linear_combination_str(const std::vector<ScalarExpr>& comps,
                                   const std::vector<std::string>& basis_names,
                                   const std::vector<std::string>& coord_names);

} // namespace agd
