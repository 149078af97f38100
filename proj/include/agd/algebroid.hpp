#pragma once

#include <vector>

#include "agd/bundle.hpp"
#include "agd/report.hpp"

namespace agd {

/// Lie algebroid over a patch, presented by its anchor matrix and the
/// structure functions of the frame: rho(e_a) = rho^i_a d_i and
/// [e_a, e_b] = c^c_ab e_c. Construction only checks shapes; the axioms are
/// certified by verify_algebroid, so defective structures can be loaded and
/// diagnosed.
class LieAlgebroid {
public:
  LieAlgebroid(VectorBundle bundle,
               std::vector<std::vector<ScalarExpr>> anchor,                    // [a][i]
               std::vector<std::vector<std::vector<ScalarExpr>>> structure);   // [a][b][c]

  const VectorBundle& bundle() const { return bundle_; }
  const CoordinatePatch& patch() const { return bundle_.patch(); }
  std::size_t rank() const { return bundle_.rank(); }

  const ScalarExpr& anchor_entry(std::size_t a, std::size_t i) const {
    return anchor_.at(a).at(i);
  }
  const std::vector<std::vector<ScalarExpr>>& anchor_matrix() const { return anchor_; }
  const ScalarExpr& structure_entry(std::size_t a, std::size_t b, std::size_t c) const {
    return structure_.at(a).at(b).at(c);
  }

  VectorField anchor_of(const Section& mu) const;
  bool anchor_is_zero() const;

  // The anchor matrix read as a morphism into the given tangent-frame bundle.
  BundleMorphism anchor_as_morphism(const VectorBundle& tangent_bundle) const;

  // Bracket of arbitrary sections, extended from the frame by the Leibniz
  // rule along the anchor:
  //   [mu, nu]^c = mu^a nu^b c^c_ab + rho(mu)(nu^c) - rho(nu)(mu^c).
  Section bracket(const Section& mu, const Section& nu) const;

  bool operator==(const LieAlgebroid& o) const = default;

private:
  VectorBundle bundle_;
  std::vector<std::vector<ScalarExpr>> anchor_;
  std::vector<std::vector<std::vector<ScalarExpr>>> structure_;
};

// Three named checks: antisymmetry of the structure functions, anchor
// compatibility on frame pairs, Jacobiator on frame triples. Together with
// the Leibniz extension these certify the axioms for arbitrary sections.
Report verify_algebroid(const LieAlgebroid& a);

// Tangent algebroid of a patch: identity anchor, vanishing structure
// functions. Frame names default to d_<coordinate>.
LieAlgebroid tangent_algebroid(const CoordinatePatch& patch);
LieAlgebroid tangent_algebroid(const CoordinatePatch& patch,
                               std::vector<std::string> frame_names);

// Action algebroid from constant structure data and an action by vector
// fields. Throws Error when the constants fail antisymmetry/Jacobi or the
// fields fail the action identity; the message carries the residuals.
LieAlgebroid action_algebroid(const VectorBundle& bundle,
                              const std::vector<std::vector<std::vector<Rational>>>& constants,
                              const std::vector<VectorField>& action_fields);

// Checks rho_F . K = rho_E and K([e_a, e_b]_E) = [K e_a, K e_b]_F.
Report verify_morphism(const BundleMorphism& k, const LieAlgebroid& e,
                       const LieAlgebroid& f);

/// Field of Lie brackets on a bundle (no anchor): H^c_ab on the frame,
/// extended bilinearly over functions.
class FibrewiseBracket {
public:
  FibrewiseBracket(VectorBundle bundle,
                   std::vector<std::vector<std::vector<ScalarExpr>>> structure);

  const VectorBundle& bundle() const { return bundle_; }
  std::size_t rank() const { return bundle_.rank(); }
  const ScalarExpr& entry(std::size_t a, std::size_t b, std::size_t c) const {
    return structure_.at(a).at(b).at(c);
  }
  const std::vector<std::vector<std::vector<ScalarExpr>>>& structure() const {
    return structure_;
  }

  Section apply(const Section& mu, const Section& nu) const;

  // The same data as a Lie algebroid with vanishing anchor.
  LieAlgebroid as_algebroid() const;

  bool operator==(const FibrewiseBracket& o) const = default;

private:
  VectorBundle bundle_;
  std::vector<std::vector<std::vector<ScalarExpr>>> structure_;
};

// Antisymmetry plus the pointwise Jacobi identity (a polynomial identity in
// the structure functions; no derivatives are involved).
Report verify_fibrewise_bracket(const FibrewiseBracket& h);

} // namespace agd
