#pragma once

#include <optional>

#include "agd/adjustment.hpp"

namespace agd {

/// The algebroid A on F (+) E built from a strict covariant K-adjustment,
/// together with the six maps of its sandglass sequence, stored as matrices
/// in the combined frame (F-frame first, then E-frame):
///   to_f    (X,mu) -> X + K(mu)      surjective algebroid morphism A -> F
///   graph   nu     -> (-K(nu), nu)   embeds E with the fibrewise bracket H
///   embed_e mu     -> (0, mu)        algebroid morphism E -> A
///   proj_f  (X,mu) -> X              bundle projection (not anchored in general)
///   lift_f  X      -> (X, 0)         splitting of to_f
///   proj_e  (X,mu) -> mu             retro-splitting of lift_f
struct ExtensionResult {
  LieAlgebroid a;
  BundleMorphism to_f;
  BundleMorphism graph;
  BundleMorphism embed_e;
  BundleMorphism proj_f;
  BundleMorphism lift_f;
  BundleMorphism proj_e;
  FibrewiseBracket h;        // the strict fibrewise bracket of the source
  AdjustmentData source;
  Report report;             // construction cross-checks and axiom verification
};

// Builds A with anchor rho_F rows followed by rho_E rows and bracket
//   [(X,mu),(Y,nu)] = ([X+K mu, Y+K nu]_F - K(W), W),
//   W = [mu,nu]_E + nabla_X nu - nabla_Y mu + zeta(X,Y),
// computed on the combined frame. The equivalent basic-connection form is
// computed as a cross-check and must agree entry by entry; verify_algebroid
// of the result is part of the report. Requires all three adjustment flags.
ExtensionResult build_extension(const AdjustmentData& d);

struct GraphBracket {
  FibrewiseBracket h;
  Report report;
};

// The bracket induced on the graph of -K through the embedding nu ->
// (-K nu, nu); must coincide with the extracted fibrewise bracket.
GraphBracket graph_bracket(const ExtensionResult& res);

// The named identity checks of the sandglass sequence; see the conventions
// sheet for the exact list and numbering.
Report verify_sandglass(const ExtensionResult& res);

struct MackenzieResult {
  std::optional<ExtensionResult> result;
  Report report;
};

// The fibrewise-bracket special case: F extended by a bundle of Lie algebras
// (h, no anchor) along nabla with primitive zeta. Preconditions
// nabla h = 0, R_nabla = ad_h(zeta), d^nabla zeta = 0 are verified first;
// on success the result coincides with build_extension for K = 0.
MackenzieResult mackenzie_extension(const LieAlgebroid& f, const FibrewiseBracket& h,
                                    const FConnection& nabla, const TwoForm& zeta);

// Serializes A (or any algebroid) back into model text that reloads to an
// identical structure; used by the export interface.
std::string algebroid_to_model_text(const LieAlgebroid& a, const std::string& name);

} // namespace agd
