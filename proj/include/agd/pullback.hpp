#pragma once

#include "agd/adjustment.hpp"

namespace agd {

/// Coordinate projection of a trivial fibration: the base coordinates are a
/// prefix of the total coordinates, and the map drops the fibre coordinates.
class Submersion {
public:
  Submersion(CoordinatePatch total, CoordinatePatch base);

  const CoordinatePatch& total() const { return total_; }
  const CoordinatePatch& base() const { return base_; }
  std::size_t fibre_dimension() const {
    return total_.dimension() - base_.dimension();
  }

private:
  CoordinatePatch total_;
  CoordinatePatch base_;
};

// Base-patch data read over the total patch (coefficients untouched).
ScalarExpr pull_scalar(const Submersion& phi, const ScalarExpr& e);
VectorBundle pull_bundle(const Submersion& phi, const VectorBundle& b);

/// The pullback of F as a Lie algebroid: rank F + fibre-dimension many frame
/// elements, the lifted F-frame followed by the vertical coordinate
/// derivations. Lifted elements keep their base anchor and brackets; mixed
/// and vertical brackets vanish; a vertical element's anchor is itself.
struct PullbackAlgebroid {
  LieAlgebroid total;       // over N
  LieAlgebroid base;        // F over M
  Submersion phi;
  std::size_t lifted_rank;  // = rank of F; the rest of the frame is vertical
  Report report;            // the projection onto F as a morphism over phi
};

PullbackAlgebroid pullback_algebroid(const LieAlgebroid& f, const Submersion& phi,
                                     std::vector<std::string> vertical_names = {});

// The pulled-back connection: Christoffel entries of lifted directions are
// the base entries; vertical directions are flat.
FConnection pullback_connection(const PullbackAlgebroid& pf, const FConnection& nabla);

struct PullbackAction {
  LieAlgebroid e_total;     // phi*E with the action anchor over N
  BundleMorphism k_total;   // into the pullback algebroid's bundle
  Report report;            // compatibility and morphism checks
};

// phi*E as an action algebroid over N: structure functions pulled back, the
// given fields as anchor. Requires the fields to project to rho_E under the
// fibration (their base components are the pulled-back base anchor), which
// makes mu -> ((phi*K)(mu), rho(mu)) a morphism into the pullback algebroid.
PullbackAction pullback_action(const LieAlgebroid& e, const BundleMorphism& k,
                               const PullbackAlgebroid& pf,
                               const std::vector<VectorField>& action_fields);

struct PullbackAdjustmentResult {
  AdjustmentData data;          // flags carry the re-verification outcome
  PullbackAlgebroid f_total;
  Report report;
};

// Pulls a strict adjustment back along phi: zeta' is the base zeta on lifted
// pairs and zero whenever a slot is vertical; the result is re-verified by
// the three adjustment checks, which must pass again.
PullbackAdjustmentResult pullback_adjustment(const AdjustmentData& d,
                                             const Submersion& phi,
                                             const std::vector<VectorField>& action_fields,
                                             std::vector<std::string> vertical_names = {});

} // namespace agd
