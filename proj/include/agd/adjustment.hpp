#pragma once

#include "agd/connection.hpp"

namespace agd {

enum class TriState { Unchecked, Pass, Fail };

std::string_view to_string(TriState s);

/// A candidate (nabla, zeta) for a covariant K-adjustment between the
/// algebroids E and F, together with the verification state of the three
/// nested conditions. Values are immutable: the check functions return
/// flag-updated copies, and no flag is ever set unless K verified as a
/// morphism first.
class AdjustmentData {
public:
  AdjustmentData(LieAlgebroid e, LieAlgebroid f, BundleMorphism k,
                 FConnection nabla, TwoForm zeta);

  const LieAlgebroid& e() const { return e_; }
  const LieAlgebroid& f() const { return f_; }
  const BundleMorphism& k() const { return k_; }
  const FConnection& nabla() const { return nabla_; }
  const TwoForm& zeta() const { return zeta_; }

  TriState cartan() const { return cartan_; }
  TriState covariant() const { return covariant_; }
  TriState strict() const { return strict_; }
  bool all_pass() const {
    return cartan_ == TriState::Pass && covariant_ == TriState::Pass &&
           strict_ == TriState::Pass;
  }

  AdjustmentData with_cartan(TriState s) const;
  AdjustmentData with_covariant(TriState s) const;
  AdjustmentData with_strict(TriState s) const;

private:
  LieAlgebroid e_;
  LieAlgebroid f_;
  BundleMorphism k_;
  FConnection nabla_;
  TwoForm zeta_;
  TriState cartan_ = TriState::Unchecked;
  TriState covariant_ = TriState::Unchecked;
  TriState strict_ = TriState::Unchecked;
};

struct CheckedAdjustment {
  AdjustmentData data;
  Report report;
};

// Cartan condition: the basic curvature vanishes on all frame triples. The
// morphism property of K is verified first; if it fails, no flag is set and
// the cartan entry is reported as skipped.
CheckedAdjustment check_cartan(const AdjustmentData& d);

// Covariant adjustment: R_nabla(X,Y)nu + d^{bas}zeta(X,Y,nu) = 0 on frames.
// Requires the cartan flag to be Pass. For K = 0 the reduced fibrewise form
// R_nabla = ad_E(zeta) is checked and reported as well.
CheckedAdjustment check_covariant(const AdjustmentData& d);

// Strictness: d^{zeta-corrected} zeta = 0 on all frame triples of F.
// Requires the covariant flag to be Pass.
CheckedAdjustment check_strict(const AdjustmentData& d);

// Runs the three checks in order, stopping after the first failure.
CheckedAdjustment check_all(const AdjustmentData& d);

// The corrected connection: nabla^zeta_X nu = nabla_X nu - zeta(X, K(nu)).
FConnection zeta_corrected(const AdjustmentData& d);

struct BracketExtraction {
  FibrewiseBracket h;
  Report report;
};

// The fibrewise bracket H(mu,nu) = t_bas(mu,nu) + zeta(K mu, K nu) of a
// strict adjustment. Cross-checked against the equivalent form
// -t_K(mu,nu) + zeta(K mu, K nu), and verified to be a field of Lie brackets.
// Requires the strict flag to be Pass.
BracketExtraction bla_bracket(const AdjustmentData& d);

// Residual of  [mu,nu]_E = H(mu,nu) + nz_{K mu} nu - nz_{K nu} mu
//                          + zeta(K mu, K nu)  on all frame pairs.
Report verify_decomposition(const AdjustmentData& d, const FibrewiseBracket& h);

// The multiplicative Yang-Mills conditions for (nz, H, zeta):
//   (1) nz H = 0, (2) R_nz = ad_H . zeta, (3) d^nz zeta = 0,
// checked on all frame tuples of F. When k is supplied, the subset of
// equations (1) and (2) contracted along the image of K is tallied
// separately.
Report check_yang_mills(const FConnection& nz, const FibrewiseBracket& h,
                        const TwoForm& zeta, const BundleMorphism* k = nullptr);

struct Reconstruction {
  AdjustmentData data;
  Report report;
};

// Converse direction: from Yang-Mills data (nz, H, zeta) whose decomposition
// reproduces E's bracket, rebuild nabla_X mu = nz_X mu + zeta(X, K mu) and
// re-run the three adjustment checks, which must pass.
Reconstruction reconstruct_adjustment(const FConnection& nz, const FibrewiseBracket& h,
                                      const TwoForm& zeta, const BundleMorphism& k,
                                      const LieAlgebroid& e, const LieAlgebroid& f);

// Flatness of H under the basic connection:
//   nabla^bas_mu (H(nu,sigma)) - H(nabla^bas_mu nu, sigma)
//   - H(nu, nabla^bas_mu sigma) = 0 on frame triples.
Report check_bracket_flatness(const AdjustmentData& d, const FibrewiseBracket& h);

// How a change of splitting updates the primitive. The printed formula
// d^nabla(lambda) + [lambda, lambda] drops the previous zeta; the additive
// variant keeps it. Both are exposed; nothing defaults silently.
enum class PrimitiveUpdate { Printed, Additive };

struct SplittingChange {
  FConnection nabla;
  TwoForm zeta;
  Report yang_mills;  // check_yang_mills of the output data
};

// Change of splitting by an E-valued 1-form lambda on F (passed as a bundle
// morphism F -> E), in the fibrewise-bracket setting: the anchor of E must
// vanish. nabla^lambda = nabla + ad(lambda), zeta^lambda per the variant.
SplittingChange change_splitting(const LieAlgebroid& e_bla, const LieAlgebroid& f,
                                 const FConnection& nabla, const TwoForm& zeta,
                                 const BundleMorphism& lambda, PrimitiveUpdate mode);

} // namespace agd
