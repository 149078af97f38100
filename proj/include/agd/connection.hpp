#pragma once

#include "agd/algebroid.hpp"

namespace agd {

/// F-connection on a bundle E: differentiates sections of E along sections
/// of F, with the Leibniz rule along the anchor of F. The Christoffel table
/// stores nabla_{xi_alpha} e_a = Gamma^b_{alpha a} e_b as gamma[alpha][a][b].
class FConnection {
public:
  FConnection(LieAlgebroid along, VectorBundle on,
              std::vector<std::vector<std::vector<ScalarExpr>>> gamma);
  static FConnection flat(LieAlgebroid along, VectorBundle on);

  const LieAlgebroid& along() const { return along_; }
  const VectorBundle& on() const { return on_; }
  const ScalarExpr& gamma(std::size_t alpha, std::size_t a, std::size_t b) const {
    return gamma_.at(alpha).at(a).at(b);
  }
  const std::vector<std::vector<std::vector<ScalarExpr>>>& gamma_table() const {
    return gamma_;
  }

  // nabla_X mu = X^alpha mu^a Gamma^b_{alpha a} e_b + rho_F(X)(mu^b) e_b.
  Section apply(const Section& x, const Section& mu) const;

  // R(X,Y)mu = nabla_X nabla_Y mu - nabla_Y nabla_X mu - nabla_{[X,Y]_F} mu.
  Section curvature(const Section& x, const Section& y, const Section& mu) const;

  bool operator==(const FConnection& o) const = default;

private:
  LieAlgebroid along_;
  VectorBundle on_;
  std::vector<std::vector<std::vector<ScalarExpr>>> gamma_;
};

/// E-valued two-form on F: zeta[alpha][beta][a], antisymmetric in the first
/// two slots (enforced at construction).
class TwoForm {
public:
  TwoForm(VectorBundle domain, VectorBundle values,
          std::vector<std::vector<std::vector<ScalarExpr>>> comps);
  static TwoForm zero(const VectorBundle& domain, const VectorBundle& values);

  const VectorBundle& domain() const { return domain_; }
  const VectorBundle& values() const { return values_; }
  const ScalarExpr& entry(std::size_t alpha, std::size_t beta, std::size_t a) const {
    return comps_.at(alpha).at(beta).at(a);
  }
  bool is_zero() const;

  Section apply(const Section& x, const Section& y) const;

  bool operator==(const TwoForm& o) const = default;

private:
  VectorBundle domain_;
  VectorBundle values_;
  std::vector<std::vector<std::vector<ScalarExpr>>> comps_;
};

// The basic connection of (nabla, K): a pair of E-connections, one on E and
// one on F's bundle, with Christoffel tables taken on the frame:
//   on E: nabla^bas_mu nu = [mu,nu]_E + nabla_{K(nu)} mu,
//   on F: nabla^bas_mu X  = [K(mu), X]_F + K(nabla_X mu).
struct BasicConnectionPair {
  FConnection on_e;
  FConnection on_f;
  BundleMorphism k;
  FConnection nabla;
};

// Direct evaluations on arbitrary sections (agree with the pair's tables by
// the Leibniz rule whenever K is a morphism).
Section basic_e(const LieAlgebroid& e, const FConnection& nabla,
                const BundleMorphism& k, const Section& mu, const Section& nu);
Section basic_f(const LieAlgebroid& f, const FConnection& nabla,
                const BundleMorphism& k, const Section& mu, const Section& x);

// Builds the pair; requires verify_morphism(k, e, f) to pass and verifies the
// intertwining K(nabla^bas_mu nu) = nabla^bas_mu K(nu) on the frame.
BasicConnectionPair basic_connection(const FConnection& nabla, const BundleMorphism& k,
                                     const LieAlgebroid& e, const LieAlgebroid& f);

// The five-term basic curvature, a tensor in all three slots:
//   R^bas(mu,nu)(X) = nabla_X [mu,nu]_E - [nabla_X mu, nu]_E - [mu, nabla_X nu]_E
//                     - nabla_{nabla^bas_nu X} mu + nabla_{nabla^bas_mu X} nu.
Section basic_curvature(const LieAlgebroid& e, const LieAlgebroid& f,
                        const BundleMorphism& k, const FConnection& nabla,
                        const Section& mu, const Section& nu, const Section& x);

// Torsions of the two canonical E-connections on E:
//   t_bas(mu,nu) = nabla^bas_mu nu - nabla^bas_nu mu - [mu,nu]_E,
//   t_K(mu,nu)   = nabla_{K(mu)} nu - nabla_{K(nu)} mu - [mu,nu]_E.
Section torsion_basic(const LieAlgebroid& e, const LieAlgebroid& f,
                      const BundleMorphism& k, const FConnection& nabla,
                      const Section& mu, const Section& nu);
Section torsion_k(const LieAlgebroid& e, const FConnection& nabla,
                  const BundleMorphism& k, const Section& mu, const Section& nu);

// d^{bas} zeta in the one arity the adjustment condition needs:
//   (X, Y, nu) -> nabla^bas_nu(zeta(X,Y)) - zeta(nabla^bas_nu X, Y)
//                 - zeta(X, nabla^bas_nu Y).
// The covariant-adjustment residual is R_nabla(X,Y)nu + this.
Section dbas_zeta(const LieAlgebroid& e, const LieAlgebroid& f,
                  const BundleMorphism& k, const FConnection& nabla,
                  const TwoForm& zeta, const Section& x, const Section& y,
                  const Section& nu);
// Same evaluation through the stored Christoffel tables of a pair.
Section dbas_zeta(const BasicConnectionPair& pair, const TwoForm& zeta,
                  const Section& x, const Section& y, const Section& nu);

// Standard exterior covariant derivative of zeta as a 3-form on F:
//   nz_X(zeta(Y,Z)) - nz_Y(zeta(X,Z)) + nz_Z(zeta(X,Y))
//   - zeta([X,Y]_F, Z) + zeta([X,Z]_F, Y) - zeta([Y,Z]_F, X).
Section d_zeta(const FConnection& nz, const TwoForm& zeta, const Section& x,
               const Section& y, const Section& z);

// Covariant derivative of a 2-tensor t in Omega^2(E;E) along X by the
// Leibniz rule: nabla_X(t(mu,nu)) - t(nabla_X mu, nu) - t(mu, nabla_X nu),
// with t evaluated through the supplied callable.
template <typename Tensor>
Section nabla_of_tensor(const FConnection& nabla, const Tensor& t,
                        const Section& x, const Section& mu, const Section& nu) {
  return nabla.apply(x, t(mu, nu)) - t(nabla.apply(x, mu), nu) -
         t(mu, nabla.apply(x, nu));
}

// Torsion identities on all frame tuples:
//   (1) t_bas + t_K = 0,
//   (2) R^bas(mu,nu)X = (nabla_X t_bas)(mu,nu) - R(K mu, X)nu + R(K nu, X)mu.
Report check_torsion_identities(const LieAlgebroid& e, const LieAlgebroid& f,
                                const BundleMorphism& k, const FConnection& nabla);

} // namespace agd
