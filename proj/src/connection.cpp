#include "agd/connection.hpp"

#include "agd/errors.hpp"

namespace agd {

FConnection::FConnection(LieAlgebroid along, VectorBundle on,
                         std::vector<std::vector<std::vector<ScalarExpr>>> gamma)
    : along_(std::move(along)), on_(std::move(on)), gamma_(std::move(gamma)) {
  if (along_.patch() != on_.patch())
    throw ShapeError("connection endpoints over different patches");
  const std::size_t m = along_.rank();
  const std::size_t r = on_.rank();
  const std::size_t n = on_.patch().dimension();
  if (gamma_.size() != m) throw ShapeError("Christoffel table has wrong direction count");
  for (const auto& block : gamma_) {
    if (block.size() != r) throw ShapeError("Christoffel table has wrong section count");
    for (const auto& comps : block) {
      if (comps.size() != r)
        throw ShapeError("Christoffel component list has wrong length");
      for (const auto& e : comps)
        if (e.nvars() != n) throw ShapeError("Christoffel entry over the wrong patch");
    }
  }
}

FConnection FConnection::flat(LieAlgebroid along, VectorBundle on) {
  const std::size_t n = on.patch().dimension();
  std::vector<std::vector<std::vector<ScalarExpr>>> gamma(
      along.rank(), std::vector<std::vector<ScalarExpr>>(
                        on.rank(), std::vector<ScalarExpr>(on.rank(), ScalarExpr(n))));
  return FConnection(std::move(along), std::move(on), std::move(gamma));
}

Section FConnection::apply(const Section& x, const Section& mu) const {
  if (x.bundle() != along_.bundle())
    throw ShapeError("connection direction is not a section of F");
  if (mu.bundle() != on_) throw ShapeError("connection applied to a foreign section");
  const std::size_t r = on_.rank();
  const std::size_t n = on_.patch().dimension();
  std::vector<ScalarExpr> comps(r, ScalarExpr(n));
  for (std::size_t alpha = 0; alpha < along_.rank(); ++alpha) {
    if (x.comp(alpha).is_zero()) continue;
    for (std::size_t a = 0; a < r; ++a) {
      if (mu.comp(a).is_zero()) continue;
      const ScalarExpr f = x.comp(alpha) * mu.comp(a);
      for (std::size_t b = 0; b < r; ++b) {
        if (gamma_[alpha][a][b].is_zero()) continue;
        comps[b] += f * gamma_[alpha][a][b];
      }
    }
  }
  const VectorField rho_x = along_.anchor_of(x);
  for (std::size_t b = 0; b < r; ++b) comps[b] += rho_x.apply(mu.comp(b));
  return Section(on_, std::move(comps));
}

Section FConnection::curvature(const Section& x, const Section& y,
                               const Section& mu) const {
  return apply(x, apply(y, mu)) - apply(y, apply(x, mu)) -
         apply(along_.bracket(x, y), mu);
}

TwoForm::TwoForm(VectorBundle domain, VectorBundle values,
                 std::vector<std::vector<std::vector<ScalarExpr>>> comps)
    : domain_(std::move(domain)), values_(std::move(values)), comps_(std::move(comps)) {
  if (domain_.patch() != values_.patch())
    throw ShapeError("two-form endpoints over different patches");
  const std::size_t m = domain_.rank();
  const std::size_t r = values_.rank();
  const std::size_t n = domain_.patch().dimension();
  if (comps_.size() != m) throw ShapeError("two-form table has wrong dimension");
  for (const auto& block : comps_) {
    if (block.size() != m) throw ShapeError("two-form table has wrong dimension");
    for (const auto& entry : block) {
      if (entry.size() != r) throw ShapeError("two-form component list has wrong length");
      for (const auto& e : entry)
        if (e.nvars() != n) throw ShapeError("two-form entry over the wrong patch");
    }
  }
  for (std::size_t alpha = 0; alpha < m; ++alpha)
    for (std::size_t beta = alpha; beta < m; ++beta)
      for (std::size_t a = 0; a < r; ++a)
        if (!(comps_[alpha][beta][a] + comps_[beta][alpha][a]).is_zero())
          throw ShapeError("two-form is not antisymmetric");
}

TwoForm TwoForm::zero(const VectorBundle& domain, const VectorBundle& values) {
  const std::size_t n = domain.patch().dimension();
  std::vector<std::vector<std::vector<ScalarExpr>>> comps(
      domain.rank(), std::vector<std::vector<ScalarExpr>>(
                         domain.rank(), std::vector<ScalarExpr>(values.rank(), ScalarExpr(n))));
  return TwoForm(domain, values, std::move(comps));
}

bool TwoForm::is_zero() const {
  for (const auto& block : comps_)
    for (const auto& entry : block)
      for (const auto& e : entry)
        if (!e.is_zero()) return false;
  return true;
}

Section TwoForm::apply(const Section& x, const Section& y) const {
  if (x.bundle() != domain_ || y.bundle() != domain_)
    throw ShapeError("two-form arguments are not sections of its domain");
  const std::size_t r = values_.rank();
  const std::size_t n = domain_.patch().dimension();
  std::vector<ScalarExpr> comps(r, ScalarExpr(n));
  for (std::size_t alpha = 0; alpha < domain_.rank(); ++alpha) {
    if (x.comp(alpha).is_zero()) continue;
    for (std::size_t beta = 0; beta < domain_.rank(); ++beta) {
      if (y.comp(beta).is_zero()) continue;
      const ScalarExpr f = x.comp(alpha) * y.comp(beta);
      for (std::size_t a = 0; a < r; ++a) {
        if (comps_[alpha][beta][a].is_zero()) continue;
        comps[a] += f * comps_[alpha][beta][a];
      }
    }
  }
  return Section(values_, std::move(comps));
}

Section basic_e(const LieAlgebroid& e, const FConnection& nabla,
                const BundleMorphism& k, const Section& mu, const Section& nu) {
  return e.bracket(mu, nu) + nabla.apply(k.apply(nu), mu);
}

Section basic_f(const LieAlgebroid& f, const FConnection& nabla,
                const BundleMorphism& k, const Section& mu, const Section& x) {
  return f.bracket(k.apply(mu), x) + k.apply(nabla.apply(x, mu));
}

BasicConnectionPair basic_connection(const FConnection& nabla, const BundleMorphism& k,
                                     const LieAlgebroid& e, const LieAlgebroid& f) {
  const Report morphism = verify_morphism(k, e, f);
  if (!morphism.passed())
    throw PreconditionError("basic connection requires K to be a verified morphism:\n" +
                            morphism.summary());
  const std::size_t r = e.rank();
  const std::size_t m = f.rank();
  const std::size_t n = e.patch().dimension();

  std::vector<std::vector<std::vector<ScalarExpr>>> gamma_e(
      r, std::vector<std::vector<ScalarExpr>>(r, std::vector<ScalarExpr>(r, ScalarExpr(n))));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      const Section v = basic_e(e, nabla, k, Section::frame(e.bundle(), a),
                                Section::frame(e.bundle(), b));
      for (std::size_t c = 0; c < r; ++c) gamma_e[a][b][c] = v.comp(c);
    }

  std::vector<std::vector<std::vector<ScalarExpr>>> gamma_f(
      r, std::vector<std::vector<ScalarExpr>>(m, std::vector<ScalarExpr>(m, ScalarExpr(n))));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t beta = 0; beta < m; ++beta) {
      const Section v = basic_f(f, nabla, k, Section::frame(e.bundle(), a),
                                Section::frame(f.bundle(), beta));
      for (std::size_t gamma = 0; gamma < m; ++gamma) gamma_f[a][beta][gamma] = v.comp(gamma);
    }

  BasicConnectionPair pair{FConnection(e, e.bundle(), std::move(gamma_e)),
                           FConnection(e, f.bundle(), std::move(gamma_f)), k, nabla};

  // Intertwining K(nabla^bas_mu nu) = nabla^bas_mu K(nu) on the frame.
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      const Section ea = Section::frame(e.bundle(), a);
      const Section eb = Section::frame(e.bundle(), b);
      const Section diff =
          k.apply(basic_e(e, nabla, k, ea, eb)) - basic_f(f, nabla, k, ea, k.apply(eb));
      if (!diff.is_zero())
        throw PreconditionError("basic connection pair fails K-intertwining at (" +
                                e.bundle().frame_name(a) + "," + e.bundle().frame_name(b) +
                                "): " + diff.str());
    }
  return pair;
}

Section basic_curvature(const LieAlgebroid& e, const LieAlgebroid& f,
                        const BundleMorphism& k, const FConnection& nabla,
                        const Section& mu, const Section& nu, const Section& x) {
  return nabla.apply(x, e.bracket(mu, nu)) - e.bracket(nabla.apply(x, mu), nu) -
         e.bracket(mu, nabla.apply(x, nu)) -
         nabla.apply(basic_f(f, nabla, k, nu, x), mu) +
         nabla.apply(basic_f(f, nabla, k, mu, x), nu);
}

Section torsion_basic(const LieAlgebroid& e, const LieAlgebroid& f,
                      const BundleMorphism& k, const FConnection& nabla,
                      const Section& mu, const Section& nu) {
  (void)f;
  return basic_e(e, nabla, k, mu, nu) - basic_e(e, nabla, k, nu, mu) -
         e.bracket(mu, nu);
}

Section torsion_k(const LieAlgebroid& e, const FConnection& nabla,
                  const BundleMorphism& k, const Section& mu, const Section& nu) {
  return nabla.apply(k.apply(mu), nu) - nabla.apply(k.apply(nu), mu) -
         e.bracket(mu, nu);
}

Section dbas_zeta(const LieAlgebroid& e, const LieAlgebroid& f,
                  const BundleMorphism& k, const FConnection& nabla,
                  const TwoForm& zeta, const Section& x, const Section& y,
                  const Section& nu) {
  return basic_e(e, nabla, k, nu, zeta.apply(x, y)) -
         zeta.apply(basic_f(f, nabla, k, nu, x), y) -
         zeta.apply(x, basic_f(f, nabla, k, nu, y));
}

Section dbas_zeta(const BasicConnectionPair& pair, const TwoForm& zeta,
                  const Section& x, const Section& y, const Section& nu) {
  return pair.on_e.apply(nu, zeta.apply(x, y)) -
         zeta.apply(pair.on_f.apply(nu, x), y) -
         zeta.apply(x, pair.on_f.apply(nu, y));
}

Section d_zeta(const FConnection& nz, const TwoForm& zeta, const Section& x,
               const Section& y, const Section& z) {
  const LieAlgebroid& f = nz.along();
  return nz.apply(x, zeta.apply(y, z)) - nz.apply(y, zeta.apply(x, z)) +
         nz.apply(z, zeta.apply(x, y)) - zeta.apply(f.bracket(x, y), z) +
         zeta.apply(f.bracket(x, z), y) - zeta.apply(f.bracket(y, z), x);
}

Report check_torsion_identities(const LieAlgebroid& e, const LieAlgebroid& f,
                                const BundleMorphism& k, const FConnection& nabla) {
  Report report;
  const std::size_t r = e.rank();
  const std::size_t m = f.rank();
  const auto& en = e.bundle().frame_names();
  const auto& fn = f.bundle().frame_names();

  std::vector<std::string> sum_res;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) {
      const Section ea = Section::frame(e.bundle(), a);
      const Section eb = Section::frame(e.bundle(), b);
      const Section diff = torsion_basic(e, f, k, nabla, ea, eb) +
                           torsion_k(e, nabla, k, ea, eb);
      if (!diff.is_zero())
        sum_res.push_back("(" + en[a] + "," + en[b] + "): " + diff.str());
    }
  if (sum_res.empty())
    report.add_pass("torsion_sum");
  else
    report.add_fail("torsion_sum", std::move(sum_res));

  const auto tbas = [&](const Section& mu, const Section& nu) {
    return torsion_basic(e, f, k, nabla, mu, nu);
  };
  std::vector<std::string> rel_res;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t alpha = 0; alpha < m; ++alpha) {
        const Section mu = Section::frame(e.bundle(), a);
        const Section nu = Section::frame(e.bundle(), b);
        const Section x = Section::frame(f.bundle(), alpha);
        const Section lhs = basic_curvature(e, f, k, nabla, mu, nu, x);
        const Section rhs = nabla_of_tensor(nabla, tbas, x, mu, nu) -
                            nabla.curvature(k.apply(mu), x, nu) +
                            nabla.curvature(k.apply(nu), x, mu);
        const Section diff = lhs - rhs;
        if (!diff.is_zero())
          rel_res.push_back("(" + en[a] + "," + en[b] + ";" + fn[alpha] + "): " +
                            diff.str());
      }
  if (rel_res.empty())
    report.add_pass("torsion_curvature_relation");
  else
    report.add_fail("torsion_curvature_relation", std::move(rel_res));

  return report;
}

} // namespace agd
