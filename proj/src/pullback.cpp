#include "agd/pullback.hpp"

#include "agd/errors.hpp"

namespace agd {

Submersion::Submersion(CoordinatePatch total, CoordinatePatch base)
    : total_(std::move(total)), base_(std::move(base)) {
  if (total_.dimension() <= base_.dimension())
    throw ShapeError("total patch must add at least one fibre coordinate");
  for (std::size_t i = 0; i < base_.dimension(); ++i)
    if (total_.name(i) != base_.name(i))
      throw ShapeError("base coordinates must be a prefix of the total coordinates");
}

ScalarExpr pull_scalar(const Submersion& phi, const ScalarExpr& e) {
  if (e.nvars() != phi.base().dimension())
    throw ShapeError("pulling back an expression that is not over the base");
  return e.lifted(phi.total().dimension());
}

VectorBundle pull_bundle(const Submersion& phi, const VectorBundle& b) {
  if (b.patch() != phi.base())
    throw ShapeError("pulling back a bundle that is not over the base");
  return VectorBundle(phi.total(), b.frame_names());
}

PullbackAlgebroid pullback_algebroid(const LieAlgebroid& f, const Submersion& phi,
                                     std::vector<std::string> vertical_names) {
  if (f.patch() != phi.base())
    throw ShapeError("pulling back an algebroid that is not over the base");
  const std::size_t m = f.rank();
  const std::size_t k = phi.fibre_dimension();
  const std::size_t nb = phi.base().dimension();
  const std::size_t nt = phi.total().dimension();

  if (vertical_names.empty()) {
    for (std::size_t j = 0; j < k; ++j)
      vertical_names.push_back("v_" + phi.total().name(nb + j));
  }
  if (vertical_names.size() != k)
    throw ShapeError("one vertical frame name per fibre coordinate expected");
  std::vector<std::string> frame = f.bundle().frame_names();
  frame.insert(frame.end(), vertical_names.begin(), vertical_names.end());
  // VectorBundle construction rejects clashes between lifted and vertical names.
  VectorBundle bundle(phi.total(), std::move(frame));

  std::vector<std::vector<ScalarExpr>> anchor(m + k,
                                              std::vector<ScalarExpr>(nt, ScalarExpr(nt)));
  for (std::size_t alpha = 0; alpha < m; ++alpha)
    for (std::size_t i = 0; i < nb; ++i)
      anchor[alpha][i] = pull_scalar(phi, f.anchor_entry(alpha, i));
  for (std::size_t j = 0; j < k; ++j)
    anchor[m + j][nb + j] = ScalarExpr::constant(nt, Rational(1));

  std::vector<std::vector<std::vector<ScalarExpr>>> structure(
      m + k, std::vector<std::vector<ScalarExpr>>(
                 m + k, std::vector<ScalarExpr>(m + k, ScalarExpr(nt))));
  for (std::size_t alpha = 0; alpha < m; ++alpha)
    for (std::size_t beta = 0; beta < m; ++beta)
      for (std::size_t gamma = 0; gamma < m; ++gamma)
        structure[alpha][beta][gamma] =
            pull_scalar(phi, f.structure_entry(alpha, beta, gamma));

  LieAlgebroid total(bundle, std::move(anchor), std::move(structure));

  // The projection onto F sends lifted frame elements to the base frame and
  // vertical elements to zero. Over the fibration this is a morphism iff the
  // brackets project to the base brackets and the anchors project through
  // the tangent of phi; both are checked on the frame.
  Report report;
  {
    std::vector<std::string> residuals;
    for (std::size_t i = 0; i < m + k; ++i)
      for (std::size_t j = i + 1; j < m + k; ++j) {
        // Projected bracket: base structure functions on lifted pairs, zero
        // otherwise. Compare against the total structure functions' F-part.
        for (std::size_t gamma = 0; gamma < m; ++gamma) {
          ScalarExpr expect(nt);
          if (i < m && j < m)
            expect = pull_scalar(phi, f.structure_entry(i, j, gamma));
          const ScalarExpr diff = total.structure_entry(i, j, gamma) - expect;
          if (!diff.is_zero())
            residuals.push_back(bundle.frame_name(i) + "," + bundle.frame_name(j) +
                                " -> " + bundle.frame_name(gamma));
        }
        // Vertical part of a projected bracket must vanish on lifted pairs.
        if (i < m && j < m)
          for (std::size_t gamma = m; gamma < m + k; ++gamma)
            if (!total.structure_entry(i, j, gamma).is_zero())
              residuals.push_back(bundle.frame_name(i) + "," + bundle.frame_name(j) +
                                  " -> vertical " + bundle.frame_name(gamma));
      }
    if (residuals.empty())
      report.add_pass("projection_bracket");
    else
      report.add_fail("projection_bracket", std::move(residuals));
  }
  {
    // Tangent of phi applied to the total anchor reproduces the base anchor
    // on lifted elements and kills vertical ones.
    std::vector<std::string> residuals;
    for (std::size_t x = 0; x < m + k; ++x)
      for (std::size_t i = 0; i < nb; ++i) {
        const ScalarExpr expect =
            x < m ? pull_scalar(phi, f.anchor_entry(x, i)) : ScalarExpr(nt);
        const ScalarExpr diff = total.anchor_entry(x, i) - expect;
        if (!diff.is_zero())
          residuals.push_back(bundle.frame_name(x) + " along " + phi.base().name(i));
      }
    if (residuals.empty())
      report.add_pass("projection_anchor");
    else
      report.add_fail("projection_anchor", std::move(residuals));
  }
  report.merge(verify_algebroid(total), "algebroid.");

  return {std::move(total), f, phi, m, std::move(report)};
}

FConnection pullback_connection(const PullbackAlgebroid& pf, const FConnection& nabla) {
  if (nabla.along() != pf.base)
    throw ShapeError("connection is not along the pulled-back algebroid's base");
  const Submersion& phi = pf.phi;
  const std::size_t m = pf.lifted_rank;
  const std::size_t k = phi.fibre_dimension();
  const std::size_t r = nabla.on().rank();
  const std::size_t nt = phi.total().dimension();

  std::vector<std::vector<std::vector<ScalarExpr>>> gamma(
      m + k, std::vector<std::vector<ScalarExpr>>(r, std::vector<ScalarExpr>(r, ScalarExpr(nt))));
  for (std::size_t alpha = 0; alpha < m; ++alpha)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        gamma[alpha][a][b] = pull_scalar(phi, nabla.gamma(alpha, a, b));
  return FConnection(pf.total, pull_bundle(phi, nabla.on()), std::move(gamma));
}

PullbackAction pullback_action(const LieAlgebroid& e, const BundleMorphism& k,
                               const PullbackAlgebroid& pf,
                               const std::vector<VectorField>& action_fields) {
  const Submersion& phi = pf.phi;
  if (e.patch() != phi.base())
    throw ShapeError("action pullback of an algebroid that is not over the base");
  if (k.source() != e.bundle() || k.target() != pf.base.bundle())
    throw ShapeError("K endpoints do not match the pullback data");
  const std::size_t r = e.rank();
  if (action_fields.size() != r)
    throw ShapeError("one action field per frame element expected");
  for (const auto& x : action_fields)
    if (x.patch() != phi.total())
      throw ShapeError("action field not over the total patch");

  const std::size_t nb = phi.base().dimension();
  const std::size_t nt = phi.total().dimension();
  const std::size_t m = pf.lifted_rank;
  const std::size_t kdim = phi.fibre_dimension();

  Report report;
  // Tangent-of-phi compatibility: the base components of the action fields
  // are the pulled-back anchor of E.
  {
    std::vector<std::string> residuals;
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t i = 0; i < nb; ++i) {
        const ScalarExpr diff =
            action_fields[a].comp(i) - pull_scalar(phi, e.anchor_entry(a, i));
        if (!diff.is_zero())
          residuals.push_back(e.bundle().frame_name(a) + " along " +
                              phi.base().name(i) + ": " +
                              diff.str(phi.total().names()));
      }
    if (residuals.empty())
      report.add_pass("action_projects_to_anchor");
    else
      report.add_fail("action_projects_to_anchor", std::move(residuals));
  }

  VectorBundle eb = pull_bundle(phi, e.bundle());
  std::vector<std::vector<ScalarExpr>> anchor(r, std::vector<ScalarExpr>(nt, ScalarExpr(nt)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t i = 0; i < nt; ++i) anchor[a][i] = action_fields[a].comp(i);
  std::vector<std::vector<std::vector<ScalarExpr>>> structure(
      r, std::vector<std::vector<ScalarExpr>>(r, std::vector<ScalarExpr>(r, ScalarExpr(nt))));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        structure[a][b][c] = pull_scalar(phi, e.structure_entry(a, b, c));
  LieAlgebroid e_total(eb, std::move(anchor), std::move(structure));
  report.merge(verify_algebroid(e_total), "action_algebroid.");

  // phi!K: the lifted block is K read over N; the vertical block is the
  // vertical part of the action fields.
  std::vector<std::vector<ScalarExpr>> mtx(m + kdim,
                                           std::vector<ScalarExpr>(r, ScalarExpr(nt)));
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t s = 0; s < r; ++s) mtx[t][s] = pull_scalar(phi, k.entry(t, s));
  for (std::size_t j = 0; j < kdim; ++j)
    for (std::size_t s = 0; s < r; ++s) mtx[m + j][s] = action_fields[s].comp(nb + j);
  BundleMorphism k_total(e_total.bundle(), pf.total.bundle(), std::move(mtx));
  report.merge(verify_morphism(k_total, e_total, pf.total), "morphism.");

  return {std::move(e_total), std::move(k_total), std::move(report)};
}

PullbackAdjustmentResult pullback_adjustment(const AdjustmentData& d,
                                             const Submersion& phi,
                                             const std::vector<VectorField>& action_fields,
                                             std::vector<std::string> vertical_names) {
  if (!d.all_pass())
    throw PreconditionError("pullback requires a strict covariant adjustment");
  Report report;
  PullbackAlgebroid pf = pullback_algebroid(d.f(), phi, std::move(vertical_names));
  report.merge(pf.report, "f.");
  PullbackAction pa = pullback_action(d.e(), d.k(), pf, action_fields);
  report.merge(pa.report, "e.");
  FConnection nabla = pullback_connection(pf, d.nabla());

  // zeta': base zeta on lifted pairs, zero as soon as a slot is vertical.
  const std::size_t m = pf.lifted_rank;
  const std::size_t kdim = phi.fibre_dimension();
  const std::size_t r = d.e().rank();
  const std::size_t nt = phi.total().dimension();
  std::vector<std::vector<std::vector<ScalarExpr>>> comps(
      m + kdim, std::vector<std::vector<ScalarExpr>>(m + kdim,
                                                     std::vector<ScalarExpr>(r, ScalarExpr(nt))));
  for (std::size_t alpha = 0; alpha < m; ++alpha)
    for (std::size_t beta = 0; beta < m; ++beta)
      for (std::size_t a = 0; a < r; ++a)
        comps[alpha][beta][a] = pull_scalar(phi, d.zeta().entry(alpha, beta, a));
  TwoForm zeta(pf.total.bundle(), pa.e_total.bundle(), std::move(comps));

  AdjustmentData lifted(pa.e_total, pf.total, pa.k_total, std::move(nabla),
                        std::move(zeta));
  CheckedAdjustment checked = check_all(lifted);
  report.merge(checked.report, "adjustment.");
  return {checked.data, std::move(pf), std::move(report)};
}

} // namespace agd
