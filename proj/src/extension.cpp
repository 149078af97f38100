#include "agd/extension.hpp"

#include <sstream>

#include "agd/errors.hpp"

namespace agd {

ExtensionResult build_extension(const AdjustmentData& d) {
  if (!d.all_pass())
    throw PreconditionError(
        "build_extension requires a strict covariant adjustment (all three flags pass)");
  Report report;

  const LieAlgebroid& e = d.e();
  const LieAlgebroid& f = d.f();
  const BundleMorphism& k = d.k();
  const FConnection& nabla = d.nabla();
  const TwoForm& zeta = d.zeta();
  const std::size_t r = e.rank();
  const std::size_t m = f.rank();
  const std::size_t n = e.patch().dimension();

  std::vector<std::string> frame = f.bundle().frame_names();
  frame.insert(frame.end(), e.bundle().frame_names().begin(),
               e.bundle().frame_names().end());
  VectorBundle ab(e.patch(), std::move(frame));

  std::vector<std::vector<ScalarExpr>> anchor;
  anchor.reserve(m + r);
  for (std::size_t alpha = 0; alpha < m; ++alpha) anchor.push_back(f.anchor_matrix()[alpha]);
  for (std::size_t a = 0; a < r; ++a) anchor.push_back(e.anchor_matrix()[a]);

  // Bracket of two combined frame elements, in the displayed form.
  const auto bracket_direct = [&](const Section& x, const Section& mu, const Section& y,
                                  const Section& nu) -> std::pair<Section, Section> {
    const Section w = e.bracket(mu, nu) + nabla.apply(x, nu) - nabla.apply(y, mu) +
                      zeta.apply(x, y);
    const Section f_part =
        f.bracket(x + k.apply(mu), y + k.apply(nu)) - k.apply(w);
    return {f_part, w};
  };
  // The same bracket through the basic connection on F.
  const auto bracket_basic = [&](const Section& x, const Section& mu, const Section& y,
                                 const Section& nu) -> std::pair<Section, Section> {
    const Section w = e.bracket(mu, nu) + nabla.apply(x, nu) - nabla.apply(y, mu) +
                      zeta.apply(x, y);
    const Section f_part = f.bracket(x, y) + basic_f(f, nabla, k, mu, y) -
                           basic_f(f, nabla, k, nu, x) -
                           k.apply(zeta.apply(x, y));
    return {f_part, w};
  };

  const auto part_of = [&](std::size_t i) -> std::pair<Section, Section> {
    if (i < m)
      return {Section::frame(f.bundle(), i), Section::zero(e.bundle())};
    return {Section::zero(f.bundle()), Section::frame(e.bundle(), i - m)};
  };

  std::vector<std::vector<std::vector<ScalarExpr>>> structure(
      m + r, std::vector<std::vector<ScalarExpr>>(m + r,
                                                  std::vector<ScalarExpr>(m + r, ScalarExpr(n))));
  std::vector<std::string> cross;
  for (std::size_t i = 0; i < m + r; ++i)
    for (std::size_t j = 0; j < m + r; ++j) {
      const auto [xi, mi] = part_of(i);
      const auto [xj, mj] = part_of(j);
      const auto [fp, ep] = bracket_direct(xi, mi, xj, mj);
      const auto [fp2, ep2] = bracket_basic(xi, mi, xj, mj);
      const Section df = fp - fp2;
      const Section de = ep - ep2;
      if (!df.is_zero() || !de.is_zero())
        cross.push_back("(" + ab.frame_name(i) + "," + ab.frame_name(j) + "): (" +
                        df.str() + ", " + de.str() + ")");
      for (std::size_t c = 0; c < m; ++c) structure[i][j][c] = fp.comp(c);
      for (std::size_t c = 0; c < r; ++c) structure[i][j][m + c] = ep.comp(c);
    }
  if (!cross.empty())
    throw Error("the two bracket forms of the extension disagree:\n" +
                [&] {
                  std::string s;
                  for (const auto& line : cross) s += line + "\n";
                  return s;
                }());
  report.add_pass("bracket_forms_agree");

  LieAlgebroid a(ab, std::move(anchor), std::move(structure));
  report.merge(verify_algebroid(a), "algebroid.");

  // The six sandglass maps as matrices in the combined frame.
  const auto block = [&](const VectorBundle& src, const VectorBundle& dst,
                         auto&& fill) {
    std::vector<std::vector<ScalarExpr>> mtx(
        dst.rank(), std::vector<ScalarExpr>(src.rank(), ScalarExpr(n)));
    fill(mtx);
    return BundleMorphism(src, dst, std::move(mtx));
  };

  BundleMorphism to_f = block(ab, f.bundle(), [&](auto& mtx) {
    for (std::size_t t = 0; t < m; ++t) {
      mtx[t][t] = ScalarExpr::constant(n, Rational(1));
      for (std::size_t s = 0; s < r; ++s) mtx[t][m + s] = k.entry(t, s);
    }
  });
  BundleMorphism graph = block(e.bundle(), ab, [&](auto& mtx) {
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t s = 0; s < r; ++s) mtx[t][s] = -k.entry(t, s);
    for (std::size_t s = 0; s < r; ++s)
      mtx[m + s][s] = ScalarExpr::constant(n, Rational(1));
  });
  BundleMorphism embed_e = block(e.bundle(), ab, [&](auto& mtx) {
    for (std::size_t s = 0; s < r; ++s)
      mtx[m + s][s] = ScalarExpr::constant(n, Rational(1));
  });
  BundleMorphism proj_f = block(ab, f.bundle(), [&](auto& mtx) {
    for (std::size_t t = 0; t < m; ++t) mtx[t][t] = ScalarExpr::constant(n, Rational(1));
  });
  BundleMorphism lift_f = block(f.bundle(), ab, [&](auto& mtx) {
    for (std::size_t t = 0; t < m; ++t) mtx[t][t] = ScalarExpr::constant(n, Rational(1));
  });
  BundleMorphism proj_e = block(ab, e.bundle(), [&](auto& mtx) {
    for (std::size_t t = 0; t < r; ++t)
      mtx[t][m + t] = ScalarExpr::constant(n, Rational(1));
  });

  BracketExtraction extraction = bla_bracket(d);
  report.merge(extraction.report, "h.");

  return {std::move(a),      std::move(to_f),   std::move(graph),
          std::move(embed_e), std::move(proj_f), std::move(lift_f),
          std::move(proj_e),  std::move(extraction.h), d, std::move(report)};
}

GraphBracket graph_bracket(const ExtensionResult& res) {
  Report report;
  const LieAlgebroid& e = res.source.e();
  const std::size_t r = e.rank();
  const std::size_t n = e.patch().dimension();
  const auto& en = e.bundle().frame_names();

  std::vector<std::vector<std::vector<ScalarExpr>>> structure(
      r, std::vector<std::vector<ScalarExpr>>(r, std::vector<ScalarExpr>(r, ScalarExpr(n))));
  std::vector<std::string> closure;
  std::vector<std::string> mismatch;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      const Section ia = res.graph.apply(Section::frame(e.bundle(), a));
      const Section ib = res.graph.apply(Section::frame(e.bundle(), b));
      const Section br = res.a.bracket(ia, ib);
      const Section hab = res.proj_e.apply(br);
      // The bracket must stay on the graph: br = graph(hab).
      const Section diff = br - res.graph.apply(hab);
      if (!diff.is_zero())
        closure.push_back("(" + en[a] + "," + en[b] + "): " + diff.str());
      for (std::size_t c = 0; c < r; ++c) structure[a][b][c] = hab.comp(c);
      const Section dh = hab - res.h.apply(Section::frame(e.bundle(), a),
                                           Section::frame(e.bundle(), b));
      if (!dh.is_zero())
        mismatch.push_back("(" + en[a] + "," + en[b] + "): " + dh.str());
    }
  if (closure.empty())
    report.add_pass("graph_closed");
  else
    report.add_fail("graph_closed", std::move(closure));
  if (mismatch.empty())
    report.add_pass("matches_strict_bracket");
  else
    report.add_fail("matches_strict_bracket", std::move(mismatch));
  return {FibrewiseBracket(e.bundle(), std::move(structure)), std::move(report)};
}

Report verify_sandglass(const ExtensionResult& res) {
  Report report;
  const LieAlgebroid& a = res.a;
  const LieAlgebroid& e = res.source.e();
  const LieAlgebroid& f = res.source.f();
  const TwoForm& zeta = res.source.zeta();
  const std::size_t r = e.rank();
  const std::size_t m = f.rank();
  const auto& en = e.bundle().frame_names();
  const auto& fn = f.bundle().frame_names();

  // (1) to_f is a morphism of Lie algebroids A -> F.
  report.merge(verify_morphism(res.to_f, a, f), "1.to_f_morphism.");

  // (2) to_f . graph = 0.
  if (res.to_f.compose(res.graph).is_zero())
    report.add_pass("2.to_f_graph_zero");
  else
    report.add_fail("2.to_f_graph_zero", {"to_f . graph != 0"});

  // (3) [graph(mu), graph(nu)]_A = graph(H(mu,nu)).
  {
    std::vector<std::string> residuals;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j) {
        const Section ei = Section::frame(e.bundle(), i);
        const Section ej = Section::frame(e.bundle(), j);
        const Section diff = a.bracket(res.graph.apply(ei), res.graph.apply(ej)) -
                             res.graph.apply(res.h.apply(ei, ej));
        if (!diff.is_zero())
          residuals.push_back("(" + en[i] + "," + en[j] + "): " + diff.str());
      }
    if (residuals.empty())
      report.add_pass("3.graph_bracket");
    else
      report.add_fail("3.graph_bracket", std::move(residuals));
  }

  // (4) embed_e is a morphism of Lie algebroids E -> A.
  report.merge(verify_morphism(res.embed_e, e, a), "4.embed_e_morphism.");

  // (5) Splitting identities.
  {
    const BundleMorphism id_a = BundleMorphism::identity(a.bundle());
    const BundleMorphism id_e = BundleMorphism::identity(e.bundle());
    const BundleMorphism id_f = BundleMorphism::identity(f.bundle());
    std::vector<std::string> residuals;
    if (!(id_a - (res.embed_e.compose(res.proj_e) + res.lift_f.compose(res.proj_f)))
             .is_zero())
      residuals.push_back("id_A != embed_e.proj_e + lift_f.proj_f");
    if (!(res.proj_e.compose(res.embed_e) - id_e).is_zero())
      residuals.push_back("proj_e . embed_e != id_E");
    if (!(res.to_f.compose(res.lift_f) - id_f).is_zero())
      residuals.push_back("to_f . lift_f != id_F");
    if (residuals.empty())
      report.add_pass("5.splitting_identities");
    else
      report.add_fail("5.splitting_identities", std::move(residuals));
  }

  // (6) Curvature of the lift: R(X,Y) = [lift X, lift Y]_A - lift([X,Y]_F)
  //     equals graph(zeta(X,Y)), and to_f kills it.
  {
    std::vector<std::string> curvature_res;
    std::vector<std::string> killed_res;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const Section xi = Section::frame(f.bundle(), i);
        const Section xj = Section::frame(f.bundle(), j);
        const Section r_chi = a.bracket(res.lift_f.apply(xi), res.lift_f.apply(xj)) -
                              res.lift_f.apply(f.bracket(xi, xj));
        const Section expect = res.graph.apply(zeta.apply(xi, xj));
        const Section diff = r_chi - expect;
        if (!diff.is_zero())
          curvature_res.push_back("(" + fn[i] + "," + fn[j] + "): " + diff.str());
        const Section killed = res.to_f.apply(r_chi);
        if (!killed.is_zero())
          killed_res.push_back("(" + fn[i] + "," + fn[j] + "): " + killed.str());
      }
    if (curvature_res.empty())
      report.add_pass("6.lift_curvature_is_graph_zeta");
    else
      report.add_fail("6.lift_curvature_is_graph_zeta", std::move(curvature_res));
    if (killed_res.empty())
      report.add_pass("6.to_f_kills_lift_curvature");
    else
      report.add_fail("6.to_f_kills_lift_curvature", std::move(killed_res));
  }

  // (7) proj_f must fail anchor preservation whenever rho_E != 0; the defect
  //     of rho_F(proj_f(u)) - rho_A(u) on the E-frame part is exactly -rho_E.
  {
    if (e.anchor_is_zero()) {
      report.add_skip("7.proj_f_not_anchored", "rho_E = 0, negative check skipped");
    } else {
      bool defect = false;
      for (std::size_t i = 0; i < m + r && !defect; ++i) {
        const Section u = Section::frame(a.bundle(), i);
        const VectorField diff =
            f.anchor_of(res.proj_f.apply(u)) - a.anchor_of(u);
        defect = defect || !diff.is_zero();
      }
      if (defect)
        report.add_pass("7.proj_f_not_anchored",
                        "proj_f fails anchor preservation, as it must");
      else
        report.add_fail("7.proj_f_not_anchored",
                        {"proj_f preserves anchors although rho_E != 0"});
    }
  }

  // (8) The connection and the basic connection on F through A-brackets:
  //     nabla_X mu = proj_e([lift X, embed mu]_A),
  //     nabla^bas_mu X = proj_f([embed mu, lift X]_A).
  {
    std::vector<std::string> residuals;
    for (std::size_t alpha = 0; alpha < m; ++alpha)
      for (std::size_t s = 0; s < r; ++s) {
        const Section x = Section::frame(f.bundle(), alpha);
        const Section mu = Section::frame(e.bundle(), s);
        const Section lhs1 = res.source.nabla().apply(x, mu);
        const Section rhs1 =
            res.proj_e.apply(a.bracket(res.lift_f.apply(x), res.embed_e.apply(mu)));
        const Section d1 = lhs1 - rhs1;
        if (!d1.is_zero())
          residuals.push_back("nabla (" + fn[alpha] + ";" + en[s] + "): " + d1.str());
        const Section lhs2 = basic_f(f, res.source.nabla(), res.source.k(), mu, x);
        const Section rhs2 =
            res.proj_f.apply(a.bracket(res.embed_e.apply(mu), res.lift_f.apply(x)));
        const Section d2 = lhs2 - rhs2;
        if (!d2.is_zero())
          residuals.push_back("basic (" + en[s] + ";" + fn[alpha] + "): " + d2.str());
      }
    if (residuals.empty())
      report.add_pass("8.connections_via_brackets");
    else
      report.add_fail("8.connections_via_brackets", std::move(residuals));
  }

  // (9) When the corrected connection is flat, the lift X -> (X,0) is an
  //     algebroid morphism up to the zeta correction of its bracket.
  {
    const FConnection nz = zeta_corrected(res.source);
    bool flat = true;
    for (std::size_t i = 0; i < m && flat; ++i)
      for (std::size_t j = i + 1; j < m && flat; ++j)
        for (std::size_t s = 0; s < r && flat; ++s)
          flat = nz.curvature(Section::frame(f.bundle(), i),
                              Section::frame(f.bundle(), j),
                              Section::frame(e.bundle(), s))
                     .is_zero();
    if (!flat) {
      report.add_skip("9.flat_corrected_lift", "corrected connection is not flat");
    } else {
      std::vector<std::string> residuals;
      for (std::size_t i = 0; i < m; ++i) {
        const Section xi = Section::frame(f.bundle(), i);
        const VectorField da =
            a.anchor_of(res.lift_f.apply(xi)) - f.anchor_of(xi);
        if (!da.is_zero())
          residuals.push_back("anchor " + fn[i] + ": " + da.str());
        for (std::size_t j = i + 1; j < m; ++j) {
          const Section xj = Section::frame(f.bundle(), j);
          const Section diff =
              a.bracket(res.lift_f.apply(xi), res.lift_f.apply(xj)) -
              res.graph.apply(zeta.apply(xi, xj)) -
              res.lift_f.apply(f.bracket(xi, xj));
          if (!diff.is_zero())
            residuals.push_back("(" + fn[i] + "," + fn[j] + "): " + diff.str());
        }
      }
      if (residuals.empty())
        report.add_pass("9.flat_corrected_lift");
      else
        report.add_fail("9.flat_corrected_lift", std::move(residuals));
    }
  }

  return report;
}

MackenzieResult mackenzie_extension(const LieAlgebroid& f, const FibrewiseBracket& h,
                                    const FConnection& nabla, const TwoForm& zeta) {
  Report report;
  const VectorBundle& eb = h.bundle();
  if (nabla.along() != f || nabla.on() != eb || zeta.domain() != f.bundle() ||
      zeta.values() != eb)
    throw ShapeError("fibrewise extension data shapes do not match");
  const std::size_t r = h.rank();
  const std::size_t m = f.rank();
  const auto& en = eb.frame_names();
  const auto& fn = f.bundle().frame_names();

  // Precondition 1: nabla h = 0 on frames.
  {
    std::vector<std::string> residuals;
    for (std::size_t alpha = 0; alpha < m; ++alpha)
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) {
          const Section x = Section::frame(f.bundle(), alpha);
          const Section mu = Section::frame(eb, a);
          const Section nu = Section::frame(eb, b);
          const Section res = nabla.apply(x, h.apply(mu, nu)) -
                              h.apply(nabla.apply(x, mu), nu) -
                              h.apply(mu, nabla.apply(x, nu));
          if (!res.is_zero())
            residuals.push_back("(" + fn[alpha] + ";" + en[a] + "," + en[b] + "): " +
                                res.str());
        }
    if (residuals.empty())
      report.add_pass("nabla_h");
    else
      report.add_fail("nabla_h", std::move(residuals));
  }
  // Precondition 2: R_nabla = ad_h(zeta) on frames.
  {
    std::vector<std::string> residuals;
    for (std::size_t alpha = 0; alpha < m; ++alpha)
      for (std::size_t beta = alpha + 1; beta < m; ++beta)
        for (std::size_t a = 0; a < r; ++a) {
          const Section x = Section::frame(f.bundle(), alpha);
          const Section y = Section::frame(f.bundle(), beta);
          const Section mu = Section::frame(eb, a);
          const Section res =
              nabla.curvature(x, y, mu) - h.apply(zeta.apply(x, y), mu);
          if (!res.is_zero())
            residuals.push_back("(" + fn[alpha] + "," + fn[beta] + ";" + en[a] + "): " +
                                res.str());
        }
    if (residuals.empty())
      report.add_pass("curvature_adjoint");
    else
      report.add_fail("curvature_adjoint", std::move(residuals));
  }
  // Precondition 3: d^nabla zeta = 0 on frame triples.
  {
    std::vector<std::string> residuals;
    for (std::size_t alpha = 0; alpha < m; ++alpha)
      for (std::size_t beta = alpha + 1; beta < m; ++beta)
        for (std::size_t gamma = beta + 1; gamma < m; ++gamma) {
          const Section res = d_zeta(nabla, zeta, Section::frame(f.bundle(), alpha),
                                     Section::frame(f.bundle(), beta),
                                     Section::frame(f.bundle(), gamma));
          if (!res.is_zero())
            residuals.push_back("(" + fn[alpha] + "," + fn[beta] + "," + fn[gamma] +
                                "): " + res.str());
        }
    if (residuals.empty())
      report.add_pass("primitive_closed");
    else
      report.add_fail("primitive_closed", std::move(residuals));
  }
  if (!report.passed()) return {std::nullopt, std::move(report)};

  // Route through the general construction with K = 0; the cross-check that
  // the direct fibrewise bracket form agrees is built into build_extension
  // (for K = 0 both displayed forms collapse to it).
  const LieAlgebroid e = h.as_algebroid();
  AdjustmentData d(e, f, BundleMorphism::zero(eb, f.bundle()), nabla, zeta);
  CheckedAdjustment checked = check_all(d);
  report.merge(checked.report, "adjustment.");
  if (!checked.data.all_pass()) return {std::nullopt, std::move(report)};

  ExtensionResult res = build_extension(checked.data);
  report.merge(res.report, "extension.");

  // Direct form of the bracket as a final guard: the F part must be [X,Y]_F
  // untouched.
  std::vector<std::string> direct;
  const std::size_t total = m + r;
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j)
      for (std::size_t c = 0; c < m; ++c) {
        const ScalarExpr expect = (i < m && j < m) ? f.structure_entry(i, j, c)
                                                   : ScalarExpr(e.patch().dimension());
        const ScalarExpr diff = res.a.structure_entry(i, j, c) - expect;
        if (!diff.is_zero())
          direct.push_back(res.a.bundle().frame_name(i) + "," +
                           res.a.bundle().frame_name(j) + " -> " +
                           res.a.bundle().frame_name(c));
      }
  if (direct.empty())
    report.add_pass("f_block_untwisted");
  else
    report.add_fail("f_block_untwisted", std::move(direct));

  res.report = report;
  return {std::move(res), std::move(report)};
}

std::string algebroid_to_model_text(const LieAlgebroid& a, const std::string& name) {
  std::ostringstream out;
  const auto& coords = a.patch().names();
  out << "patch " << name << "_patch {\n  coords";
  for (const auto& c : coords) out << " " << c;
  out << "\n}\n\n";
  out << "algebroid " << name << " {\n  patch " << name << "_patch\n  frame";
  for (const auto& fr : a.bundle().frame_names()) out << " " << fr;
  out << "\n";
  for (std::size_t x = 0; x < a.rank(); ++x)
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const ScalarExpr& entry = a.anchor_entry(x, i);
      if (entry.is_zero()) continue;
      out << "  anchor[" << a.bundle().frame_name(x) << "][" << coords[i]
          << "] = " << entry.str(coords) << "\n";
    }
  for (std::size_t i = 0; i < a.rank(); ++i)
    for (std::size_t j = i + 1; j < a.rank(); ++j) {
      bool nonzero = false;
      for (std::size_t c = 0; c < a.rank(); ++c)
        nonzero = nonzero || !a.structure_entry(i, j, c).is_zero();
      if (!nonzero) continue;
      out << "  bracket[" << a.bundle().frame_name(i) << "]["
          << a.bundle().frame_name(j) << "] = [";
      for (std::size_t c = 0; c < a.rank(); ++c) {
        if (c > 0) out << ", ";
        out << a.structure_entry(i, j, c).str(coords);
      }
      out << "]\n";
    }
  out << "}\n\ntask verify_algebroid " << name << "\n";
  return out.str();
}

} // namespace agd
