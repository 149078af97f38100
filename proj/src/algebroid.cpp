#include "agd/algebroid.hpp"

#include <sstream>

#include "agd/errors.hpp"

namespace agd {

namespace {

std::vector<std::vector<std::vector<ScalarExpr>>> checked_structure(
    const VectorBundle& bundle,
    std::vector<std::vector<std::vector<ScalarExpr>>> structure) {
  const std::size_t r = bundle.rank();
  const std::size_t n = bundle.patch().dimension();
  if (structure.size() != r)
    throw ShapeError("structure function table has wrong first dimension");
  for (const auto& row : structure) {
    if (row.size() != r)
      throw ShapeError("structure function table has wrong second dimension");
    for (const auto& comps : row) {
      if (comps.size() != r)
        throw ShapeError("structure function component list has wrong length");
      for (const auto& e : comps)
        if (e.nvars() != n)
          throw ShapeError("structure function over the wrong patch");
    }
  }
  return structure;
}

} // namespace

LieAlgebroid::LieAlgebroid(VectorBundle bundle,
                           std::vector<std::vector<ScalarExpr>> anchor,
                           std::vector<std::vector<std::vector<ScalarExpr>>> structure)
    : bundle_(std::move(bundle)),
      anchor_(std::move(anchor)),
      structure_(checked_structure(bundle_, std::move(structure))) {
  const std::size_t r = bundle_.rank();
  const std::size_t n = bundle_.patch().dimension();
  if (anchor_.size() != r) throw ShapeError("anchor matrix has wrong row count");
  for (const auto& row : anchor_) {
    if (row.size() != n) throw ShapeError("anchor row has wrong length");
    for (const auto& e : row)
      if (e.nvars() != n) throw ShapeError("anchor entry over the wrong patch");
  }
}

VectorField LieAlgebroid::anchor_of(const Section& mu) const {
  if (mu.bundle() != bundle_) throw ShapeError("anchor applied to foreign section");
  const std::size_t n = patch().dimension();
  std::vector<ScalarExpr> comps(n, ScalarExpr(n));
  for (std::size_t a = 0; a < rank(); ++a) {
    if (mu.comp(a).is_zero()) continue;
    for (std::size_t i = 0; i < n; ++i) comps[i] += mu.comp(a) * anchor_[a][i];
  }
  return VectorField(patch(), std::move(comps));
}

bool LieAlgebroid::anchor_is_zero() const {
  for (const auto& row : anchor_)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

BundleMorphism LieAlgebroid::anchor_as_morphism(const VectorBundle& tangent_bundle) const {
  if (tangent_bundle.patch() != patch() ||
      tangent_bundle.rank() != patch().dimension())
    throw ShapeError("anchor_as_morphism target is not a tangent-frame bundle");
  std::vector<std::vector<ScalarExpr>> m(
      tangent_bundle.rank(), std::vector<ScalarExpr>(rank(), ScalarExpr(patch().dimension())));
  for (std::size_t a = 0; a < rank(); ++a)
    for (std::size_t i = 0; i < patch().dimension(); ++i) m[i][a] = anchor_[a][i];
  return BundleMorphism(bundle_, tangent_bundle, std::move(m));
}

Section LieAlgebroid::bracket(const Section& mu, const Section& nu) const {
  if (mu.bundle() != bundle_ || nu.bundle() != bundle_)
    throw ShapeError("bracket of sections of a different bundle");
  const std::size_t r = rank();
  const std::size_t n = patch().dimension();
  std::vector<ScalarExpr> comps(r, ScalarExpr(n));
  for (std::size_t a = 0; a < r; ++a) {
    if (mu.comp(a).is_zero()) continue;
    for (std::size_t b = 0; b < r; ++b) {
      if (nu.comp(b).is_zero()) continue;
      const ScalarExpr f = mu.comp(a) * nu.comp(b);
      for (std::size_t c = 0; c < r; ++c) {
        if (structure_[a][b][c].is_zero()) continue;
        comps[c] += f * structure_[a][b][c];
      }
    }
  }
  const VectorField rho_mu = anchor_of(mu);
  const VectorField rho_nu = anchor_of(nu);
  for (std::size_t c = 0; c < r; ++c)
    comps[c] += rho_mu.apply(nu.comp(c)) - rho_nu.apply(mu.comp(c));
  return Section(bundle_, std::move(comps));
}

Report verify_algebroid(const LieAlgebroid& a) {
  Report report;
  const std::size_t r = a.rank();
  const auto& names = a.bundle().frame_names();

  std::vector<std::string> antisym;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      std::vector<ScalarExpr> res;
      res.reserve(r);
      bool zero = true;
      for (std::size_t c = 0; c < r; ++c) {
        ScalarExpr s = a.structure_entry(i, j, c) + a.structure_entry(j, i, c);
        zero = zero && s.is_zero();
        res.push_back(std::move(s));
      }
      if (!zero)
        antisym.push_back("[" + names[i] + "," + names[j] + "] + [" + names[j] +
                          "," + names[i] + "] = " +
                          Section(a.bundle(), res).str());
    }
  if (antisym.empty())
    report.add_pass("antisymmetry");
  else
    report.add_fail("antisymmetry", std::move(antisym));

  std::vector<std::string> anchor_res;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      const VectorField lhs =
          vf_bracket(a.anchor_of(Section::frame(a.bundle(), i)),
                     a.anchor_of(Section::frame(a.bundle(), j)));
      const VectorField rhs = a.anchor_of(
          a.bracket(Section::frame(a.bundle(), i), Section::frame(a.bundle(), j)));
      const VectorField diff = lhs - rhs;
      if (!diff.is_zero())
        anchor_res.push_back("(" + names[i] + "," + names[j] + "): " + diff.str());
    }
  if (anchor_res.empty())
    report.add_pass("anchor");
  else
    report.add_fail("anchor", std::move(anchor_res));

  std::vector<std::string> jacobi_res;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      for (std::size_t k = j + 1; k < r; ++k) {
        const Section ei = Section::frame(a.bundle(), i);
        const Section ej = Section::frame(a.bundle(), j);
        const Section ek = Section::frame(a.bundle(), k);
        const Section jac = a.bracket(a.bracket(ei, ej), ek) +
                            a.bracket(a.bracket(ej, ek), ei) +
                            a.bracket(a.bracket(ek, ei), ej);
        if (!jac.is_zero())
          jacobi_res.push_back("(" + names[i] + "," + names[j] + "," + names[k] +
                               "): " + jac.str());
      }
  if (jacobi_res.empty())
    report.add_pass("jacobi");
  else
    report.add_fail("jacobi", std::move(jacobi_res));

  return report;
}

LieAlgebroid tangent_algebroid(const CoordinatePatch& patch) {
  std::vector<std::string> frame;
  frame.reserve(patch.dimension());
  for (const auto& n : patch.names()) frame.push_back("d_" + n);
  return tangent_algebroid(patch, std::move(frame));
}

LieAlgebroid tangent_algebroid(const CoordinatePatch& patch,
                               std::vector<std::string> frame_names) {
  const std::size_t n = patch.dimension();
  if (frame_names.size() != n)
    throw ShapeError("tangent algebroid frame must have one name per coordinate");
  VectorBundle bundle(patch, std::move(frame_names));
  std::vector<std::vector<ScalarExpr>> anchor(n, std::vector<ScalarExpr>(n, ScalarExpr(n)));
  for (std::size_t i = 0; i < n; ++i)
    anchor[i][i] = ScalarExpr::constant(n, Rational(1));
  std::vector<std::vector<std::vector<ScalarExpr>>> structure(
      n, std::vector<std::vector<ScalarExpr>>(n, std::vector<ScalarExpr>(n, ScalarExpr(n))));
  return LieAlgebroid(std::move(bundle), std::move(anchor), std::move(structure));
}

LieAlgebroid action_algebroid(const VectorBundle& bundle,
                              const std::vector<std::vector<std::vector<Rational>>>& constants,
                              const std::vector<VectorField>& action_fields) {
  const std::size_t r = bundle.rank();
  const std::size_t n = bundle.patch().dimension();
  if (constants.size() != r)
    throw ShapeError("structure constant table has wrong dimension");
  for (const auto& row : constants) {
    if (row.size() != r) throw ShapeError("structure constant table has wrong dimension");
    for (const auto& comps : row)
      if (comps.size() != r)
        throw ShapeError("structure constant component list has wrong length");
  }
  if (action_fields.size() != r)
    throw ShapeError("one action field per frame element expected");
  for (const auto& x : action_fields)
    if (x.patch() != bundle.patch())
      throw ShapeError("action field over the wrong patch");

  std::ostringstream problems;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        if (constants[a][b][c] + constants[b][a][c] != 0)
          problems << "constants not antisymmetric at (" << a << "," << b << ")\n";
  // Jacobi identity of the constants.
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      for (std::size_t c = b + 1; c < r; ++c)
        for (std::size_t d = 0; d < r; ++d) {
          Rational jac(0);
          for (std::size_t e = 0; e < r; ++e)
            jac += constants[a][b][e] * constants[e][c][d] +
                   constants[b][c][e] * constants[e][a][d] +
                   constants[c][a][e] * constants[e][b][d];
          if (jac != 0)
            problems << "constants fail Jacobi at (" << a << "," << b << "," << c
                     << "), residual " << jac.str() << "\n";
        }
  // Action identity: [rho_a, rho_b] = c^c_ab rho_c.
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) {
      VectorField rhs = VectorField::zero(bundle.patch());
      for (std::size_t c = 0; c < r; ++c)
        rhs = rhs + action_fields[c].scaled(
                        ScalarExpr::constant(n, constants[a][b][c]));
      const VectorField diff = vf_bracket(action_fields[a], action_fields[b]) - rhs;
      if (!diff.is_zero())
        problems << "fields fail the action identity at (" << a << "," << b
                 << "), residual " << diff.str() << "\n";
    }
  const std::string msg = problems.str();
  if (!msg.empty()) throw Error("action algebroid data rejected:\n" + msg);

  std::vector<std::vector<ScalarExpr>> anchor(r, std::vector<ScalarExpr>(n, ScalarExpr(n)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t i = 0; i < n; ++i) anchor[a][i] = action_fields[a].comp(i);
  std::vector<std::vector<std::vector<ScalarExpr>>> structure(
      r, std::vector<std::vector<ScalarExpr>>(r, std::vector<ScalarExpr>(r, ScalarExpr(n))));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        structure[a][b][c] = ScalarExpr::constant(n, constants[a][b][c]);
  return LieAlgebroid(bundle, std::move(anchor), std::move(structure));
}

Report verify_morphism(const BundleMorphism& k, const LieAlgebroid& e,
                       const LieAlgebroid& f) {
  if (k.source() != e.bundle() || k.target() != f.bundle())
    throw ShapeError("morphism endpoints do not match the given algebroids");
  Report report;
  const std::size_t r = e.rank();
  const auto& names = e.bundle().frame_names();

  std::vector<std::string> anchor_res;
  for (std::size_t a = 0; a < r; ++a) {
    const Section ea = Section::frame(e.bundle(), a);
    const VectorField diff = f.anchor_of(k.apply(ea)) - e.anchor_of(ea);
    if (!diff.is_zero()) anchor_res.push_back(names[a] + ": " + diff.str());
  }
  if (anchor_res.empty())
    report.add_pass("anchor");
  else
    report.add_fail("anchor", std::move(anchor_res));

  std::vector<std::string> bracket_res;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) {
      const Section ea = Section::frame(e.bundle(), a);
      const Section eb = Section::frame(e.bundle(), b);
      const Section diff =
          k.apply(e.bracket(ea, eb)) - f.bracket(k.apply(ea), k.apply(eb));
      if (!diff.is_zero())
        bracket_res.push_back("(" + names[a] + "," + names[b] + "): " + diff.str());
    }
  if (bracket_res.empty())
    report.add_pass("bracket");
  else
    report.add_fail("bracket", std::move(bracket_res));

  return report;
}

FibrewiseBracket::FibrewiseBracket(
    VectorBundle bundle, std::vector<std::vector<std::vector<ScalarExpr>>> structure)
    : bundle_(std::move(bundle)),
      structure_(checked_structure(bundle_, std::move(structure))) {}

Section FibrewiseBracket::apply(const Section& mu, const Section& nu) const {
  if (mu.bundle() != bundle_ || nu.bundle() != bundle_)
    throw ShapeError("fibrewise bracket of sections of a different bundle");
  const std::size_t r = rank();
  const std::size_t n = bundle_.patch().dimension();
  std::vector<ScalarExpr> comps(r, ScalarExpr(n));
  for (std::size_t a = 0; a < r; ++a) {
    if (mu.comp(a).is_zero()) continue;
    for (std::size_t b = 0; b < r; ++b) {
      if (nu.comp(b).is_zero()) continue;
      const ScalarExpr f = mu.comp(a) * nu.comp(b);
      for (std::size_t c = 0; c < r; ++c) {
        if (structure_[a][b][c].is_zero()) continue;
        comps[c] += f * structure_[a][b][c];
      }
    }
  }
  return Section(bundle_, std::move(comps));
}

LieAlgebroid FibrewiseBracket::as_algebroid() const {
  const std::size_t n = bundle_.patch().dimension();
  std::vector<std::vector<ScalarExpr>> anchor(bundle_.rank(),
                                              std::vector<ScalarExpr>(n, ScalarExpr(n)));
  return LieAlgebroid(bundle_, std::move(anchor), structure_);
}

Report verify_fibrewise_bracket(const FibrewiseBracket& h) {
  Report report;
  const std::size_t r = h.rank();
  const auto& names = h.bundle().frame_names();

  std::vector<std::string> antisym;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j)
      for (std::size_t c = 0; c < r; ++c) {
        const ScalarExpr s = h.entry(i, j, c) + h.entry(j, i, c);
        if (!s.is_zero())
          antisym.push_back("H(" + names[i] + "," + names[j] + ") component " +
                            names[c] + ": " + s.str(h.bundle().patch().names()));
      }
  if (antisym.empty())
    report.add_pass("antisymmetry");
  else
    report.add_fail("antisymmetry", std::move(antisym));

  // Pointwise Jacobi: sum_e H^e_ab H^d_ec + cyclic = 0, an identity of the
  // structure functions with no derivative terms.
  std::vector<std::string> jacobi;
  const std::size_t n = h.bundle().patch().dimension();
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      for (std::size_t c = b + 1; c < r; ++c) {
        std::vector<ScalarExpr> res(r, ScalarExpr(n));
        bool zero = true;
        for (std::size_t d = 0; d < r; ++d) {
          for (std::size_t e = 0; e < r; ++e) {
            res[d] += h.entry(a, b, e) * h.entry(e, c, d) +
                      h.entry(b, c, e) * h.entry(e, a, d) +
                      h.entry(c, a, e) * h.entry(e, b, d);
          }
          zero = zero && res[d].is_zero();
        }
        if (!zero)
          jacobi.push_back("(" + names[a] + "," + names[b] + "," + names[c] +
                           "): " + Section(h.bundle(), res).str());
      }
  if (jacobi.empty())
    report.add_pass("jacobi");
  else
    report.add_fail("jacobi", std::move(jacobi));

  return report;
}

} // namespace agd
