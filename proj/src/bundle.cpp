#include "agd/bundle.hpp"

#include <set>
#include <sstream>

#include "agd/errors.hpp"

namespace agd {

VectorBundle::VectorBundle(CoordinatePatch patch, std::vector<std::string> frame_names)
    : patch_(std::move(patch)), frame_(std::move(frame_names)) {
  std::set<std::string> seen;
  for (const auto& n : frame_) {
    if (n.empty()) throw ShapeError("empty frame name");
    if (!seen.insert(n).second)
      throw ShapeError("duplicate frame name '" + n + "'");
  }
}

std::optional<std::size_t> VectorBundle::index_of(std::string_view name) const {
  for (std::size_t a = 0; a < frame_.size(); ++a)
    if (frame_[a] == name) return a;
  return std::nullopt;
}

Section::Section(VectorBundle bundle, std::vector<ScalarExpr> components)
    : bundle_(std::move(bundle)), comps_(std::move(components)) {
  if (comps_.size() != bundle_.rank())
    throw ShapeError("section has " + std::to_string(comps_.size()) +
                     " components, bundle rank is " + std::to_string(bundle_.rank()));
  for (const auto& c : comps_)
    if (c.nvars() != bundle_.patch().dimension())
      throw ShapeError("section component over the wrong patch");
}

Section Section::zero(const VectorBundle& b) {
  return Section(b, std::vector<ScalarExpr>(b.rank(), ScalarExpr(b.patch().dimension())));
}

Section Section::frame(const VectorBundle& b, std::size_t a) {
  if (a >= b.rank()) throw ShapeError("frame index out of range");
  std::vector<ScalarExpr> comps(b.rank(), ScalarExpr(b.patch().dimension()));
  comps[a] = ScalarExpr::constant(b.patch().dimension(), Rational(1));
  return Section(b, std::move(comps));
}

bool Section::is_zero() const {
  for (const auto& c : comps_)
    if (!c.is_zero()) return false;
  return true;
}

Section Section::operator+(const Section& o) const {
  if (bundle_ != o.bundle_) throw ShapeError("section addition across bundles");
  std::vector<ScalarExpr> comps;
  comps.reserve(comps_.size());
  for (std::size_t a = 0; a < comps_.size(); ++a) comps.push_back(comps_[a] + o.comps_[a]);
  return Section(bundle_, std::move(comps));
}

Section Section::operator-(const Section& o) const {
  if (bundle_ != o.bundle_) throw ShapeError("section subtraction across bundles");
  std::vector<ScalarExpr> comps;
  comps.reserve(comps_.size());
  for (std::size_t a = 0; a < comps_.size(); ++a) comps.push_back(comps_[a] - o.comps_[a]);
  return Section(bundle_, std::move(comps));
}

Section Section::operator-() const {
  std::vector<ScalarExpr> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_) comps.push_back(-c);
  return Section(bundle_, std::move(comps));
}

Section Section::scaled(const ScalarExpr& f) const {
  std::vector<ScalarExpr> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_) comps.push_back(c * f);
  return Section(bundle_, std::move(comps));
}

std::string Section::str() const {
  return linear_combination_str(comps_, bundle_.frame_names(), bundle_.patch().names());
}

VectorField::VectorField(CoordinatePatch patch, std::vector<ScalarExpr> components)
    : patch_(std::move(patch)), comps_(std::move(components)) {
  if (comps_.size() != patch_.dimension())
    throw ShapeError("vector field component count differs from patch dimension");
  for (const auto& c : comps_)
    if (c.nvars() != patch_.dimension())
      throw ShapeError("vector field component over the wrong patch");
}

VectorField VectorField::zero(const CoordinatePatch& p) {
  return VectorField(p, std::vector<ScalarExpr>(p.dimension(), ScalarExpr(p.dimension())));
}

VectorField VectorField::coordinate(const CoordinatePatch& p, std::size_t i) {
  if (i >= p.dimension()) throw ShapeError("coordinate index out of range");
  std::vector<ScalarExpr> comps(p.dimension(), ScalarExpr(p.dimension()));
  comps[i] = ScalarExpr::constant(p.dimension(), Rational(1));
  return VectorField(p, std::move(comps));
}

bool VectorField::is_zero() const {
  for (const auto& c : comps_)
    if (!c.is_zero()) return false;
  return true;
}

ScalarExpr VectorField::apply(const ScalarExpr& f) const {
  if (f.nvars() != patch_.dimension())
    throw ShapeError("function over the wrong patch in vector field action");
  ScalarExpr acc(patch_.dimension());
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (comps_[i].is_zero()) continue;
    acc += comps_[i] * f.partial(i);
  }
  return acc;
}

VectorField VectorField::operator+(const VectorField& o) const {
  if (patch_ != o.patch_) throw ShapeError("vector field addition across patches");
  std::vector<ScalarExpr> comps;
  comps.reserve(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) comps.push_back(comps_[i] + o.comps_[i]);
  return VectorField(patch_, std::move(comps));
}

VectorField VectorField::operator-(const VectorField& o) const {
  if (patch_ != o.patch_) throw ShapeError("vector field subtraction across patches");
  std::vector<ScalarExpr> comps;
  comps.reserve(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) comps.push_back(comps_[i] - o.comps_[i]);
  return VectorField(patch_, std::move(comps));
}

VectorField VectorField::scaled(const ScalarExpr& f) const {
  std::vector<ScalarExpr> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_) comps.push_back(c * f);
  return VectorField(patch_, std::move(comps));
}

std::string VectorField::str() const {
  std::vector<std::string> basis;
  basis.reserve(patch_.dimension());
  for (const auto& n : patch_.names()) basis.push_back("d_" + n);
  return linear_combination_str(comps_, basis, patch_.names());
}

VectorField vf_bracket(const VectorField& x, const VectorField& y) {
  if (x.patch() != y.patch()) throw ShapeError("vector field bracket across patches");
  const std::size_t n = x.dimension();
  std::vector<ScalarExpr> comps;
  comps.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    comps.push_back(x.apply(y.comp(i)) - y.apply(x.comp(i)));
  return VectorField(x.patch(), std::move(comps));
}

BundleMorphism::BundleMorphism(VectorBundle source, VectorBundle target,
                               std::vector<std::vector<ScalarExpr>> matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (source_.patch() != target_.patch())
    throw ShapeError("bundle morphism across patches");
  if (matrix_.size() != target_.rank())
    throw ShapeError("morphism matrix row count differs from target rank");
  for (const auto& row : matrix_)
    if (row.size() != source_.rank())
      throw ShapeError("morphism matrix column count differs from source rank");
}

BundleMorphism BundleMorphism::zero(const VectorBundle& source, const VectorBundle& target) {
  std::vector<std::vector<ScalarExpr>> m(
      target.rank(),
      std::vector<ScalarExpr>(source.rank(), ScalarExpr(source.patch().dimension())));
  return BundleMorphism(source, target, std::move(m));
}

BundleMorphism BundleMorphism::identity(const VectorBundle& bundle) {
  const std::size_t n = bundle.patch().dimension();
  std::vector<std::vector<ScalarExpr>> m(
      bundle.rank(), std::vector<ScalarExpr>(bundle.rank(), ScalarExpr(n)));
  for (std::size_t a = 0; a < bundle.rank(); ++a)
    m[a][a] = ScalarExpr::constant(n, Rational(1));
  return BundleMorphism(bundle, bundle, std::move(m));
}

bool BundleMorphism::is_zero() const {
  for (const auto& row : matrix_)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

Section BundleMorphism::apply(const Section& mu) const {
  if (mu.bundle() != source_) throw ShapeError("morphism applied to foreign section");
  const std::size_t n = source_.patch().dimension();
  std::vector<ScalarExpr> comps(target_.rank(), ScalarExpr(n));
  for (std::size_t t = 0; t < target_.rank(); ++t)
    for (std::size_t s = 0; s < source_.rank(); ++s) {
      if (matrix_[t][s].is_zero() || mu.comp(s).is_zero()) continue;
      comps[t] += matrix_[t][s] * mu.comp(s);
    }
  return Section(target_, std::move(comps));
}

Section BundleMorphism::column(std::size_t s) const {
  std::vector<ScalarExpr> comps;
  comps.reserve(target_.rank());
  for (std::size_t t = 0; t < target_.rank(); ++t) comps.push_back(matrix_[t][s]);
  return Section(target_, std::move(comps));
}

BundleMorphism BundleMorphism::compose(const BundleMorphism& inner) const {
  if (inner.target_ != source_)
    throw ShapeError("morphism composition shape mismatch");
  const std::size_t n = source_.patch().dimension();
  std::vector<std::vector<ScalarExpr>> m(
      target_.rank(), std::vector<ScalarExpr>(inner.source_.rank(), ScalarExpr(n)));
  for (std::size_t t = 0; t < target_.rank(); ++t)
    for (std::size_t s = 0; s < inner.source_.rank(); ++s)
      for (std::size_t k = 0; k < source_.rank(); ++k)
        m[t][s] += matrix_[t][k] * inner.matrix_[k][s];
  return BundleMorphism(inner.source_, target_, std::move(m));
}

BundleMorphism BundleMorphism::operator+(const BundleMorphism& o) const {
  if (source_ != o.source_ || target_ != o.target_)
    throw ShapeError("morphism addition shape mismatch");
  auto m = matrix_;
  for (std::size_t t = 0; t < m.size(); ++t)
    for (std::size_t s = 0; s < m[t].size(); ++s) m[t][s] += o.matrix_[t][s];
  return BundleMorphism(source_, target_, std::move(m));
}

BundleMorphism BundleMorphism::operator-(const BundleMorphism& o) const {
  if (source_ != o.source_ || target_ != o.target_)
    throw ShapeError("morphism subtraction shape mismatch");
  auto m = matrix_;
  for (std::size_t t = 0; t < m.size(); ++t)
    for (std::size_t s = 0; s < m[t].size(); ++s) m[t][s] -= o.matrix_[t][s];
  return BundleMorphism(source_, target_, std::move(m));
}

std::string linear_combination_str(const std::vector<ScalarExpr>& comps,
                                   const std::vector<std::string>& basis_names,
                                   const std::vector<std::string>& coord_names) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t a = 0; a < comps.size(); ++a) {
    const ScalarExpr& c = comps[a];
    if (c.is_zero()) continue;
    // Single-monomial polynomial coefficients read fine inline; everything
    // else gets parenthesized.
    std::string piece;
    bool negative = false;
    if (c.is_polynomial() && c.num().term_count() == 1) {
      const auto& [e, k] = *c.num().terms().begin();
      negative = k < 0;
      ScalarExpr mag = negative ? -c : c;
      if (mag.is_one()) {
        piece = basis_names[a];
      } else {
        piece = mag.str(coord_names) + "*" + basis_names[a];
      }
    } else {
      piece = "(" + c.str(coord_names) + ")*" + basis_names[a];
    }
    if (first) {
      out << (negative ? "-" : "") << piece;
      first = false;
    } else {
      out << (negative ? " - " : " + ") << piece;
    }
  }
  if (first) return "0";
  return out.str();
}

} // namespace agd
