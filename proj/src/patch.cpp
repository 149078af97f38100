#include "agd/patch.hpp"

#include <set>

namespace agd {

CoordinatePatch::CoordinatePatch(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.empty()) throw ShapeError("a patch needs at least one coordinate");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ShapeError("empty coordinate name");
    if (!seen.insert(n).second)
      throw ShapeError("duplicate coordinate name '" + n + "'");
  }
}

std::optional<std::size_t> CoordinatePatch::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

} // namespace agd
