#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agd/errors.hpp"

namespace agd {

/// Coordinate patch: an ordered list of pairwise distinct coordinate names.
/// This is the local model every bundle, field and algebroid lives over.
class CoordinatePatch {
public:
  explicit CoordinatePatch(std::vector<std::string> names);

  std::size_t dimension() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const CoordinatePatch& o) const = default;

private:
  std::vector<std::string> names_;
};

} // namespace agd
