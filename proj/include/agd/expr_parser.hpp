#pragma once

#include <string_view>

#include "agd/patch.hpp"
#include "agd/scalar_expr.hpp"

namespace agd {

// Parses an expression over the patch coordinates into canonical form.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' natural)?
//   base   := integer | identifier | '(' expr ')' | '-' factor
//
// Whitespace is insignificant. Rationals are written p/q (parsed as exact
// division). Identifiers must be coordinate names; anything else is an
// UnknownNameError, which is how non-rational functions are rejected.
// line_offset shifts reported positions when the text is embedded in a file.
ScalarExpr parse_expr(std::string_view text, const CoordinatePatch& patch,
                      int line_offset = 0);

} // namespace agd
