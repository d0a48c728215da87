#pragma once

#include <string>
#include <string_view>

#include "ergoplan/stl/formula.hpp"

namespace ergoplan::stl {

/// Text form of a formula:
///
///   (pred OFFSET (CHANNEL WEIGHT)...)   affine predicate
///   (not F) (and F F...) (or F F...)
///   (always LO HI F) (eventually LO HI F) (next LO HI F) (until LO HI F G)
///
/// Interval bounds are seconds. Numbers are printed with round-trip precision.
std::string to_sexpr(const Formula& formula);

/// Throws ParseError with a line:column location on malformed input.
Formula parse_sexpr(std::string_view text);

}  // namespace ergoplan::stl
