#pragma once

#include "semithermo/semigroup.hpp"

#include <string>

namespace semithermo {

/// Parses {"name": ..., "generators": [{"num": [[re, im], ...], "den": [...]}]}.
/// Coefficients ascend in degree; a bare number is a real coefficient and a
/// missing "den" means 1. Throws ParseError (with line and column for
/// malformed JSON) or ValidationError.
SemigroupSpec parse_spec_text(const std::string& text, const std::string& origin = "<string>");
SemigroupSpec parse_spec(const std::string& path);

/// Inverse of parse_spec_text, at 17 significant digits.
std::string spec_to_json(const SemigroupSpec& spec);

} // namespace semithermo
