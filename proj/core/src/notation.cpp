#include "gbmr/notation.hpp"

#include "gbmr/common.hpp"

namespace gbmr {

std::string_view to_string(NotationColor c) {
  switch (c) {
    case NotationColor::green: return "green";
    case NotationColor::yellow: return "yellow";
    case NotationColor::red: return "red";
  }
  return "unknown";
}

std::string_view to_string(NotationGlyph g) {
  switch (g) {
    case NotationGlyph::check: return "check";
    case NotationGlyph::cross: return "cross";
    case NotationGlyph::none: return "none";
  }
  return "unknown";
}

NotationColor parse_notation_color(std::string_view s) {
  if (s == "green") return NotationColor::green;
  if (s == "yellow") return NotationColor::yellow;
  if (s == "red") return NotationColor::red;
  throw Error(ErrorCode::parse_error, "unknown notation color '" + std::string(s) + "'");
}

NotationGlyph parse_notation_glyph(std::string_view s) {
  if (s == "check") return NotationGlyph::check;
  if (s == "cross") return NotationGlyph::cross;
  if (s == "none") return NotationGlyph::none;
  throw Error(ErrorCode::parse_error, "unknown notation glyph '" + std::string(s) + "'");
}

}  // namespace gbmr
