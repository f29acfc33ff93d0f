#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gbmr {

/// Ordered best to worst.
enum class NotationColor : std::uint8_t { green, yellow, red };
enum class NotationGlyph : std::uint8_t { check, cross, none };

std::string_view to_string(NotationColor c);
std::string_view to_string(NotationGlyph g);
NotationColor parse_notation_color(std::string_view s);
NotationGlyph parse_notation_glyph(std::string_view s);

/// Operator feedback badge. Green always carries a check, red a cross.
struct NotationState {
  NotationColor color = NotationColor::red;
  NotationGlyph glyph = NotationGlyph::cross;
  std::string message;

  static NotationState green(std::string message) {
    return {NotationColor::green, NotationGlyph::check, std::move(message)};
  }
  static NotationState yellow(std::string message) {
    return {NotationColor::yellow, NotationGlyph::cross, std::move(message)};
  }
  static NotationState red(std::string message) {
    return {NotationColor::red, NotationGlyph::cross, std::move(message)};
  }

  bool consistent() const {
    if (color == NotationColor::green) return glyph == NotationGlyph::check;
    if (color == NotationColor::red) return glyph == NotationGlyph::cross;
    return glyph != NotationGlyph::check;
  }

  friend bool operator==(const NotationState&, const NotationState&) = default;
};

}  // namespace gbmr
