#include "mw/arithmetic.hpp"

namespace mw {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::fp64: return "fp64";
    case Mode::dw: return "dw";
    case Mode::qdw: return "qdw";
    case Mode::tw: return "tw";
    case Mode::qtw: return "qtw";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : all_modes) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

}  // namespace mw
