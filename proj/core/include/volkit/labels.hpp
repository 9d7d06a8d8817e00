#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace volkit::evaluate {

/// Direction of the next volatility move.
/// increase is the positive class for precision/recall/F1.
enum class ClassLabel { increase, decrease };

inline std::string to_string(ClassLabel c) {
  return c == ClassLabel::increase ? "I" : "II";
}

inline std::optional<ClassLabel> parse_label(std::string_view s) noexcept {
  if (s == "I") return ClassLabel::increase;
  if (s == "II") return ClassLabel::decrease;
  return std::nullopt;
}

}  // namespace volkit::evaluate
