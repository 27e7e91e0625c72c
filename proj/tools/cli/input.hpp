#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "swstab/invariants.hpp"

namespace swstab::cli {

/// Malformed input document. The message carries the source name and, for
/// syntax errors, line and column.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputDocument {
  SystemPair pair;
  std::string label;
};

/// Parses {"A": [[a11, a12], [a21, a22]], "B": [[...], [...]], "label": "..."}.
InputDocument parse_input(std::string_view text, const std::string& source);

InputDocument read_input(const std::filesystem::path& path);

}  // namespace swstab::cli
