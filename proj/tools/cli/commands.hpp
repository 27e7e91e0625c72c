#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace swstab::cli {

struct Environment {
  bool stdout_is_terminal = false;
  /// NO_COLOR is set to a non-empty value.
  bool no_color = false;
};

Environment environment_from_process();

/// Exit codes: 0 success (an Unbounded verdict is a success), 1 malformed
/// input, non-Hurwitz matrix or bad arguments, 2 input outside the handled
/// class or a request the verdict makes meaningless.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const Environment& env = {});

}  // namespace swstab::cli
