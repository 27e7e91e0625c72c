#pragma once

#include <string>
#include <vector>

namespace swstab {

/// Thresholds used to turn exact case splits (delta = 0, k = 0, Delta = 0,
/// R = 1) into floating-point decisions.
struct Tolerances {
  /// A quantity q is zero when |q| <= degenerate * max(1, scale).
  double degenerate = 1e-9;
  /// R is treated as 1 when |R - 1| <= ratio * max(1, R).
  double ratio = 1e-9;

  bool operator==(const Tolerances&) const = default;
};

/// Absolute threshold for a quantity whose natural magnitude is `scale`.
double zero_threshold(double scale, double tol);

bool near_zero(double q, double scale, double tol);

/// Sign of q with everything inside the zero threshold mapped to 0.
int sign_with_tolerance(double q, double scale, double tol);

/// One near-zero decision made while classifying. `fragile` marks values
/// that are nonzero but within 10x of the threshold, where the verdict is
/// sensitive to rounding.
struct Decision {
  std::string quantity;
  double value = 0.0;
  double threshold = 0.0;
  bool treated_as_zero = false;
  bool fragile = false;

  bool operator==(const Decision&) const = default;
};

Decision make_decision(std::string quantity, double value, double scale, double tol);

/// Human-readable warning for a fragile decision.
std::string fragile_warning(const Decision& d);

std::vector<std::string> fragile_warnings(const std::vector<Decision>& decisions);

}  // namespace swstab
