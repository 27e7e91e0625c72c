#include "swstab/tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swstab {

double zero_threshold(double scale, double tol) {
  return tol * std::max(1.0, std::abs(scale));
}

bool near_zero(double q, double scale, double tol) {
  return std::abs(q) <= zero_threshold(scale, tol);
}

int sign_with_tolerance(double q, double scale, double tol) {
  if (near_zero(q, scale, tol)) return 0;
  return q > 0.0 ? 1 : -1;
}

Decision make_decision(std::string quantity, double value, double scale, double tol) {
  Decision d;
  d.quantity = std::move(quantity);
  d.value = value;
  d.threshold = zero_threshold(scale, tol);
  d.treated_as_zero = std::abs(value) <= d.threshold;
  d.fragile = value != 0.0 && std::abs(value) <= 10.0 * d.threshold;
  return d;
}

std::string fragile_warning(const Decision& d) {
  std::ostringstream os;
  os.precision(17);
  os << "fragile classification: " << d.quantity << " = " << d.value
     << " is within 10x of the zero threshold " << d.threshold << " (treated as "
     << (d.treated_as_zero ? "zero" : "nonzero") << ")";
  return os.str();
}

std::vector<std::string> fragile_warnings(const std::vector<Decision>& decisions) {
  std::vector<std::string> out;
  for (const auto& d : decisions) {
    if (d.fragile) out.push_back(fragile_warning(d));
  }
  return out;
}

}  // namespace swstab
