#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swstab/classifier.hpp"

namespace swstab::cli {

std::string_view tool_version() noexcept;

struct InvariantsReport {
  double eta = 0.0;
  double rho = 0.0;
  double k = 0.0;
  double delta = 0.0;
  double Delta = 0.0;

  bool operator==(const InvariantsReport&) const = default;
};

/// One line of Z. An empty value is the vertical line.
struct SlopeReport {
  std::string line;
  std::optional<double> value;

  bool operator==(const SlopeReport&) const = default;
};

struct Report {
  std::string label;
  std::optional<InvariantsReport> invariants;
  std::optional<std::string> case_tag;
  std::optional<std::string> orientation;
  std::vector<SlopeReport> slopes;
  bool swapped = false;
  std::string verdict;
  std::string certificate_kind;
  nlohmann::json certificate = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::vector<Decision> decisions;
  std::string tool_version;
  Tolerances tolerances;

  bool operator==(const Report&) const = default;
};

nlohmann::json certificate_payload(const Certificate& c);

Report make_report(const std::string& label, const Analysis& analysis, const Tolerances& tol);

nlohmann::json to_json(const Report& r);
/// Throws nlohmann::json::exception on a document that is not a report.
Report report_from_json(const nlohmann::json& j);

std::string to_text(const Report& r, bool color);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace swstab::cli
