#include "cli/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace swstab::cli {

using nlohmann::json;

std::string_view tool_version() noexcept { return SWSTAB_VERSION; }

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json certificate_payload(const Certificate& c) {
  return std::visit(
      [](const auto& v) -> json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, StaticInstability>) {
          return {{"u0", v.u0}, {"unstable_eigenvalue", v.unstable_eigenvalue}};
        } else if constexpr (std::is_same_v<V, RatioRotation>) {
          return {{"R", v.ratio.R},
                  {"t1", v.ratio.t1},
                  {"t2", v.ratio.t2},
                  {"branch", to_string(v.ratio.branch)},
                  {"theta_branch", to_string(v.ratio.theta_branch)}};
        } else if constexpr (std::is_same_v<V, ProjectiveCone>) {
          return {{"arc_from", v.cone.arc.from},
                  {"arc_to", v.cone.arc.to},
                  {"b_eigen_angle", v.cone.b_eigen_angle},
                  {"b_eigen_sign", v.cone.b_eigen_sign}};
        } else if constexpr (std::is_same_v<V, SemidefiniteLyapunov>) {
          return {{"v11", v.v11}, {"v22", v.v22}};
        } else {
          return json::object();
        }
      },
      c);
}

namespace {

void add_slope(std::vector<SlopeReport>& out, const std::string& name, const ProjectiveSlope& s) {
  out.push_back({name, s.is_infinite() ? std::nullopt : std::optional<double>(s.value())});
}

json slope_value(const std::optional<double>& v) { return v ? json(*v) : json("inf"); }

}  // namespace

Report make_report(const std::string& label, const Analysis& a, const Tolerances& tol) {
  Report r;
  r.label = label;
  r.swapped = a.swapped;
  if (a.nf) {
    const auto& inv = a.nf->inv;
    r.invariants = InvariantsReport{inv.eta, inv.rho, inv.k, inv.delta, a.collinearity->Delta};
    r.case_tag = std::string(to_string(a.nf->tag));
    r.orientation = std::string(to_string(a.collinearity->orientation));
    const ZSet& z = a.collinearity->zset;
    if (const auto* one = std::get_if<OneLine>(&z)) {
      add_slope(r.slopes, "m0", one->m0);
    } else if (const auto* two = std::get_if<TwoLines>(&z)) {
      add_slope(r.slopes, "m+", two->m_plus);
      add_slope(r.slopes, "m-", two->m_minus);
    }
  }
  r.verdict = std::string(to_string(a.verdict.kind));
  r.certificate_kind = std::string(certificate_name(a.verdict.certificate));
  r.certificate = certificate_payload(a.verdict.certificate);
  r.warnings = a.verdict.warnings;
  r.decisions = a.decisions;
  r.tool_version = std::string(tool_version());
  r.tolerances = tol;
  return r;
}

json to_json(const Report& r) {
  json j;
  j["label"] = r.label;
  if (r.invariants) {
    const auto& i = *r.invariants;
    j["invariants"] = {{"eta", i.eta}, {"rho", i.rho}, {"k", i.k}, {"delta", i.delta}, {"Delta", i.Delta}};
  } else {
    j["invariants"] = nullptr;
  }
  j["case"] = r.case_tag ? json(*r.case_tag) : json(nullptr);
  j["orientation"] = r.orientation ? json(*r.orientation) : json(nullptr);
  j["slopes"] = json::array();
  for (const auto& s : r.slopes) j["slopes"].push_back({{"line", s.line}, {"value", slope_value(s.value)}});
  j["swapped"] = r.swapped;
  j["verdict"] = r.verdict;
  j["certificate"] = {{"kind", r.certificate_kind}, {"payload", r.certificate}};
  j["warnings"] = r.warnings;
  j["decisions"] = json::array();
  for (const auto& d : r.decisions) {
    j["decisions"].push_back({{"quantity", d.quantity},
                              {"value", d.value},
                              {"threshold", d.threshold},
                              {"treated_as_zero", d.treated_as_zero},
                              {"fragile", d.fragile}});
  }
  j["tool_version"] = r.tool_version;
  j["tolerances"] = {{"degenerate", r.tolerances.degenerate}, {"ratio", r.tolerances.ratio}};
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  r.label = j.at("label").get<std::string>();
  if (!j.at("invariants").is_null()) {
    const auto& i = j.at("invariants");
    r.invariants = InvariantsReport{i.at("eta").get<double>(), i.at("rho").get<double>(), i.at("k").get<double>(),
                                    i.at("delta").get<double>(), i.at("Delta").get<double>()};
  }
  if (!j.at("case").is_null()) r.case_tag = j.at("case").get<std::string>();
  if (!j.at("orientation").is_null()) r.orientation = j.at("orientation").get<std::string>();
  for (const auto& s : j.at("slopes")) {
    const auto& v = s.at("value");
    r.slopes.push_back({s.at("line").get<std::string>(),
                        v.is_string() ? std::nullopt : std::optional<double>(v.get<double>())});
  }
  r.swapped = j.at("swapped").get<bool>();
  r.verdict = j.at("verdict").get<std::string>();
  r.certificate_kind = j.at("certificate").at("kind").get<std::string>();
  r.certificate = j.at("certificate").at("payload");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& d : j.at("decisions")) {
    r.decisions.push_back({d.at("quantity").get<std::string>(), d.at("value").get<double>(),
                           d.at("threshold").get<double>(), d.at("treated_as_zero").get<bool>(),
                           d.at("fragile").get<bool>()});
  }
  r.tool_version = j.at("tool_version").get<std::string>();
  r.tolerances.degenerate = j.at("tolerances").at("degenerate").get<double>();
  r.tolerances.ratio = j.at("tolerances").at("ratio").get<double>();
  return r;
}

std::string to_text(const Report& r, bool color) {
  std::ostringstream os;
  const char* on = "";
  const char* off = "";
  if (color) {
    on = r.verdict == "GUAS" ? "\x1b[32m" : r.verdict == "Unbounded" ? "\x1b[31m" : "\x1b[33m";
    off = "\x1b[0m";
  }
  if (!r.label.empty()) os << "label:       " << r.label << "\n";
  os << "verdict:     " << on << r.verdict << off << "\n";
  os << "certificate: " << r.certificate_kind;
  for (const auto& [key, value] : r.certificate.items()) {
    os << " " << key << "=" << (value.is_number() ? format_double(value.get<double>()) : value.dump());
  }
  os << "\n";
  if (r.case_tag) os << "case:        " << *r.case_tag << (r.swapped ? " (A and B swapped)" : "") << "\n";
  if (r.invariants) {
    const auto& i = *r.invariants;
    os << "invariants:  eta=" << format_double(i.eta) << " rho=" << format_double(i.rho)
       << " k=" << format_double(i.k) << " delta=" << format_double(i.delta) << " Delta=" << format_double(i.Delta)
       << "\n";
  }
  if (r.orientation) os << "orientation: " << *r.orientation << "\n";
  if (!r.slopes.empty()) {
    os << "slopes:     ";
    for (const auto& s : r.slopes) os << " " << s.line << "=" << (s.value ? format_double(*s.value) : "inf");
    os << "\n";
  }
  for (const auto& w : r.warnings) os << "warning:     " << w << "\n";
  os << "tolerances:  degenerate=" << format_double(r.tolerances.degenerate)
     << " ratio=" << format_double(r.tolerances.ratio) << "\n";
  os << "version:     " << r.tool_version << "\n";
  return os.str();
}

}  // namespace swstab::cli
