#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/report.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "swstab/classifier.hpp"
#include "swstab/trajectory.hpp"

using namespace swstab;
using swstab::testing::Params;
using swstab::testing::Rng;
using swstab::testing::rel_err;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void fail(const std::string& what) {
    if (failures_++ < 3) first_ += (first_.empty() ? "" : "; ") + what;
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + first_};
  }

 private:
  int failures_ = 0;
  std::string first_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

CaseTag parse_tag(const std::string& s) {
  for (CaseTag t : {CaseTag::S1, CaseTag::Sminus1, CaseTag::R1, CaseTag::Rminus1, CaseTag::R0}) {
    if (to_string(t) == s) return t;
  }
  throw std::runtime_error("unknown case tag " + s);
}

Params nonsingular(Rng& rng) {
  constexpr CaseTag tags[] = {CaseTag::R1, CaseTag::Rminus1, CaseTag::R0};
  return swstab::testing::random_params(rng, tags[rng.integer(0, 2)]);
}

/// Largest relative error of the two collinearity identities, or nullopt
/// when Z is a single point.
std::optional<double> alpha_identity_error(const NormalForm& nf) {
  const ZSet z = slopes(nf.inv, nf.tag);
  if (std::holds_alternative<OriginOnly>(z)) return std::nullopt;
  const auto [ap, am] = alphas(nf, z);
  const double detA = det(nf.A_nf);
  const double product = det(nf.B_nf) / detA;
  const double sum = (2.0 * nf.inv.eta * nf.inv.rho - nf.inv.k) / detA;
  return std::max(rel_err(ap * am, product), rel_err(ap + am, sum));
}

Outcome collinearity_identities() {
  Rng rng(1001);
  Check c;
  double worst = 0.0;
  int n = 0;
  while (n < 10000) {
    const Params p = swstab::testing::random_params(rng);
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    if (discriminant_sign(nf.inv) < 0) continue;
    const auto err = alpha_identity_error(nf);
    if (!err) continue;
    ++n;
    worst = std::max(worst, *err);
    c.expect(*err <= 1e-9, "identity error " + fmt(*err) + " at eta=" + fmt(p.eta) + " rho=" + fmt(p.rho) +
                               " k=" + fmt(p.k));
  }
  return c.outcome(std::to_string(n) + " pairs with Delta >= 0, worst relative error " + fmt(worst));
}

double invariance_error(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return rel_err(got, want);
}

Outcome coordinate_invariance() {
  Rng rng(1002);
  Check c;
  double worst = 0.0;
  std::map<std::string, int> off_by_tag;
  int verdict_changes = 0;
  for (int i = 0; i < 1000; ++i) {
    const Params p = swstab::testing::random_params(rng);
    const auto e = swstab::testing::random_embedded(rng, p);
    const Analysis raw = analyze(e.pair);
    const Analysis canon = analyze(canonical_pair(p.tag, p.eta, p.rho, p.k));
    const auto& a = raw.nf->inv;
    const auto& b = canon.nf->inv;
    const double err = std::max({invariance_error(a.eta, b.eta), invariance_error(a.rho, b.rho),
                                 invariance_error(a.k, b.k),
                                 invariance_error(raw.collinearity->Delta, canon.collinearity->Delta)});
    worst = std::max(worst, err);
    if (err > 1e-7) {
      ++off_by_tag[std::string(to_string(p.tag))];
      c.fail("invariant error " + fmt(err) + " at case " + std::to_string(i) + " (" +
             std::string(to_string(p.tag)) + ", tau=" + fmt(e.tau) + ")");
    }
    if (raw.verdict.kind != canon.verdict.kind || raw.nf->tag != canon.nf->tag) {
      ++verdict_changes;
      c.fail("verdict or case changed at case " + std::to_string(i));
    }
  }
  Outcome o = c.outcome("1000 conjugated pairs, worst relative error " + fmt(worst));
  if (!o.pass) {
    std::string tags;
    for (const auto& [tag, n] : off_by_tag) tags += " " + tag + ":" + std::to_string(n);
    o.detail = "invariants off by case:" + (tags.empty() ? std::string(" none") : tags) + "; verdict changes: " +
               std::to_string(verdict_changes) + "; " + o.detail;
  }
  return o;
}

/// Analytic ratio against the RK4 half turn in normal-form coordinates.
double ratio_anchor_error(const Params& p, RatioBranch* branch, ThetaBranch* theta_branch) {
  const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
  const RatioR r = ratio_R(nf.inv, nf);
  const auto& lines = std::get<TwoLines>(slopes(nf.inv, nf.tag));
  const auto ht = swstab::testing::integrate_half_turn(nf.A_nf, nf.B_nf, lines.m_plus.direction(),
                                                       lines.m_minus.direction(), 1e-3);
  if (branch) *branch = r.branch;
  if (theta_branch) *theta_branch = r.theta_branch;
  return rel_err(r.R, ht.ratio);
}

Outcome ratio_anchoring() {
  Rng rng(1003);
  Check c;
  double worst = 0.0;
  int degenerate = 0;
  int half_pi = 0;
  int n = 0;
  auto run = [&](const Params& p, const char* family) {
    RatioBranch branch{};
    ThetaBranch tb{};
    const double err = ratio_anchor_error(p, &branch, &tb);
    ++n;
    degenerate += branch == RatioBranch::Degenerate;
    half_pi += tb == ThetaBranch::TrigHalfPi;
    worst = std::max(worst, err);
    c.expect(err <= 1e-8, std::string(family) + " error " + fmt(err) + " at eta=" + fmt(p.eta) +
                              " rho=" + fmt(p.rho) + " k=" + fmt(p.k));
  };
  for (int i = 0; i < 60; ++i) run(swstab::testing::random_rotating(rng, CaseTag::Rminus1), "R-1");
  for (int i = 0; i < 60; ++i) run(swstab::testing::random_rotating(rng, CaseTag::R1), "R1");
  for (int i = 0; i < 60; ++i) run(swstab::testing::random_rotating(rng, CaseTag::R0), "R0");
  for (int i = 0; i < 20; ++i) run(swstab::testing::random_degenerate_rotating(rng), "degenerate");
  for (int i = 0; i < 20; ++i) run(swstab::testing::random_half_pi_rotating(rng), "half-pi");
  c.expect(degenerate >= 20, "only " + std::to_string(degenerate) + " degenerate-branch systems");
  c.expect(half_pi >= 20, "only " + std::to_string(half_pi) + " half-pi systems");
  return c.outcome(std::to_string(n) + " rotating systems (" + std::to_string(degenerate) + " degenerate, " +
                   std::to_string(half_pi) + " at theta = pi/2), worst relative error " + fmt(worst));
}

Outcome golden_verdicts(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return {false, "cannot open " + path.string()};
  const json golden = json::parse(in);
  Check c;
  int n = 0;
  for (const auto& s : golden.at("systems")) {
    const std::string name = s.at("name");
    const CaseTag tag = parse_tag(s.at("tag"));
    const double eta = s.at("eta");
    const double rho = s.at("rho");
    const double k = s.at("k");
    const Analysis a = analyze(canonical_pair(tag, eta, rho, k));
    ++n;
    c.expect(to_string(a.verdict.kind) == s.at("verdict").get<std::string>(),
             name + ": verdict " + std::string(to_string(a.verdict.kind)));
    c.expect(certificate_name(a.verdict.certificate) == s.at("certificate").get<std::string>(),
             name + ": certificate " + std::string(certificate_name(a.verdict.certificate)));

    std::map<std::string, double> got;
    if (const auto* st = std::get_if<StaticInstability>(&a.verdict.certificate)) {
      got["u0"] = st->u0;
      got["unstable_eigenvalue"] = st->unstable_eigenvalue;
    }
    if (const auto* rr = std::get_if<RatioRotation>(&a.verdict.certificate)) {
      got["R"] = rr->ratio.R;
      got["t1"] = rr->ratio.t1;
      got["t2"] = rr->ratio.t2;
      const double oracle = ratio_anchor_error({tag, eta, rho, k}, nullptr, nullptr);
      c.expect(oracle <= 1e-8, name + ": R differs from the integrated half turn by " + fmt(oracle));
    }
    const json expect = s.value("expect", json::object());
    for (const auto& [key, spec] : expect.items()) {
      if (!got.count(key)) {
        c.fail(name + ": no value for " + key);
        continue;
      }
      const double want = spec.at("value");
      const double tol = spec.at("tol");
      c.expect(std::abs(got[key] - want) <= tol, name + ": " + key + " = " + fmt(got[key]));
    }
    if (s.contains("R_above")) {
      c.expect(got.count("R") && got["R"] > s.at("R_above").get<double>(), name + ": R not above threshold");
    }
  }

  // Closed forms for two of the pinned ratios, evaluated here rather than read.
  const double r_minus1 = std::numbers::sqrt2 * std::exp(-1.0 - 3.0 * std::numbers::pi / 4.0);
  const double s5 = std::sqrt(5.0);
  const double r_zero = std::abs((1.0 + s5) / (1.0 - s5)) * std::exp(-2.0 * s5);
  for (const auto& s : golden.at("systems")) {
    if (!s.contains("expect") || !s.at("expect").contains("R")) continue;
    const double pinned = s.at("expect").at("R").at("value");
    if (s.at("tag") == "R-1" && s.at("k") == -1.0 && s.at("eta") == -1.0 && s.at("rho") == -1.0) {
      c.expect(std::abs(pinned - r_minus1) <= 1e-12, "pinned R-1 ratio disagrees with its closed form");
    }
    if (s.at("tag") == "R0" && s.at("k") == -1.0) {
      c.expect(std::abs(pinned - r_zero) <= 1e-9, "pinned R0 ratio disagrees with its closed form");
    }
  }
  return c.outcome(std::to_string(n) + " golden systems");
}

double max_norm(const Trajectory& tr) {
  double m = 0.0;
  for (const auto& s : tr.samples) m = std::max(m, s.state.norm());
  for (const auto& e : tr.switch_events) m = std::max(m, e.state.norm());
  return m;
}

double final_norm(const Trajectory& tr) {
  double t = -1.0;
  double n = 0.0;
  for (const auto& s : tr.samples) {
    if (s.t >= t) t = s.t, n = s.state.norm();
  }
  for (const auto& e : tr.switch_events) {
    if (e.t >= t) t = e.t, n = e.state.norm();
  }
  return n;
}

/// Within 1% of the Delta = 0 boundary or 5% of R = 1, where decay and
/// growth rates go to zero and no fixed horizon separates the verdicts.
bool near_marginal(const Analysis& a) {
  if (!a.collinearity) return false;
  const double scale = discriminant_Delta_scale(a.nf->inv);
  if (std::abs(a.collinearity->Delta) < 1e-2 * scale) return true;
  const auto* rr = std::get_if<RatioRotation>(&a.verdict.certificate);
  return rr && std::abs(std::log(rr->ratio.R)) < 0.05;
}

Outcome simulator_agreement() {
  Rng rng(1005);
  Check c;
  int guas = 0;
  int unbounded = 0;
  int other = 0;
  int redrawn = 0;
  for (int i = 0; i < 500; ++i) {
    Params p;
    swstab::testing::Embedded e;
    Analysis a;
    for (;;) {
      p = swstab::testing::random_params(rng);
      e = swstab::testing::random_embedded(rng, p);
      a = analyze(e.pair);
      if (!near_marginal(a)) break;
      ++redrawn;
    }
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Vec2 x0 = rng.log_uniform(0.1, 10.0) * Vec2(std::cos(angle), std::sin(angle));
    const std::string where = "system " + std::to_string(i) + " (" + std::string(to_string(p.tag)) +
                              " eta=" + fmt(p.eta) + " rho=" + fmt(p.rho) + " k=" + fmt(p.k) + " " +
                              std::string(certificate_name(a.verdict.certificate)) + " Delta=" +
                              fmt(a.collinearity ? a.collinearity->Delta : 0.0) + ")";
    if (a.verdict.kind == VerdictKind::GUAS) {
      ++guas;
      SimulateOptions opt;
      opt.horizon = 200.0 / (e.tau * std::abs(std::max(p.eta, p.rho)));
      opt.sample_dt = opt.horizon;
      opt.stop_below = 1e-6 * x0.norm();
      for (int j = 0; j < 20; ++j) {
        const RandomDwell policy{rng.bits(), 0.05 / e.tau, 0.5 / e.tau};
        const Trajectory tr = simulate(e.pair, x0, policy, opt);
        const double n = final_norm(tr);
        c.expect(n < *opt.stop_below, where + ": random dwell ended at |x|/|x0| = " + fmt(n / x0.norm()));
      }
    } else if (a.verdict.kind == VerdictKind::Unbounded) {
      ++unbounded;
      const double bound = 1e6 * x0.norm();
      if (const auto* st = std::get_if<StaticInstability>(&a.verdict.certificate)) {
        SimulateOptions opt;
        opt.horizon = 3.0 * std::log(1e8) / st->unstable_eigenvalue;
        opt.sample_dt = opt.horizon / 100.0;
        opt.stop_above = bound;
        const double n = max_norm(simulate(e.pair, x0, ConstantU{st->u0}, opt));
        c.expect(n > bound, where + ": constant control reached only " + fmt(n / x0.norm()));
      } else {
        const auto& rr = std::get<RatioRotation>(a.verdict.certificate);
        WorstOptions w;
        w.samples = false;
        w.max_half_turns = static_cast<int>(std::ceil(std::log(1e6 * 1e3) / std::log(rr.ratio.R))) + 2;
        const double n = max_norm(simulate(e.pair, x0, WorstCase{w}, {}));
        c.expect(n > bound, where + ": worst trajectory reached only " + fmt(n / x0.norm()));
      }
    } else {
      ++other;
    }
  }
  return c.outcome("500 systems: " + std::to_string(guas) + " GUAS x 20 dwell runs, " + std::to_string(unbounded) +
                   " unbounded, " + std::to_string(other) + " uniformly stable; " + std::to_string(redrawn) +
                   " near-marginal draws replaced");
}

Outcome definite_guard() {
  Rng rng(1006);
  Check c;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Params p = nonsingular(rng);
    p.k = 2.0 * p.eta * p.rho;
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    const double err = rel_err(discriminant_Delta(nf.inv), -4.0 * det(nf.A_nf) * det(nf.B_nf));
    worst = std::max(worst, err);
    c.expect(discriminant_sign(nf.inv) < 0, "Delta not negative at case " + std::to_string(i));
    c.expect(err <= 1e-9, "Delta identity error " + fmt(err) + " at case " + std::to_string(i));
  }
  return c.outcome("10000 pairs with k = 2 eta rho, worst relative error " + fmt(worst));
}

/// k on the inverse side of Delta = 0, where Z is a single line.
Params semidefinite_instance(Rng& rng) {
  constexpr CaseTag tags[] = {CaseTag::R1, CaseTag::Rminus1, CaseTag::R0};
  Params p = swstab::testing::random_params(rng, tags[rng.integer(0, 2)]);
  const double s = delta_sign_of(p.tag);
  p.k = 2.0 * p.eta * p.rho + 2.0 * std::abs(p.eta) * std::sqrt(p.rho * p.rho - s);
  return p;
}

Outcome lyapunov_identities() {
  Rng rng(1007);
  Check c;
  int n = 0;
  double worst_identity = 0.0;
  double worst_line = 0.0;
  for (int i = 0; i < 60; ++i) {
    const Params p = semidefinite_instance(rng);
    const Analysis a = analyze(canonical_pair(p.tag, p.eta, p.rho, p.k));
    if (!std::holds_alternative<SemidefiniteLyapunov>(a.verdict.certificate)) {
      c.fail("instance " + std::to_string(i) + " classified as " +
             std::string(certificate_name(a.verdict.certificate)));
      continue;
    }
    ++n;
    const NormalForm& nf = *a.nf;
    for (int j = 0; j < 100; ++j) {
      const Vec2 x(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      const auto d = lyapunov_derivatives(nf, x);
      const double scale = std::max(1.0, std::max(std::abs(d.closed_A), std::abs(d.closed_B)));
      const double err = std::max(std::abs(d.along_A - d.closed_A), std::abs(d.along_B - d.closed_B)) / scale;
      worst_identity = std::max(worst_identity, err);
      c.expect(err <= 1e-10, "identity error " + fmt(err));
      c.expect(d.along_A <= 1e-12 * scale && d.along_B <= 1e-12 * scale, "positive derivative");

      const double x1 = rng.uniform(-1.0, 1.0);
      const auto on = lyapunov_derivatives(nf, Vec2(x1, -2.0 * p.eta * x1));
      const double v = std::max({std::abs(on.along_A), std::abs(on.along_B), std::abs(on.closed_A),
                                 std::abs(on.closed_B)});
      worst_line = std::max(worst_line, v);
      c.expect(v <= 1e-12, "on-line value " + fmt(v));
    }
  }
  c.expect(n >= 50, "only " + std::to_string(n) + " semidefinite instances");
  return c.outcome(std::to_string(n) + " instances x 100 points, worst identity error " + fmt(worst_identity) +
                   ", worst on-line value " + fmt(worst_line));
}

Mat2 random_shape(Rng& rng, int shape) {
  const double s = rng.uniform(-3.0, 1.0);
  const double b = rng.uniform(0.1, 3.0) * (rng.coin() ? 1.0 : -1.0);
  const double c = rng.uniform(0.1, 3.0) * (rng.coin() ? 1.0 : -1.0);
  switch (shape) {
    case 0: return {s, b, 0.0, s};
    case 1: return {s, 0.0, c, s};
    case 2: return {s, std::abs(b), -std::abs(c), s};
    case 3: return {s, std::abs(b), std::abs(c), s};
    default: return Mat2::diag(s, rng.uniform(-3.0, 1.0));
  }
}

Outcome expm_closed_forms() {
  Rng rng(1008);
  Check c;
  double worst = 0.0;
  auto compare = [&](const Mat2& m, double t) {
    const Mat2 want = expm_reference(m, t);
    const double err = max_abs_diff(expm_normal(m, t), want) / std::max(1.0, want.max_abs());
    worst = std::max(worst, err);
    c.expect(err <= 1e-12, "error " + fmt(err) + " at t=" + fmt(t));
  };
  for (int i = 0; i < 20000; ++i) compare(random_shape(rng, i % 5), rng.uniform(0.0, 4.0));
  for (int i = 0; i < 5000; ++i) {
    const Params p = swstab::testing::random_params(rng);
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    const double t = rng.uniform(0.0, 4.0);
    compare(nf.A_nf, t);
    compare(nf.B_nf, t);
  }
  return c.outcome("30000 matrices, worst error " + fmt(worst) + " (relative to max(1, |exp|))");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  Check c;
  const fs::path dir = fs::temp_directory_path() / "swstab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const SystemPair pair = canonical_pair(CaseTag::R1, -1.0, -2.0, -1.0);
  json in;
  in["A"] = {{pair.A.a11(), pair.A.a12()}, {pair.A.a21(), pair.A.a22()}};
  in["B"] = {{pair.B.a11(), pair.B.a12()}, {pair.B.a21(), pair.B.a22()}};
  std::ofstream(dir / "system.json") << in.dump();

  std::string csv[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = dir / ("run" + std::to_string(i) + ".csv");
    std::ostringstream o, e;
    const int code = cli::run_cli({"simulate", "--input", (dir / "system.json").string(), "--policy", "random",
                                   "--seed", "42", "--output", out.string()},
                                  o, e, {});
    c.expect(code == 0, "simulate exited with " + std::to_string(code) + ": " + e.str());
    csv[i] = slurp(out);
  }
  c.expect(!csv[0].empty() && csv[0] == csv[1], "CSV differs between runs");

  Rng rng(1009);
  int reports = 0;
  for (int i = 0; i < 300; ++i) {
    const Params p = swstab::testing::random_params(rng);
    const auto e = swstab::testing::random_embedded(rng, p);
    const cli::Report r = cli::make_report("system " + std::to_string(i), analyze(e.pair), {});
    const cli::Report back = cli::report_from_json(json::parse(cli::to_json(r).dump()));
    c.expect(back == r, "report " + std::to_string(i) + " does not round-trip");
    ++reports;
  }
  fs::remove_all(dir);
  return c.outcome(std::to_string(csv[0].size()) + "-byte CSV identical across runs; " + std::to_string(reports) +
                   " reports round-trip");
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path golden = argc > 1 ? fs::path(argv[1]) : fs::path("tests/golden/verdicts.json");
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "collinearity factor identities", 10.0, collinearity_identities},
      {2, "coordinate invariance", 10.0, coordinate_invariance},
      {3, "half-turn ratio anchoring", 30.0, ratio_anchoring},
      {4, "golden verdicts", 10.0, [&] { return golden_verdicts(golden); }},
      {5, "classifier and simulator agree", 300.0, simulator_agreement},
      {6, "k = 2 eta rho gives a definite form", 10.0, definite_guard},
      {7, "semidefinite Lyapunov identities", 10.0, lyapunov_identities},
      {8, "closed-form exponentials match the series", 10.0, expm_closed_forms},
      {9, "CLI determinism and report round trip", 10.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > cr.budget_s) {
      o = {false, o.detail + "; took " + fmt(secs) + " s, budget " + fmt(cr.budget_s) + " s"};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.name << " (" << fmt(secs)
              << " s): " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
