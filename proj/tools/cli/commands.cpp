#include "cli/commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/csv.hpp"
#include "cli/input.hpp"
#include "cli/report.hpp"
#include "swstab/errors.hpp"
#include "swstab/trajectory.hpp"

namespace swstab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

Environment environment_from_process() {
  Environment env;
  env.stdout_is_terminal = ::isatty(STDOUT_FILENO) != 0;
  const char* nc = std::getenv("NO_COLOR");
  env.no_color = nc != nullptr && *nc != '\0';
  return env;
}

namespace {

/// The request is well-formed but meaningless for this system.
class Refused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input;
  std::string output;
  std::string format = "json";
  double tol_degenerate = Tolerances{}.degenerate;
  double tol_ratio = Tolerances{}.ratio;

  Tolerances tolerances() const { return {tol_degenerate, tol_ratio}; }
};

void add_common(CLI::App* cmd, Common& c, bool input_required = true) {
  auto* in = cmd->add_option("--input", c.input, "Input file (directory or list file for batch)");
  if (input_required) in->required();
  cmd->add_option("--output", c.output, "Write to this file instead of standard output");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--tol-degenerate", c.tol_degenerate, "Zero threshold for delta, k and Delta")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-ratio", c.tol_ratio, "Threshold for R == 1")->check(CLI::PositiveNumber);
}

void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::random_device rd;
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw fs::filesystem_error("cannot open for writing", tmp, std::make_error_code(std::errc::io_error));
    f << text;
    f.flush();
    if (!f) throw fs::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw fs::filesystem_error("cannot rename into place", path, ec);
  }
}

struct Io {
  std::ostream& out;
  std::ostream& err;
  const Environment& env;

  void emit(const Common& c, const std::string& text) const {
    if (c.output.empty()) {
      out << text;
    } else {
      write_atomic(c.output, text);
    }
  }

  bool color(const Common& c) const { return c.output.empty() && env.stdout_is_terminal && !env.no_color; }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json mat_json(const Mat2& m) { return json::array({{m.a11(), m.a12()}, {m.a21(), m.a22()}}); }

Vec2 parse_x0(const std::vector<double>& v) {
  if (v.size() != 2) throw InputError("--x0 needs two numbers");
  const Vec2 x{v[0], v[1]};
  if (x.is_zero()) throw InputError("--x0 must be nonzero");
  return x;
}

int cmd_classify(const Common& c, const Io& io) {
  const auto doc = read_input(c.input);
  const Tolerances tol = c.tolerances();
  const Report r = make_report(doc.label, analyze(doc.pair, tol), tol);
  io.emit(c, c.format == "json" ? dump(to_json(r)) : to_text(r, io.color(c)));
  return 0;
}

int cmd_normal_form(const Common& c, const Io& io) {
  const auto doc = read_input(c.input);
  const Tolerances tol = c.tolerances();
  const Analysis a = analyze(doc.pair, tol);
  if (!a.nf) throw Refused("A and B commute; there is no normal form (the system is GUAS)");
  const NormalForm& nf = *a.nf;
  if (c.format == "json") {
    json j;
    j["label"] = doc.label;
    j["case"] = to_string(nf.tag);
    j["swapped"] = nf.swapped;
    j["tau"] = nf.tau;
    j["T"] = mat_json(nf.T);
    j["A_nf"] = mat_json(nf.A_nf);
    j["B_nf"] = mat_json(nf.B_nf);
    j["residual"] = nf.residual;
    j["invariants"] = {{"eta", nf.inv.eta}, {"rho", nf.inv.rho}, {"k", nf.inv.k}, {"delta", nf.inv.delta}};
    j["tool_version"] = tool_version();
    j["tolerances"] = {{"degenerate", tol.degenerate}, {"ratio", tol.ratio}};
    io.emit(c, dump(j));
    return 0;
  }
  auto row = [](const Mat2& m) {
    return "[[" + format_double(m.a11()) + ", " + format_double(m.a12()) + "], [" + format_double(m.a21()) + ", " +
           format_double(m.a22()) + "]]";
  };
  std::ostringstream os;
  if (!doc.label.empty()) os << "label:    " << doc.label << "\n";
  os << "case:     " << to_string(nf.tag) << (nf.swapped ? " (A and B swapped)" : "") << "\n";
  os << "tau:      " << format_double(nf.tau) << "\n";
  os << "T:        " << row(nf.T) << "\n";
  os << "A_nf:     " << row(nf.A_nf) << "\n";
  os << "B_nf:     " << row(nf.B_nf) << "\n";
  os << "residual: " << format_double(nf.residual) << "\n";
  io.emit(c, os.str());
  return 0;
}

/// Throws Refused unless the worst trajectory is defined.
void require_worst_defined(const Analysis& a) {
  if (!a.nf) throw Refused("A and B commute; every trajectory decays and there is no worst trajectory");
  const auto& coll = *a.collinearity;
  if (coll.Delta_sign < 0) throw Refused("Delta < 0: Z is the origin and the worst trajectory is undefined");
  if (coll.orientation == Orientation::Inverse) {
    std::string cert = std::string(certificate_name(a.verdict.certificate));
    throw Refused("inverse system: the worst trajectory is undefined; the certificate is " + cert);
  }
}

struct WorstArgs {
  std::vector<double> x0{1.0, 0.0};
  int half_turns = 5;
};

int cmd_worst(const Common& c, const WorstArgs& w, const Io& io) {
  const auto doc = read_input(c.input);
  const Tolerances tol = c.tolerances();
  const Vec2 x0 = parse_x0(w.x0);
  const Analysis a = analyze(doc.pair, tol);
  require_worst_defined(a);
  WorstOptions opt;
  opt.max_half_turns = w.half_turns;
  SimulateOptions sim;
  sim.tol = tol;
  const Trajectory tr = simulate(doc.pair, x0, WorstCase{opt}, sim);

  const auto* ratio = std::get_if<RatioRotation>(&a.verdict.certificate);
  const std::string verdict(to_string(a.verdict.kind));
  std::string summary;
  if (c.format == "json") {
    json j;
    j["label"] = doc.label;
    j["rotating"] = tr.rotating;
    j["R_analytic"] = ratio ? json(ratio->ratio.R) : json(nullptr);
    j["R_measured"] = tr.half_turn_ratios;
    j["verdict"] = verdict;
    j["certificate"] = certificate_name(a.verdict.certificate);
    j["cone_entry_time"] = tr.cone_entry_time ? json(*tr.cone_entry_time) : json(nullptr);
    summary = dump(j);
  } else {
    std::ostringstream os;
    if (tr.rotating) {
      os << "rotating; R analytic = " << (ratio ? format_double(ratio->ratio.R) : "n/a") << "; R measured =";
      for (double q : tr.half_turn_ratios) os << " " << format_double(q);
      os << "; " << verdict << "\n";
    } else {
      os << "non-rotating; " << verdict;
      if (std::holds_alternative<ProjectiveCone>(a.verdict.certificate)) os << " (projective cone)";
      os << "\n";
    }
    summary = os.str();
  }

  const std::string csv = to_csv(tr);
  if (c.output.empty()) {
    io.out << csv;
    io.err << summary;
  } else {
    write_atomic(c.output, csv);
    io.out << summary;
  }
  return 0;
}

struct SimulateArgs {
  std::string policy = "random";
  double u = 0.5;
  std::uint64_t seed = 1;
  double dwell_min = 0.05;
  double dwell_max = 0.5;
  double t_max = 10.0;
  double dt = 0.01;
  std::vector<double> x0{1.0, 0.0};
  int half_turns = 5;
};

int cmd_simulate(const Common& c, const SimulateArgs& s, const Io& io) {
  const auto doc = read_input(c.input);
  const Vec2 x0 = parse_x0(s.x0);
  SimulateOptions opt;
  opt.horizon = s.t_max;
  opt.sample_dt = s.dt;
  opt.tol = c.tolerances();
  if (!(s.t_max > 0.0) || !(s.dt > 0.0)) throw PreconditionViolated("--t-max and --dt must be positive");
  PolicySpec policy;
  if (s.policy == "constant") {
    policy = ConstantU{s.u};
  } else if (s.policy == "random") {
    policy = RandomDwell{s.seed, s.dwell_min, s.dwell_max};
  } else {
    require_worst_defined(analyze(doc.pair, opt.tol));
    WorstOptions w;
    w.max_half_turns = s.half_turns;
    policy = WorstCase{w};
  }
  io.emit(c, to_csv(simulate(doc.pair, x0, policy, opt)));
  return 0;
}

struct BatchRow {
  std::string file;
  std::optional<Report> report;
  std::string error;
  bool input_error = false;
};

std::vector<fs::path> batch_inputs(const fs::path& p) {
  std::vector<fs::path> files;
  if (fs::is_directory(p)) {
    for (const auto& e : fs::directory_iterator(p)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
  }
  std::ifstream in(p);
  if (!in) throw fs::filesystem_error("cannot open batch input", p, std::make_error_code(std::errc::no_such_file_or_directory));
  std::string line;
  while (std::getline(in, line)) {
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty() || line.front() == '#') continue;
    fs::path f(line);
    files.push_back(f.is_absolute() ? f : p.parent_path() / f);
  }
  return files;
}

int cmd_batch(const Common& c, const Io& io) {
  const Tolerances tol = c.tolerances();
  std::vector<BatchRow> rows;
  for (const auto& f : batch_inputs(c.input)) {
    BatchRow row;
    row.file = f.string();
    try {
      const auto doc = read_input(f);
      row.report = make_report(doc.label, analyze(doc.pair, tol), tol);
    } catch (const InputError& e) {
      row.error = e.what();
      row.input_error = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) io.err << "warning: no input systems found in " << c.input << "\n";

  std::map<std::string, int> counts{{"GUAS", 0}, {"UniformlyStableNotGUAS", 0}, {"Unbounded", 0}, {"error", 0}};
  for (const auto& r : rows) ++counts[r.report ? r.report->verdict : "error"];

  if (c.format == "json") {
    json j;
    j["rows"] = json::array();
    for (const auto& r : rows) {
      json row{{"file", r.file}};
      if (r.report) {
        row["status"] = "ok";
        row["report"] = to_json(*r.report);
      } else {
        row["status"] = "error";
        row["error"] = r.error;
      }
      j["rows"].push_back(row);
    }
    j["summary"] = counts;
    j["tool_version"] = tool_version();
    io.emit(c, dump(j));
  } else {
    std::ostringstream os;
    for (const auto& r : rows) {
      os << r.file << "\t";
      if (r.report) {
        os << r.report->verdict << "\t" << r.report->certificate_kind << "\t" << r.report->case_tag.value_or("-");
      } else {
        os << "error\t" << r.error;
      }
      os << "\n";
    }
    for (const auto& [k, n] : counts) os << k << ": " << n << "\n";
    io.emit(c, os.str());
  }
  const bool any_input_error = std::any_of(rows.begin(), rows.end(), [](const BatchRow& r) { return r.input_error; });
  return any_input_error ? 1 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  CLI::App app{"Stability classification of planar switched linear systems with a nondiagonalizable mode", "swstab"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  Common classify_c, nf_c, worst_c, sim_c, batch_c;
  WorstArgs worst_a;
  SimulateArgs sim_a;

  auto* classify = app.add_subcommand("classify", "Classify the system and print a report");
  add_common(classify, classify_c);

  auto* normal = app.add_subcommand("normal-form", "Print the normal form and the change of coordinates");
  add_common(normal, nf_c);

  auto* worst = app.add_subcommand("worst", "Write the worst trajectory as CSV and print a summary");
  add_common(worst, worst_c);
  worst->add_option("--x0", worst_a.x0, "Initial state x1,x2")->delimiter(',')->expected(2);
  worst->add_option("--half-turns", worst_a.half_turns, "Half-turns to follow when rotating")
      ->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "Simulate a switching policy and write CSV");
  add_common(sim, sim_c);
  sim->add_option("--policy", sim_a.policy, "Switching policy")
      ->check(CLI::IsMember({"constant", "random", "worst"}));
  sim->add_option("--u", sim_a.u, "Weight on A for the constant policy")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--seed", sim_a.seed, "Seed for the random policy");
  sim->add_option("--dwell-min", sim_a.dwell_min, "Shortest dwell time")->check(CLI::PositiveNumber);
  sim->add_option("--dwell-max", sim_a.dwell_max, "Longest dwell time")->check(CLI::PositiveNumber);
  sim->add_option("--t-max", sim_a.t_max, "Time horizon")->check(CLI::PositiveNumber);
  sim->add_option("--dt", sim_a.dt, "Sample spacing")->check(CLI::PositiveNumber);
  sim->add_option("--x0", sim_a.x0, "Initial state x1,x2")->delimiter(',')->expected(2);
  sim->add_option("--half-turns", sim_a.half_turns, "Half-turns for the worst policy")->check(CLI::PositiveNumber);

  auto* batch = app.add_subcommand("batch", "Classify every system in a directory or list file");
  add_common(batch, batch_c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const Io io{out, err, env};
  try {
    if (*classify) return cmd_classify(classify_c, io);
    if (*normal) return cmd_normal_form(nf_c, io);
    if (*worst) return cmd_worst(worst_c, worst_a, io);
    if (*sim) return cmd_simulate(sim_c, sim_a, io);
    if (*batch) return cmd_batch(batch_c, io);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NotHurwitz& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const OutOfScope& e) {
    err << "out of scope: " << e.what() << "\n";
    return 2;
  } catch (const Refused& e) {
    err << "refused: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionViolated& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NonFiniteValue& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace swstab::cli
