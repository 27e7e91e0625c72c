#include "swstab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "swstab/errors.hpp"

namespace swstab {

std::string_view to_string(Field f) noexcept { return f == Field::A ? "A" : "B"; }

std::string_view to_string(ZLine l) noexcept { return l == ZLine::Plus ? "D+" : "D-"; }

double unit_uniform(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

struct LineDir {
  Vec2 d;
  ZLine line;
};

std::vector<LineDir> z_lines(const ZSet& zset) {
  if (const auto* one = std::get_if<OneLine>(&zset)) return {{one->m0.direction(), ZLine::Plus}};
  if (const auto* two = std::get_if<TwoLines>(&zset)) {
    return {{two->m_plus.direction(), ZLine::Plus}, {two->m_minus.direction(), ZLine::Minus}};
  }
  return {};
}

Vec2 unit(const Vec2& v) { return (1.0 / v.norm()) * v; }

constexpr double kOnLine = 1e-12;

}  // namespace

std::vector<ZCrossing> z_crossing_times(const Mat2& m, const ZSet& zset, const Vec2& x, double s_max,
                                        std::size_t max_count, const Tolerances& tol) {
  std::vector<ZCrossing> out;
  const auto lines = z_lines(zset);
  if (lines.empty() || x.is_zero() || max_count == 0 || !(s_max > 0.0)) return out;

  // The direction of x(s) only depends on the traceless part.
  const Mat2 n = m - (0.5 * trace(m)) * Mat2::identity();
  const SpectralKind kind = spectral_kind(n, tol);
  auto flow = [&](const Vec2& y, double s) { return unit(expm_normal(n, kind, s, tol) * y); };

  Vec2 y = unit(x);
  std::vector<bool> armed(lines.size(), true);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (std::abs(cross(lines[i].d, y)) <= kOnLine) {
      out.push_back({0.0, lines[i].line});
      armed[i] = false;
    }
  }
  if (out.size() >= max_count) {
    out.resize(max_count);
    return out;
  }

  const double h = 0.02 / std::max(1.0, n.max_abs());
  double s = 0.0;
  double log_step = 1e-8;
  while (s < s_max && out.size() < max_count) {
    double next;
    if (log_step < h) {
      next = log_step;
      log_step *= 2.0;
    } else {
      next = s + h;
    }
    next = std::min(next, s_max);
    const double ds = next - s;
    const Vec2 y_next = flow(y, ds);

    std::vector<ZCrossing> found;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const Vec2& d = lines[i].d;
      if (!armed[i]) {
        armed[i] = true;
        continue;
      }
      const double g0 = cross(d, y);
      const double g1 = cross(d, y_next);
      if (g1 == 0.0) {
        found.push_back({next, lines[i].line});
        continue;
      }
      if (g0 == 0.0 || (g0 < 0.0) == (g1 < 0.0)) continue;
      double lo = 0.0;
      double hi = ds;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = cross(d, flow(y, mid));
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (g0 < 0.0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      found.push_back({s + 0.5 * (lo + hi), lines[i].line});
    }
    std::sort(found.begin(), found.end(), [](const ZCrossing& a, const ZCrossing& b) { return a.s < b.s; });
    for (const auto& c : found) {
      if (out.size() < max_count) out.push_back(c);
    }
    y = y_next;
    s = next;
  }
  return out;
}

namespace {

class Recorder {
 public:
  Recorder(Trajectory& tr, const WorstOptions& opt) : tr_(tr), opt_(opt) {}

  void point(double s, const Vec2& y, Field active) {
    if (!tr_.samples.empty() && tr_.samples.back().t >= s) {
      tr_.samples.back() = {s, y, active};
    } else {
      tr_.samples.push_back({s, y, active});
    }
  }

  void arc(const Mat2& m, Field active, const Vec2& y_start, double s_start, double length) {
    if (!opt_.samples || !(opt_.sample_dt > 0.0)) return;
    for (int j = 1;; ++j) {
      const double ds = j * opt_.sample_dt;
      if (ds >= length) break;
      point(s_start + ds, expm_normal(m, ds) * y_start, active);
    }
  }

 private:
  Trajectory& tr_;
  const WorstOptions& opt_;
};

std::optional<ZCrossing> first_positive(const Mat2& m, const ZSet& zset, const Vec2& y, double s_max,
                                        const Tolerances& tol) {
  for (std::size_t count = 1; count <= 3; ++count) {
    const auto found = z_crossing_times(m, zset, y, s_max, count, tol);
    if (found.size() < count) break;
    if (found.back().s > 0.0) return found.back();
  }
  return std::nullopt;
}

Vec2 line_direction(const TwoLines& lines, ZLine l) {
  return l == ZLine::Plus ? lines.m_plus.direction() : lines.m_minus.direction();
}

Trajectory rotating_worst(const NormalForm& nf, const CollinearityData& coll, const Vec2& y0,
                          const WorstOptions& opt, const Tolerances& tol) {
  const auto& lines = std::get<TwoLines>(coll.zset);
  Trajectory tr;
  tr.rotating = true;
  Recorder rec(tr, opt);

  const Vec2 dplus = lines.m_plus.direction();
  Vec2 y = (dot(dplus, y0) < 0.0 ? -y0.norm() : y0.norm()) * dplus;
  double s = 0.0;
  rec.point(s, y, Field::A);

  auto run_arc = [&](const Mat2& m, Field active, ZLine target) {
    const auto c = first_positive(m, coll.zset, y, opt.s_max, tol);
    if (!c) throw InternalInconsistency("worst trajectory: no crossing of Z within s_max");
    if (c->line != target) {
      throw InternalInconsistency(std::string("worst trajectory: flow of ") + std::string(to_string(active)) +
                                  " reached " + std::string(to_string(c->line)) + " before " +
                                  std::string(to_string(target)));
    }
    rec.arc(m, active, y, s, c->s);
    y = expm_normal(m, c->s) * y;
    s += c->s;
    const double miss = std::abs(cross(line_direction(lines, target), y));
    if (miss > 1e-10 * y.norm()) {
      std::ostringstream os;
      os.precision(17);
      os << "worst trajectory: end of arc is " << miss / y.norm() << " (relative) off " << to_string(target);
      throw InternalInconsistency(os.str());
    }
    const Field next = active == Field::A ? Field::B : Field::A;
    tr.switch_events.push_back({s, next, target, y});
    rec.point(s, y, next);
  };

  for (int h = 0; h < opt.max_half_turns; ++h) {
    const double before = y.norm();
    if (!(before > 1e-280)) break;
    run_arc(nf.A_nf, Field::A, ZLine::Minus);
    run_arc(nf.B_nf, Field::B, ZLine::Plus);
    tr.half_turn_ratios.push_back(y.norm() / before);
  }
  return tr;
}

double radial_cosine(const Mat2& m, const Vec2& y) {
  const Vec2 v = m * y;
  const double n = v.norm() * y.norm();
  return n == 0.0 ? 0.0 : dot(v, y) / n;
}

Trajectory greedy_worst(const NormalForm& nf, const CollinearityData& coll, const Vec2& y0, const WorstOptions& opt,
                        const Tolerances& tol) {
  Trajectory tr;
  Recorder rec(tr, opt);
  const auto& inv = nf.inv;
  std::optional<ConeArc> cone;
  if (coll.Delta_sign > 0 && inv.delta_sign > 0 && inv.k_sign > 0) {
    cone = projective_guas_check(nf, coll.zset, tol);
  }
  auto in_cone = [&](const Vec2& y) { return !cone || cone->arc.contains(line_angle(y)); };
  auto field = [&](Field f) -> const Mat2& { return f == Field::A ? nf.A_nf : nf.B_nf; };
  const double eps = 1e-6 / std::max({1.0, nf.A_nf.max_abs(), nf.B_nf.max_abs()});
  auto pick = [&](const Vec2& ahead) {
    return radial_cosine(nf.A_nf, ahead) >= radial_cosine(nf.B_nf, ahead) ? Field::A : Field::B;
  };

  const double threshold = 1e-9 * y0.norm();
  Vec2 y = y0;
  double s = 0.0;
  const Vec2 ahead0 = expm_normal(nf.A_nf, eps) * y;
  Field active = pick(ahead0);
  bool entered = in_cone(ahead0);
  if (entered && cone) tr.cone_entry_time = 0.0;
  rec.point(s, y, active);

  for (int events = 0; events < 10000; ++events) {
    if (entered && y.norm() < threshold) break;
    const Mat2& m = field(active);
    const auto c = first_positive(m, coll.zset, y, opt.s_max, tol);
    if (!c) {
      double end = std::min(1.0, opt.s_max);
      while (end < opt.s_max && !((expm_normal(m, end) * y).norm() < threshold)) end = std::min(2.0 * end, opt.s_max);
      rec.arc(m, active, y, s, end);
      y = expm_normal(m, end) * y;
      s += end;
      rec.point(s, y, active);
      break;
    }
    rec.arc(m, active, y, s, c->s);
    y = expm_normal(m, c->s) * y;
    s += c->s;
    const Vec2 ahead = expm_normal(m, eps) * y;
    if (!entered && in_cone(ahead)) {
      entered = true;
      tr.cone_entry_time = s;
    }
    const Field next = pick(ahead);
    if (next != active) {
      tr.switch_events.push_back({s, next, c->line, y});
      active = next;
    }
    rec.point(s, y, active);
  }
  return tr;
}

}  // namespace

Trajectory worst_trajectory(const NormalForm& nf, const CollinearityData& coll, const Vec2& y0,
                            const WorstOptions& options, const Tolerances& tol) {
  if (y0.is_zero()) throw PreconditionViolated("worst_trajectory: x0 must be nonzero");
  if (coll.Delta_sign < 0) throw PreconditionViolated("worst_trajectory: Z is the origin, no switching lines");
  if (coll.orientation == Orientation::Inverse) {
    throw PreconditionViolated("worst_trajectory: inverse system, the worst case is a constant convex control");
  }
  if (coll.Delta_sign > 0 && nf.inv.k_sign < 0) return rotating_worst(nf, coll, y0, options, tol);
  return greedy_worst(nf, coll, y0, options, tol);
}

Trajectory to_original_coordinates(const Trajectory& tr, const NormalForm& nf) {
  auto label = [&](Field f) {
    if (!nf.swapped) return f;
    return f == Field::A ? Field::B : Field::A;
  };
  Trajectory out;
  out.rotating = tr.rotating;
  out.half_turn_ratios = tr.half_turn_ratios;
  for (const auto& p : tr.samples) out.samples.push_back({p.t / nf.tau, nf.T * p.state, label(p.active)});
  for (const auto& e : tr.switch_events) {
    out.switch_events.push_back({e.t / nf.tau, label(e.to), e.line, nf.T * e.state});
  }
  if (tr.cone_entry_time) out.cone_entry_time = *tr.cone_entry_time / nf.tau;
  return out;
}

namespace {

bool should_stop(const Vec2& x, const SimulateOptions& opt) {
  const double n = x.norm();
  return (opt.stop_below && n < *opt.stop_below) || (opt.stop_above && n > *opt.stop_above);
}

Trajectory simulate_constant(const SystemPair& pair, const Vec2& x0, const ConstantU& p,
                             const SimulateOptions& opt) {
  if (!(p.u >= 0.0 && p.u <= 1.0)) throw PreconditionViolated("simulate: u must lie in [0, 1]");
  if (!(opt.sample_dt > 0.0)) throw PreconditionViolated("simulate: sample_dt must be positive");
  const Mat2 m = p.u * pair.A + (1.0 - p.u) * pair.B;
  const Field label = p.u >= 0.5 ? Field::A : Field::B;
  const Mat2 step = expm_reference(m, opt.sample_dt);
  Trajectory tr;
  tr.constant_u = p.u;
  Vec2 x = x0;
  double t = 0.0;
  tr.samples.push_back({t, x, label});
  for (long j = 1; t < opt.horizon && !should_stop(x, opt); ++j) {
    const double grid = static_cast<double>(j) * opt.sample_dt;
    if (grid < opt.horizon) {
      x = step * x;
      t = grid;
    } else {
      x = expm_reference(m, opt.horizon - t) * x;
      t = opt.horizon;
    }
    tr.samples.push_back({t, x, label});
  }
  return tr;
}

Trajectory simulate_dwell(const SystemPair& pair, const Vec2& x0, const RandomDwell& p, const SimulateOptions& opt) {
  if (!(p.dmin > 0.0 && p.dmax >= p.dmin)) throw PreconditionViolated("simulate: need 0 < dmin <= dmax");
  if (!(opt.sample_dt > 0.0)) throw PreconditionViolated("simulate: sample_dt must be positive");
  std::mt19937_64 gen(p.seed);
  Trajectory tr;
  Vec2 x = x0;
  double t = 0.0;
  Field active = Field::A;
  tr.samples.push_back({t, x, active});
  long next_grid = 1;
  while (t < opt.horizon && !should_stop(x, opt)) {
    double d = p.dmin + (p.dmax - p.dmin) * unit_uniform(gen());
    const bool last = d >= opt.horizon - t;
    if (last) d = opt.horizon - t;
    const Mat2& m = active == Field::A ? pair.A : pair.B;
    const double end = last ? opt.horizon : t + d;
    for (;; ++next_grid) {
      const double g = static_cast<double>(next_grid) * opt.sample_dt;
      if (g >= end) break;
      tr.samples.push_back({g, expm_reference(m, g - t) * x, active});
    }
    x = expm_reference(m, d) * x;
    t = end;
    if (!last) {
      active = active == Field::A ? Field::B : Field::A;
      tr.switch_events.push_back({t, active, std::nullopt, x});
    }
    tr.samples.push_back({t, x, active});
    if (static_cast<double>(next_grid) * opt.sample_dt == t) ++next_grid;
  }
  return tr;
}

Trajectory simulate_worst(const SystemPair& pair, const Vec2& x0, const WorstCase& p, const SimulateOptions& opt) {
  const Analysis a = analyze(pair, opt.tol);
  if (!a.nf) throw PreconditionViolated("simulate: a commuting pair has no worst trajectory");
  const Vec2 y0 = a.nf->T.inverse() * x0;
  return to_original_coordinates(worst_trajectory(*a.nf, *a.collinearity, y0, p.options, opt.tol), *a.nf);
}

}  // namespace

Trajectory simulate(const SystemPair& pair, const Vec2& x0, const PolicySpec& policy, const SimulateOptions& options) {
  return std::visit(
      [&](const auto& p) -> Trajectory {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantU>) {
          return simulate_constant(pair, x0, p, options);
        } else if constexpr (std::is_same_v<P, RandomDwell>) {
          return simulate_dwell(pair, x0, p, options);
        } else {
          return simulate_worst(pair, x0, p, options);
        }
      },
      policy);
}

}  // namespace swstab
