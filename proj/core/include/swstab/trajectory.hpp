#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "swstab/classifier.hpp"

namespace swstab {

enum class Field { A, B };

std::string_view to_string(Field f) noexcept;

enum class ZLine { Plus, Minus };

std::string_view to_string(ZLine l) noexcept;

struct Sample {
  double t = 0.0;
  Vec2 state;
  Field active = Field::A;
};

/// Change of active field at time t. `line` is set when the switch happens
/// on a line of Z.
struct SwitchEvent {
  double t = 0.0;
  Field to = Field::A;
  std::optional<ZLine> line;
  Vec2 state;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<SwitchEvent> switch_events;
  /// |x| after each half-turn over |x| before it, in normal-form coordinates.
  std::vector<double> half_turn_ratios;
  bool rotating = false;
  std::optional<double> cone_entry_time;
  /// Set for ConstantU simulations, whose samples follow u A + (1 - u) B.
  std::optional<double> constant_u;
};

struct ZCrossing {
  double s = 0.0;
  ZLine line = ZLine::Plus;
};

/// Times in [0, s_max] at which the flow of m started at x crosses a line of
/// Z, in increasing order, at most `max_count` of them. A start point on Z
/// is reported as a root at 0. Roots are bisected to 1e-12 relative.
std::vector<ZCrossing> z_crossing_times(const Mat2& m, const ZSet& zset, const Vec2& x, double s_max,
                                        std::size_t max_count = 1, const Tolerances& tol = {});

struct WorstOptions {
  int max_half_turns = 10;
  /// Longest single arc, in normal-form time.
  double s_max = 1e4;
  /// Spacing of recorded samples, in normal-form time.
  double sample_dt = 0.05;
  bool samples = true;
};

/// Worst-case trajectory in normal-form coordinates and time. In the
/// rotating case (Delta > 0, direct, k < 0) x0 is moved onto D+ (same norm)
/// and the trajectory follows A from D+ to D- and B from D- to D+. Otherwise
/// the field with the larger radial cosine is followed, re-chosen at every
/// crossing of Z, until |x| < 1e-9 |x0| and, when a projective cone exists,
/// the cone has been entered. Throws PreconditionViolated for Delta < 0 and
/// inverse systems.
Trajectory worst_trajectory(const NormalForm& nf, const CollinearityData& coll, const Vec2& y0,
                            const WorstOptions& options = {}, const Tolerances& tol = {});

/// Maps a normal-form trajectory back to the caller's coordinates, time and
/// field labels.
Trajectory to_original_coordinates(const Trajectory& tr, const NormalForm& nf);

struct ConstantU {
  double u = 0.5;
};

/// Alternates A, B, A, ... with dwell times uniform in [dmin, dmax].
/// Samples are taken at multiples of sample_dt and at every switch.
struct RandomDwell {
  std::uint64_t seed = 1;
  double dmin = 0.1;
  double dmax = 1.0;
};

struct WorstCase {
  WorstOptions options;
};

using PolicySpec = std::variant<ConstantU, RandomDwell, WorstCase>;

/// Name of the generator and the uniform conversion used by RandomDwell.
inline constexpr std::string_view kRandomDwellGenerator = "mt19937_64-v1";

/// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw.
double unit_uniform(std::uint64_t bits) noexcept;

struct SimulateOptions {
  double horizon = 10.0;
  double sample_dt = 0.01;
  std::optional<double> stop_below;
  std::optional<double> stop_above;
  Tolerances tol;
};

/// Integrates in the caller's coordinates. WorstCase ignores horizon and
/// sample_dt in favour of its own options.
Trajectory simulate(const SystemPair& pair, const Vec2& x0, const PolicySpec& policy,
                    const SimulateOptions& options = {});

}  // namespace swstab
