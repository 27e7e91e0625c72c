#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "swstab/collinearity.hpp"
#include "swstab/invariants.hpp"

namespace swstab {

enum class ThetaBranch { TrigArctan, TrigHalfPi, Hyperbolic, Parabolic };

std::string_view to_string(ThetaBranch b) noexcept;

/// Duration of the B-arc of the worst trajectory, from D- to D+.
struct ThetaValue {
  double theta = 0.0;
  ThetaBranch branch = ThetaBranch::TrigArctan;

  bool operator==(const ThetaValue&) const = default;
};

/// Requires Delta > 0 and k < 0. In the complex case the arctangent is taken
/// on the branch in (0, pi), which is the first positive B-flow time from D-
/// to D+.
ThetaValue theta(const InvariantTriple& inv, double Delta, const Tolerances& tol = {});

enum class RatioBranch { Generic, Degenerate };

std::string_view to_string(RatioBranch b) noexcept;

/// Half-turn norm ratio of the worst trajectory in the rotating regular case.
/// Times are in normal-form units.
struct RatioR {
  double R = 0.0;
  /// A-arc duration, D+ to D-.
  double t1 = 0.0;
  /// B-arc duration, D- to D+.
  double t2 = 0.0;
  RatioBranch branch = RatioBranch::Generic;
  ThetaBranch theta_branch = ThetaBranch::TrigArctan;

  bool operator==(const RatioR&) const = default;
};

/// Requires Delta > 0, k < 0 (so k < 2 eta rho).
RatioR ratio_R(const InvariantTriple& inv, const NormalForm& nf, const Tolerances& tol = {});

/// Constant convex control that destabilises an inverse system.
struct StaticInstabilityData {
  double u0 = 0.0;
  double det_M = 0.0;
  double unstable_eigenvalue = 0.0;
};

/// Requires Delta > 0 and k > 2 eta rho. Works in normal-form coordinates:
/// M(u0) = u0 A_nf + (1 - u0) B_nf.
StaticInstabilityData static_instability_certificate(const NormalForm& nf, std::pair<double, double> alphas,
                                                     const Tolerances& tol = {});

/// Derivatives of V(x) = x1^2 + x2^2 / (4 eta^2) along A_nf x and B_nf x,
/// next to their closed forms (x2 + 2 eta x1)^2 / (2 eta) and
/// rho (x2 + 2 eta x1)^2 / (2 eta^2).
struct LyapunovDerivatives {
  double along_A = 0.0;
  double along_B = 0.0;
  double closed_A = 0.0;
  double closed_B = 0.0;
};

LyapunovDerivatives lyapunov_derivatives(const NormalForm& nf, const Vec2& x);

/// Requires Delta == 0 and k > 2 eta rho. Checks both identities and their
/// sign at 100 pseudo-random points.
bool semidefinite_lyapunov_check(const NormalForm& nf, const Tolerances& tol = {});

/// Arc of the projective line containing A's eigendirection (angle 0) and
/// an eigendirection of B; trajectories that enter the cone over it stay.
struct ConeArc {
  ProjectiveArc arc;
  /// Angle in [0, pi) of the B eigendirection (1, +k) or (1, -k) found inside.
  double b_eigen_angle = 0.0;
  /// +1 for (1, k), -1 for (1, -k).
  int b_eigen_sign = 1;

  bool operator==(const ConeArc& o) const {
    return arc.from == o.arc.from && arc.to == o.arc.to && b_eigen_angle == o.b_eigen_angle &&
           b_eigen_sign == o.b_eigen_sign;
  }
};

/// Requires Delta > 0, delta > 0, 0 < k < 2 eta rho. Returns nullopt when
/// neither eigendirection of B lies in the component of A's eigendirection.
std::optional<ConeArc> projective_guas_check(const NormalForm& nf, const ZSet& zset, const Tolerances& tol = {});

enum class VerdictKind { GUAS, UniformlyStableNotGUAS, Unbounded };

std::string_view to_string(VerdictKind k) noexcept;

/// Z = {0}.
struct DefiniteQ {
  bool operator==(const DefiniteQ&) const = default;
};
/// u0 is the weight on the caller's A and the eigenvalue is in the caller's
/// time scale, so the certificate applies to the input pair as given.
struct StaticInstability {
  double u0 = 0.0;
  double unstable_eigenvalue = 0.0;
  bool operator==(const StaticInstability&) const = default;
};
struct RatioRotation {
  RatioR ratio;
  bool operator==(const RatioRotation&) const = default;
};
/// Angles are in normal-form coordinates.
struct ProjectiveCone {
  ConeArc cone;
  bool operator==(const ProjectiveCone&) const = default;
};
/// V(x) = v11 x1^2 + v22 x2^2 in normal-form coordinates.
struct SemidefiniteLyapunov {
  double v11 = 1.0;
  double v22 = 0.0;
  bool operator==(const SemidefiniteLyapunov&) const = default;
};
struct SingularCase {
  bool operator==(const SingularCase&) const = default;
};
/// Delta == 0 with Z direct: the two lines coincide and never force a turn.
struct CoincidentDirect {
  bool operator==(const CoincidentDirect&) const = default;
};
struct Commuting {
  bool operator==(const Commuting&) const = default;
};

using Certificate = std::variant<DefiniteQ, StaticInstability, RatioRotation, ProjectiveCone, SemidefiniteLyapunov,
                                 SingularCase, CoincidentDirect, Commuting>;

std::string_view certificate_name(const Certificate& c) noexcept;

struct Verdict {
  VerdictKind kind = VerdictKind::GUAS;
  Certificate certificate;
  std::vector<std::string> warnings;

  bool operator==(const Verdict&) const = default;
};

/// Everything computed on the way to a verdict.
struct Analysis {
  bool swapped = false;
  /// Absent for commuting pairs.
  std::optional<NormalForm> nf;
  std::optional<CollinearityData> collinearity;
  std::vector<Decision> decisions;
  Verdict verdict;
};

/// Throws NotHurwitz and OutOfScope.
Analysis analyze(const SystemPair& pair, const Tolerances& tol = {});
Verdict classify(const SystemPair& pair, const Tolerances& tol = {});

}  // namespace swstab
