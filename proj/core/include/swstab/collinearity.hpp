#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <variant>

#include "swstab/invariants.hpp"
#include "swstab/linalg2.hpp"

namespace swstab {

/// Slope of a line through the origin, with the vertical line as a
/// first-class value rather than a large float.
class ProjectiveSlope {
 public:
  static ProjectiveSlope finite(double m);
  static ProjectiveSlope infinity() { return ProjectiveSlope(); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Throws PreconditionViolated for the vertical line.
  double value() const;
  /// Unit direction with x1 >= 0 ((0, 1) for the vertical line).
  Vec2 direction() const;
  /// Angle of the line in [0, pi).
  double angle() const noexcept;

  bool operator==(const ProjectiveSlope&) const = default;

 private:
  ProjectiveSlope() = default;
  bool infinite_ = true;
  double value_ = 0.0;
};

struct OriginOnly {
  bool operator==(const OriginOnly&) const = default;
};
struct OneLine {
  ProjectiveSlope m0;
  bool operator==(const OneLine&) const = default;
};
struct TwoLines {
  ProjectiveSlope m_plus;
  ProjectiveSlope m_minus;
  bool operator==(const TwoLines&) const = default;
};

/// Zero set of Q(x) = det(Ax, Bx).
using ZSet = std::variant<OriginOnly, OneLine, TwoLines>;

enum class Orientation { Direct, Inverse, NotApplicable };

std::string_view to_string(Orientation o) noexcept;

struct CollinearityData {
  double Delta = 0.0;
  int Delta_sign = 0;
  ZSet zset;
  std::optional<double> alpha_plus;
  std::optional<double> alpha_minus;
  Orientation orientation = Orientation::NotApplicable;
};

/// k^2 - 4 eta rho k + 4 sign(delta) eta^2.
double discriminant_Delta(const InvariantTriple& inv) noexcept;
double discriminant_Delta_scale(const InvariantTriple& inv) noexcept;
int discriminant_sign(const InvariantTriple& inv, const Tolerances& tol = {});
Decision discriminant_decision(const InvariantTriple& inv, const Tolerances& tol = {});

/// det(A_nf x, B_nf x).
double quadratic_Q(const NormalForm& nf, const Vec2& x);
/// The same form through its closed-form coefficients for the given case.
double quadratic_Q_formula(const InvariantTriple& inv, CaseTag tag, const Vec2& x);

/// Coefficients (c11, c12, c22) of Q = c11 x1^2 + c12 x1 x2 + c22 x2^2 in
/// normal-form coordinates.
struct QuadraticCoefficients {
  double c11 = 0.0;
  double c12 = 0.0;
  double c22 = 0.0;
};
QuadraticCoefficients quadratic_coefficients(const InvariantTriple& inv, CaseTag tag);

/// rho - sign(delta) eta / k: the x2^2 coefficient of Q in the regular cases.
double chi(const InvariantTriple& inv);
/// chi == 0 under the degeneracy tolerance (one line of Z is vertical, or
/// the degenerate ratio formula applies).
bool chi_vanishes(const InvariantTriple& inv, const Tolerances& tol = {});

ZSet slopes(const InvariantTriple& inv, CaseTag tag, const Tolerances& tol = {});

/// Collinearity factors B x = alpha A x on D+ and D- (alpha0 twice when
/// Delta = 0), from a least-squares fit on the matrices themselves.
std::pair<double, double> alphas(const NormalForm& nf, const ZSet& zset);

Orientation orientation(const InvariantTriple& inv, double Delta, const Tolerances& tol = {});

/// True when A x . (-x2, x1) <= 0 on sample points of every line of Z.
bool clockwise_check(const NormalForm& nf, const ZSet& zset);

CollinearityData analyze_collinearity(const NormalForm& nf, const Tolerances& tol = {});

/// Connected arc of the projective line (angles in [0, pi)) minus the
/// lines of Z that contains the direction `anchor`. Both endpoints are
/// lines of Z; the arc runs counterclockwise from `from` to `to`, wrapping
/// through pi == 0 when from > to.
struct ProjectiveArc {
  double from = 0.0;
  double to = 0.0;

  bool contains(double angle) const noexcept;
};

/// Requires two distinct lines with `anchor` on neither.
ProjectiveArc component_containing(const TwoLines& lines, double anchor_angle);

/// Angle in [0, pi) of the line through v.
double line_angle(const Vec2& v) noexcept;

}  // namespace swstab
