#include "swstab/collinearity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "swstab/errors.hpp"

namespace swstab {

ProjectiveSlope ProjectiveSlope::finite(double m) {
  if (!std::isfinite(m)) throw NonFiniteValue("ProjectiveSlope::finite: slope is not finite");
  ProjectiveSlope s;
  s.infinite_ = false;
  s.value_ = m;
  return s;
}

double ProjectiveSlope::value() const {
  if (infinite_) throw PreconditionViolated("ProjectiveSlope::value: vertical line has no finite slope");
  return value_;
}

Vec2 ProjectiveSlope::direction() const {
  if (infinite_) return {0.0, 1.0};
  const double n = std::hypot(1.0, value_);
  return {1.0 / n, value_ / n};
}

double ProjectiveSlope::angle() const noexcept {
  if (infinite_) return 0.5 * std::numbers::pi;
  const double a = std::atan(value_);
  return a < 0.0 ? a + std::numbers::pi : a;
}

std::string_view to_string(Orientation o) noexcept {
  switch (o) {
    case Orientation::Direct: return "direct";
    case Orientation::Inverse: return "inverse";
    case Orientation::NotApplicable: return "not-applicable";
  }
  return "?";
}

double discriminant_Delta(const InvariantTriple& inv) noexcept {
  return inv.k * inv.k - 4.0 * inv.eta * inv.rho * inv.k + inv.delta_sign * 4.0 * inv.eta * inv.eta;
}

double discriminant_Delta_scale(const InvariantTriple& inv) noexcept {
  return std::max({inv.k * inv.k, std::abs(4.0 * inv.eta * inv.rho * inv.k), 4.0 * inv.eta * inv.eta});
}

int discriminant_sign(const InvariantTriple& inv, const Tolerances& tol) {
  return sign_with_tolerance(discriminant_Delta(inv), discriminant_Delta_scale(inv), tol.degenerate);
}

Decision discriminant_decision(const InvariantTriple& inv, const Tolerances& tol) {
  return make_decision("Delta", discriminant_Delta(inv), discriminant_Delta_scale(inv), tol.degenerate);
}

double quadratic_Q(const NormalForm& nf, const Vec2& x) { return cross(nf.A_nf * x, nf.B_nf * x); }

QuadraticCoefficients quadratic_coefficients(const InvariantTriple& inv, CaseTag tag) {
  switch (tag) {
    case CaseTag::S1: return {0.0, 2.0 * inv.eta, inv.rho + 1.0};
    case CaseTag::Sminus1: return {0.0, -2.0 * inv.eta, inv.rho - 1.0};
    default: return {inv.eta * inv.k, inv.k, chi(inv)};
  }
}

double quadratic_Q_formula(const InvariantTriple& inv, CaseTag tag, const Vec2& x) {
  const auto q = quadratic_coefficients(inv, tag);
  return q.c11 * x.x1() * x.x1() + q.c12 * x.x1() * x.x2() + q.c22 * x.x2() * x.x2();
}

double chi(const InvariantTriple& inv) {
  if (inv.k == 0.0) throw PreconditionViolated("chi: undefined in the singular case");
  return inv.rho - inv.delta_sign * inv.eta / inv.k;
}

bool chi_vanishes(const InvariantTriple& inv, const Tolerances& tol) {
  const double x_scale = std::max({1.0, std::abs(inv.rho), std::abs(inv.eta / inv.k)});
  return near_zero(chi(inv), x_scale, tol.degenerate);
}

ZSet slopes(const InvariantTriple& inv, CaseTag tag, const Tolerances& tol) {
  const int dsign = discriminant_sign(inv, tol);
  if (dsign < 0) return OriginOnly{};

  if (tag == CaseTag::S1) {
    return TwoLines{ProjectiveSlope::finite(0.0), ProjectiveSlope::finite(-2.0 * inv.eta / (inv.rho + 1.0))};
  }
  if (tag == CaseTag::Sminus1) {
    return TwoLines{ProjectiveSlope::finite(0.0), ProjectiveSlope::finite(2.0 * inv.eta / (inv.rho - 1.0))};
  }

  // Roots of chi m^2 + k m + eta k = 0.
  const double k = inv.k;
  const double x = chi(inv);
  if (dsign == 0) {
    return OneLine{ProjectiveSlope::finite(-k / (2.0 * x))};
  }
  const double root = std::sqrt(discriminant_Delta(inv));
  if (chi_vanishes(inv, tol)) {
    // The quadratic degenerates to k m + eta k = 0; the lost root is vertical.
    const auto finite = ProjectiveSlope::finite(-inv.eta);
    if (tag == CaseTag::R1) return TwoLines{finite, ProjectiveSlope::infinity()};
    return TwoLines{ProjectiveSlope::infinity(), finite};
  }
  // m+ = (-k + root) / (2 chi), m- = (-k - root) / (2 chi), evaluated
  // without cancellation.
  const double q = -0.5 * (k + std::copysign(root, k));
  const double r_big = q / x;
  const double r_small = inv.eta * k / q;
  if (k > 0.0) return TwoLines{ProjectiveSlope::finite(r_small), ProjectiveSlope::finite(r_big)};
  return TwoLines{ProjectiveSlope::finite(r_big), ProjectiveSlope::finite(r_small)};
}

namespace {

double fit_alpha(const NormalForm& nf, const ProjectiveSlope& m) {
  const Vec2 x = m.direction();
  const Vec2 ax = nf.A_nf * x;
  const Vec2 bx = nf.B_nf * x;
  const double alpha = dot(ax, bx) / dot(ax, ax);
  const double residual = (bx - alpha * ax).norm();
  if (residual > 1e-9 * std::max(bx.norm(), 1e-300)) {
    std::ostringstream os;
    os.precision(17);
    os << "alphas: B x and A x are not collinear on the line of angle " << m.angle() << " (residual " << residual
       << ")";
    throw NotCollinear(os.str());
  }
  if (!is_singular(nf.tag)) {
    // Closed form (k + rho m) / (eta m), rho / eta on the vertical line.
    const auto& inv = nf.inv;
    const double formula =
        m.is_infinite() ? inv.rho / inv.eta : (inv.k + inv.rho * m.value()) / (inv.eta * m.value());
    if (std::abs(formula - alpha) > 1e-8 * std::max(1.0, std::abs(alpha))) {
      std::ostringstream os;
      os.precision(17);
      os << "alphas: least-squares alpha " << alpha << " disagrees with the closed form " << formula;
      throw InternalInconsistency(os.str());
    }
  }
  return alpha;
}

}  // namespace

std::pair<double, double> alphas(const NormalForm& nf, const ZSet& zset) {
  if (const auto* two = std::get_if<TwoLines>(&zset)) {
    return {fit_alpha(nf, two->m_plus), fit_alpha(nf, two->m_minus)};
  }
  if (const auto* one = std::get_if<OneLine>(&zset)) {
    const double a0 = fit_alpha(nf, one->m0);
    return {a0, a0};
  }
  throw PreconditionViolated("alphas: Z is only the origin (Delta < 0)");
}

Orientation orientation(const InvariantTriple& inv, double Delta, const Tolerances& tol) {
  const int dsign = sign_with_tolerance(Delta, discriminant_Delta_scale(inv), tol.degenerate);
  if (dsign < 0) return Orientation::NotApplicable;
  const double two_eta_rho = 2.0 * inv.eta * inv.rho;
  if (near_zero(inv.k - two_eta_rho, std::max(std::abs(inv.k), two_eta_rho), tol.degenerate)) {
    throw InconsistentInvariants("orientation: Delta >= 0 together with k == 2 eta rho is impossible");
  }
  return inv.k < two_eta_rho ? Orientation::Direct : Orientation::Inverse;
}

bool clockwise_check(const NormalForm& nf, const ZSet& zset) {
  auto line_ok = [&](const ProjectiveSlope& m) {
    const Vec2 d = m.direction();
    for (double h : {-2.5, -1.0, 0.5, 1.0, 3.0}) {
      const Vec2 x = h * d;
      const Vec2 ax = nf.A_nf * x;
      const double rotation = dot(ax, Vec2{-x.x2(), x.x1()});
      if (rotation > 1e-12 * std::max(1.0, nf.A_nf.max_abs()) * dot(x, x)) return false;
    }
    return true;
  };
  if (const auto* two = std::get_if<TwoLines>(&zset)) return line_ok(two->m_plus) && line_ok(two->m_minus);
  if (const auto* one = std::get_if<OneLine>(&zset)) return line_ok(one->m0);
  throw PreconditionViolated("clockwise_check: Z is only the origin (Delta < 0)");
}

CollinearityData analyze_collinearity(const NormalForm& nf, const Tolerances& tol) {
  CollinearityData data;
  data.Delta = discriminant_Delta(nf.inv);
  data.Delta_sign = discriminant_sign(nf.inv, tol);
  data.zset = slopes(nf.inv, nf.tag, tol);
  data.orientation = orientation(nf.inv, data.Delta, tol);
  if (data.Delta_sign >= 0) {
    const auto [ap, am] = alphas(nf, data.zset);
    data.alpha_plus = ap;
    data.alpha_minus = am;
  }
  return data;
}

double line_angle(const Vec2& v) noexcept {
  double a = std::atan2(v.x2(), v.x1());
  if (a < 0.0) a += std::numbers::pi;
  if (a >= std::numbers::pi) a -= std::numbers::pi;
  return a;
}

bool ProjectiveArc::contains(double angle) const noexcept {
  if (from < to) return angle > from && angle < to;
  return angle > from || angle < to;
}

ProjectiveArc component_containing(const TwoLines& lines, double anchor) {
  const double a = std::min(lines.m_plus.angle(), lines.m_minus.angle());
  const double b = std::max(lines.m_plus.angle(), lines.m_minus.angle());
  if (a == b) throw PreconditionViolated("component_containing: the two lines coincide");
  if (anchor == a || anchor == b) throw PreconditionViolated("component_containing: anchor lies on Z");
  if (anchor > a && anchor < b) return {a, b};
  return {b, a};
}

}  // namespace swstab
