#include "swstab/classifier.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "swstab/errors.hpp"

namespace swstab {

std::string_view to_string(ThetaBranch b) noexcept {
  switch (b) {
    case ThetaBranch::TrigArctan: return "trig-arctan";
    case ThetaBranch::TrigHalfPi: return "trig-half-pi";
    case ThetaBranch::Hyperbolic: return "hyperbolic";
    case ThetaBranch::Parabolic: return "parabolic";
  }
  return "?";
}

std::string_view to_string(RatioBranch b) noexcept {
  return b == RatioBranch::Generic ? "generic" : "degenerate";
}

std::string_view to_string(VerdictKind k) noexcept {
  switch (k) {
    case VerdictKind::GUAS: return "GUAS";
    case VerdictKind::UniformlyStableNotGUAS: return "UniformlyStableNotGUAS";
    case VerdictKind::Unbounded: return "Unbounded";
  }
  return "?";
}

std::string_view certificate_name(const Certificate& c) noexcept {
  constexpr std::string_view names[] = {"DefiniteQ",   "StaticInstability", "RatioRotation",    "ProjectiveCone",
                                        "SemidefiniteLyapunov", "SingularCase", "CoincidentDirect", "Commuting"};
  return names[c.index()];
}

namespace {

void require_rotating(const InvariantTriple& inv, double Delta, const Tolerances& tol, const char* who) {
  if (inv.k_sign >= 0) throw PreconditionViolated(std::string(who) + ": requires k < 0");
  if (sign_with_tolerance(Delta, discriminant_Delta_scale(inv), tol.degenerate) <= 0) {
    throw PreconditionViolated(std::string(who) + ": requires Delta > 0");
  }
}

}  // namespace

ThetaValue theta(const InvariantTriple& inv, double Delta, const Tolerances& tol) {
  require_rotating(inv, Delta, tol, "theta");
  const double k = inv.k;
  const double root = std::sqrt(Delta);
  if (inv.delta_sign < 0) {
    const double den = k * inv.rho + 2.0 * inv.eta;
    const double den_scale = std::max(std::abs(k * inv.rho), 2.0 * std::abs(inv.eta));
    if (near_zero(den, den_scale, tol.degenerate)) return {0.5 * std::numbers::pi, ThetaBranch::TrigHalfPi};
    double t = std::atan(root / den);
    if (t < 0.0) t += std::numbers::pi;
    return {t, ThetaBranch::TrigArctan};
  }
  if (inv.delta_sign > 0) {
    const double arg = root / (k * inv.rho - 2.0 * inv.eta);
    if (!(arg > 0.0 && arg < 1.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "theta: arctanh argument " << arg << " outside (0, 1)";
      throw InconsistentInvariants(os.str());
    }
    return {std::atanh(arg), ThetaBranch::Hyperbolic};
  }
  return {root / (k * inv.rho), ThetaBranch::Parabolic};
}

RatioR ratio_R(const InvariantTriple& inv, const NormalForm& nf, const Tolerances& tol) {
  const double Delta = discriminant_Delta(inv);
  require_rotating(inv, Delta, tol, "ratio_R");
  const double k = inv.k;
  const double eta = inv.eta;
  const double rho = inv.rho;
  const double root = std::sqrt(Delta);
  const ThetaValue th = theta(inv, Delta, tol);

  RatioR r;
  r.t1 = root / (eta * k);
  r.t2 = th.theta;
  r.theta_branch = th.branch;
  const double decay = std::exp(root / k + rho * th.theta);

  if (inv.delta_sign < 0 && chi_vanishes(inv, tol)) {
    r.branch = RatioBranch::Degenerate;
    r.R = std::sqrt(k * k + eta * eta) / -eta * decay;
    return r;
  }
  const int s = inv.delta_sign;
  const double tr_ab = trace(nf.A_nf * nf.B_nf);
  const double lead = (-k + root) / (-k - root);
  const double num = 2.0 * k * rho * rho - s * (tr_ab + root);
  const double den = 2.0 * k * std::sqrt(det(nf.B_nf)) * (rho - s * eta / k);
  r.branch = RatioBranch::Generic;
  r.R = std::abs(lead * num / den) * decay;
  return r;
}

StaticInstabilityData static_instability_certificate(const NormalForm& nf, std::pair<double, double> alphas,
                                                     const Tolerances& tol) {
  const auto& inv = nf.inv;
  const double Delta = discriminant_Delta(inv);
  if (sign_with_tolerance(Delta, discriminant_Delta_scale(inv), tol.degenerate) <= 0 ||
      !(inv.k > 2.0 * inv.eta * inv.rho)) {
    throw PreconditionViolated("static_instability_certificate: requires Delta > 0 and k > 2 eta rho");
  }
  const double sum = alphas.first + alphas.second;
  const double prod = alphas.first * alphas.second;
  StaticInstabilityData out;
  out.u0 = (prod - 0.5 * sum) / (1.0 + prod - sum);
  const Mat2 m = out.u0 * nf.A_nf + (1.0 - out.u0) * nf.B_nf;
  out.det_M = det(m);
  if (!(out.u0 > 0.0 && out.u0 < 1.0) || !(out.det_M < 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "static_instability_certificate: u0 = " << out.u0 << ", det M(u0) = " << out.det_M
       << " do not certify instability";
    throw InternalInconsistency(os.str());
  }
  const double half_tr = 0.5 * trace(m);
  out.unstable_eigenvalue = half_tr + std::sqrt(half_tr * half_tr - out.det_M);
  return out;
}

LyapunovDerivatives lyapunov_derivatives(const NormalForm& nf, const Vec2& x) {
  const double eta = nf.inv.eta;
  const double rho = nf.inv.rho;
  const Vec2 grad{2.0 * x.x1(), x.x2() / (2.0 * eta * eta)};
  const double line = x.x2() + 2.0 * eta * x.x1();
  LyapunovDerivatives d;
  d.along_A = dot(grad, nf.A_nf * x);
  d.along_B = dot(grad, nf.B_nf * x);
  d.closed_A = line * line / (2.0 * eta);
  d.closed_B = rho * line * line / (2.0 * eta * eta);
  return d;
}

bool semidefinite_lyapunov_check(const NormalForm& nf, const Tolerances& tol) {
  const auto& inv = nf.inv;
  if (discriminant_sign(inv, tol) != 0 || !(inv.k > 2.0 * inv.eta * inv.rho)) {
    throw PreconditionViolated("semidefinite_lyapunov_check: requires Delta == 0 and k > 2 eta rho");
  }
  std::mt19937_64 gen(0x5eed1a9u);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const double scale = std::max({1.0, nf.A_nf.max_abs(), nf.B_nf.max_abs(), 1.0 / (inv.eta * inv.eta)});
  for (int i = 0; i < 100; ++i) {
    const Vec2 x{coord(gen), coord(gen)};
    const auto d = lyapunov_derivatives(nf, x);
    const double bound = 1e-10 * scale * std::max(1.0, dot(x, x));
    if (std::abs(d.along_A - d.closed_A) > bound || std::abs(d.along_B - d.closed_B) > bound) return false;
    if (d.along_A > bound || d.along_B > bound) return false;
  }
  return true;
}

std::optional<ConeArc> projective_guas_check(const NormalForm& nf, const ZSet& zset, const Tolerances& tol) {
  const auto& inv = nf.inv;
  const auto* lines = std::get_if<TwoLines>(&zset);
  if (lines == nullptr || discriminant_sign(inv, tol) <= 0 || inv.delta_sign <= 0 || inv.k_sign <= 0 ||
      !(inv.k < 2.0 * inv.eta * inv.rho)) {
    throw PreconditionViolated("projective_guas_check: requires Delta > 0, delta > 0, 0 < k < 2 eta rho");
  }
  const ProjectiveArc arc = component_containing(*lines, 0.0);
  for (int s : {1, -1}) {
    const double angle = line_angle(Vec2{1.0, s * inv.k});
    if (arc.contains(angle)) return ConeArc{arc, angle, s};
  }
  return std::nullopt;
}

namespace {

Verdict make(VerdictKind kind, Certificate cert) { return Verdict{kind, std::move(cert), {}}; }

[[noreturn]] void unreachable(const std::string& what) {
  throw InternalInconsistency("classify: " + what);
}

}  // namespace

Analysis analyze(const SystemPair& pair, const Tolerances& tol) {
  Analysis out;
  const ValidationResult validated = validate_h0(pair, tol);
  if (const auto* r = std::get_if<Rejection>(&validated)) {
    if (*r == Rejection::BothDiagonalizable) {
      throw OutOfScope(
          "both A and B are diagonalizable; that case is decided by the cross-ratio conditions of the "
          "diagonalizable theory and is out of scope for this tool");
    }
    out.verdict = make(VerdictKind::GUAS, Commuting{});
    return out;
  }
  const auto& ctx = std::get<CaseContext>(validated);
  out.swapped = ctx.swapped;
  out.decisions = invariant_decisions(ctx.pair, tol);

  const NormalForm nf = normal_form(ctx, tol);
  out.decisions.push_back(discriminant_decision(nf.inv, tol));
  const CollinearityData coll = analyze_collinearity(nf, tol);
  out.nf = nf;
  out.collinearity = coll;

  const auto& inv = nf.inv;
  if (coll.Delta_sign >= 0 && !clockwise_check(nf, coll.zset)) unreachable("A does not point clockwise on Z");

  if (coll.Delta_sign < 0) {
    out.verdict = make(VerdictKind::GUAS, DefiniteQ{});
  } else if (coll.Delta_sign > 0 && coll.orientation == Orientation::Inverse) {
    const auto cert = static_instability_certificate(nf, {*coll.alpha_plus, *coll.alpha_minus}, tol);
    const double u0 = ctx.swapped ? 1.0 - cert.u0 : cert.u0;
    out.verdict = make(VerdictKind::Unbounded, StaticInstability{u0, nf.tau * cert.unstable_eigenvalue});
  } else if (coll.Delta_sign > 0) {
    if (inv.k_sign == 0) {
      out.verdict = make(VerdictKind::GUAS, SingularCase{});
    } else if (inv.k_sign > 0) {
      if (inv.delta_sign <= 0) unreachable("direct Z with Delta > 0 and k > 0 needs delta > 0");
      const auto cone = projective_guas_check(nf, coll.zset, tol);
      if (!cone) unreachable("no eigendirection of B in the projective component of A's eigendirection");
      out.verdict = make(VerdictKind::GUAS, ProjectiveCone{*cone});
    } else {
      const RatioR r = ratio_R(inv, nf, tol);
      const Decision unit = make_decision("R - 1", r.R - 1.0, r.R, tol.ratio);
      out.decisions.push_back(unit);
      VerdictKind kind = VerdictKind::GUAS;
      if (unit.treated_as_zero) {
        kind = VerdictKind::UniformlyStableNotGUAS;
      } else if (r.R > 1.0) {
        kind = VerdictKind::Unbounded;
      }
      out.verdict = make(kind, RatioRotation{r});
    }
  } else if (coll.orientation == Orientation::Inverse) {
    if (!semidefinite_lyapunov_check(nf, tol)) unreachable("semidefinite Lyapunov identities failed");
    out.verdict = make(VerdictKind::UniformlyStableNotGUAS,
                       SemidefiniteLyapunov{1.0, 1.0 / (4.0 * inv.eta * inv.eta)});
  } else {
    out.verdict = make(VerdictKind::GUAS, CoincidentDirect{});
  }

  out.verdict.warnings = fragile_warnings(out.decisions);
  if (out.verdict.kind == VerdictKind::UniformlyStableNotGUAS &&
      std::holds_alternative<RatioRotation>(out.verdict.certificate)) {
    out.verdict.warnings.push_back("fragile classification: R == 1 within the ratio tolerance");
  }
  return out;
}

Verdict classify(const SystemPair& pair, const Tolerances& tol) { return analyze(pair, tol).verdict; }

}  // namespace swstab
