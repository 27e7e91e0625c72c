#include "swstab/invariants.hpp"

#include <cmath>
#include <sstream>

#include "swstab/errors.hpp"

namespace swstab {

namespace {

std::string hurwitz_message(char which, double trace, double det) {
  std::ostringstream os;
  os.precision(17);
  os << which << " is not Hurwitz: trace=" << trace << ", det=" << det;
  return os.str();
}

double coupling_scale(const SystemPair& p) noexcept {
  const auto& a = p.A;
  const auto& b = p.B;
  const double tr_ab_terms = std::abs(a.a11() * b.a11()) + std::abs(a.a12() * b.a21()) +
                             std::abs(a.a21() * b.a12()) + std::abs(a.a22() * b.a22());
  return tr_ab_terms + 0.5 * std::abs(trace(a) * trace(b));
}

}  // namespace

NotHurwitz::NotHurwitz(char which, double trace, double det)
    : Error(hurwitz_message(which, trace, det)), which_(which), trace_(trace), det_(det) {}

std::string_view to_string(Rejection r) noexcept {
  switch (r) {
    case Rejection::Commuting: return "Commuting";
    case Rejection::BothDiagonalizable: return "BothDiagonalizable";
  }
  return "?";
}

bool is_hurwitz(const Mat2& m, const Tolerances& tol) {
  const double scale = m.max_abs();
  const double tr = trace(m);
  const double d = det(m);
  return tr < -zero_threshold(scale, tol.degenerate) && d > zero_threshold(scale * scale, tol.degenerate);
}

ValidationResult validate_h0(const SystemPair& pair, const Tolerances& tol) {
  if (!is_hurwitz(pair.A, tol)) throw NotHurwitz('A', trace(pair.A), det(pair.A));
  if (!is_hurwitz(pair.B, tol)) throw NotHurwitz('B', trace(pair.B), det(pair.B));

  const Mat2 c = commutator(pair.A, pair.B);
  if (near_zero(c.max_abs(), pair.A.max_abs() * pair.B.max_abs(), tol.degenerate)) {
    return Rejection::Commuting;
  }

  const SpectralKind ka = spectral_kind(pair.A, tol);
  const SpectralKind kb = spectral_kind(pair.B, tol);
  if (ka.tag == SpectralTag::RepeatedNondiagonalizable) {
    return CaseContext{pair, false, ka, kb};
  }
  if (kb.tag == SpectralTag::RepeatedNondiagonalizable) {
    return CaseContext{SystemPair{pair.B, pair.A}, true, kb, ka};
  }
  return Rejection::BothDiagonalizable;
}

double coupling(const SystemPair& pair) noexcept {
  const auto& a = pair.A;
  const auto& b = pair.B;
  const double tr_ab = a.a11() * b.a11() + a.a12() * b.a21() + a.a21() * b.a12() + a.a22() * b.a22();
  return tr_ab - 0.5 * trace(a) * trace(b);
}

InvariantTriple compute_invariants(const SystemPair& pair, const Tolerances& tol) {
  InvariantTriple inv;
  const SpectralKind kb = spectral_kind(pair.B, tol);
  inv.delta = kb.discriminant;
  inv.delta_sign = sign_with_tolerance(inv.delta, discriminant_scale(pair.B), tol.degenerate);

  const double c = coupling(pair);
  inv.k_sign = sign_with_tolerance(c, coupling_scale(pair), tol.degenerate);

  if (inv.delta_sign != 0) {
    const double root = std::sqrt(std::abs(inv.delta));
    inv.eta = trace(pair.A) / root;
    inv.rho = trace(pair.B) / root;
    inv.k = 4.0 / std::abs(inv.delta) * c;
  } else {
    inv.eta = 0.5 * trace(pair.A);
    inv.rho = 0.5 * trace(pair.B);
    inv.k = c;
  }
  if (inv.k_sign == 0) inv.k = 0.0;
  return inv;
}

std::vector<Decision> invariant_decisions(const SystemPair& pair, const Tolerances& tol) {
  std::vector<Decision> out;
  const SpectralKind kb = spectral_kind(pair.B, tol);
  out.push_back(make_decision("delta", kb.discriminant, discriminant_scale(pair.B), tol.degenerate));
  out.push_back(make_decision("k (coupling Tr(AB) - Tr(A)Tr(B)/2)", coupling(pair), coupling_scale(pair),
                              tol.degenerate));
  return out;
}

std::string_view to_string(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::S1: return "S1";
    case CaseTag::Sminus1: return "S-1";
    case CaseTag::R1: return "R1";
    case CaseTag::Rminus1: return "R-1";
    case CaseTag::R0: return "R0";
  }
  return "?";
}

bool is_singular(CaseTag tag) noexcept { return tag == CaseTag::S1 || tag == CaseTag::Sminus1; }

int delta_sign_of(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::Rminus1: return -1;
    case CaseTag::R0: return 0;
    default: return 1;
  }
}

CaseTag case_tag(const InvariantTriple& inv, std::optional<SingularBranch> branch) {
  if (inv.k_sign == 0) {
    if (!branch) throw PreconditionViolated("case_tag: singular case needs the eigenline branch");
    return *branch == SingularBranch::LargerOnAEigenline ? CaseTag::Sminus1 : CaseTag::S1;
  }
  if (inv.delta_sign > 0) return CaseTag::R1;
  if (inv.delta_sign < 0) return CaseTag::Rminus1;
  return CaseTag::R0;
}

Mat2 jordan_basis(const Mat2& a, JordanProbe probe) {
  const double lambda = 0.5 * trace(a);
  const Mat2 n = a - lambda * Mat2::identity();
  const Vec2 e1{1.0, 0.0};
  const Vec2 e2{0.0, 1.0};
  const Vec2 n1 = n * e1;
  const Vec2 n2 = n * e2;

  bool use_e1 = true;
  switch (probe) {
    case JordanProbe::E1: use_e1 = true; break;
    case JordanProbe::E2: use_e1 = false; break;
    case JordanProbe::Auto: use_e1 = n1.norm() >= n2.norm(); break;
  }
  const Vec2 v = use_e1 ? e1 : e2;
  const Vec2 nv = use_e1 ? n1 : n2;
  if (nv.is_zero()) throw PreconditionViolated("jordan_basis: probe lies in the kernel of A - lambda I");
  return Mat2::from_columns(nv, v);
}

SingularBranch singular_branch(const SystemPair& pair) {
  const Mat2 p = jordan_basis(pair.A);
  const Mat2 b = p.inverse() * pair.B * p;
  return b.a22() > b.a11() ? SingularBranch::SmallerOnAEigenline : SingularBranch::LargerOnAEigenline;
}

Mat2 canonical_A(double eta) { return {eta, 1.0, 0.0, eta}; }

Mat2 canonical_B(CaseTag tag, double rho, double k) {
  switch (tag) {
    case CaseTag::S1: return Mat2::diag(rho - 1.0, rho + 1.0);
    case CaseTag::Sminus1: return Mat2::diag(rho + 1.0, rho - 1.0);
    case CaseTag::R0: return {rho, 0.0, k, rho};
    case CaseTag::R1: return {rho, 1.0 / k, k, rho};
    case CaseTag::Rminus1: return {rho, -1.0 / k, k, rho};
  }
  throw PreconditionViolated("canonical_B: unknown case tag");
}

SystemPair canonical_pair(CaseTag tag, double eta, double rho, double k) {
  if (is_singular(tag)) k = 0.0;
  return {canonical_A(eta), canonical_B(tag, rho, k)};
}

NormalForm canonical_normal_form(CaseTag tag, double eta, double rho, double k) {
  if (is_singular(tag)) k = 0.0;
  NormalForm nf;
  nf.A_nf = canonical_A(eta);
  nf.B_nf = canonical_B(tag, rho, k);
  nf.T = Mat2::identity();
  nf.tau = 1.0;
  nf.tag = tag;
  nf.inv.eta = eta;
  nf.inv.rho = rho;
  nf.inv.k = k;
  nf.inv.delta_sign = delta_sign_of(tag);
  nf.inv.delta = 4.0 * nf.inv.delta_sign;
  nf.inv.k_sign = k > 0.0 ? 1 : (k < 0.0 ? -1 : 0);
  return nf;
}

NormalForm normal_form(const SystemPair& pair, const Tolerances& tol) {
  const ValidationResult v = validate_h0(pair, tol);
  if (const auto* r = std::get_if<Rejection>(&v)) {
    if (*r == Rejection::Commuting) throw CommutingPair("A and B commute; the system is trivially GUAS");
    throw OutOfScope(
        "both matrices are diagonalizable; this case is decided by the cross-ratio conditions of the "
        "diagonalizable theory, not by this tool");
  }
  return normal_form(std::get<CaseContext>(v), tol);
}

NormalForm normal_form(const CaseContext& ctx, const Tolerances& tol) {
  const SystemPair& pair = ctx.pair;
  NormalForm nf;
  nf.swapped = ctx.swapped;
  nf.inv = compute_invariants(pair, tol);

  const Mat2 p = jordan_basis(pair.A);
  const Mat2 bj = p.inverse() * pair.B * p;
  const double a = bj.a11();
  const double b = bj.a12();
  const double c = bj.a21();
  const double d = bj.a22();

  Mat2 shear;
  if (nf.inv.k_sign != 0) {
    shear = Mat2(1.0, (a - d) / (2.0 * c), 0.0, 1.0);
    nf.tag = case_tag(nf.inv);
  } else {
    if (nf.inv.delta_sign <= 0) {
      throw InconsistentInvariants("normal_form: k = 0 forces delta > 0, but delta was not positive");
    }
    shear = Mat2(1.0, -b / (a - d), 0.0, 1.0);
    nf.tag = d > a ? CaseTag::S1 : CaseTag::Sminus1;
  }

  Mat2 stretch = Mat2::identity();
  nf.tau = 1.0;
  if (nf.inv.delta_sign != 0) {
    const double abs_delta = std::abs(nf.inv.delta);
    const double quarter = std::pow(abs_delta, 0.25);
    nf.tau = 0.5 * std::sqrt(abs_delta);
    stretch = Mat2::diag(std::sqrt(2.0) / quarter, quarter / std::sqrt(2.0));
  }

  nf.T = p * shear * stretch;
  nf.A_nf = canonical_A(nf.inv.eta);
  nf.B_nf = canonical_B(nf.tag, nf.inv.rho, nf.inv.k);

  const Mat2 t_inv = nf.T.inverse();
  const double inv_tau = 1.0 / nf.tau;
  const Mat2 a_check = t_inv * (inv_tau * pair.A) * nf.T;
  const Mat2 b_check = t_inv * (inv_tau * pair.B) * nf.T;
  nf.residual = std::max(max_abs_diff(a_check, nf.A_nf), max_abs_diff(b_check, nf.B_nf));
  return nf;
}

}  // namespace swstab
