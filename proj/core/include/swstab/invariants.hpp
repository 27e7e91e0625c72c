#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "swstab/linalg2.hpp"
#include "swstab/tolerance.hpp"

namespace swstab {

/// The two modes of x' = u A x + (1 - u) B x.
struct SystemPair {
  Mat2 A;
  Mat2 B;

  bool operator==(const SystemPair&) const = default;
};

enum class Rejection {
  /// [A, B] = 0: trivially GUAS, no normal form exists.
  Commuting,
  /// Neither matrix is nondiagonalizable: outside what this library decides.
  BothDiagonalizable,
};

std::string_view to_string(Rejection r) noexcept;

/// A pair that passed validation, with A guaranteed nondiagonalizable.
struct CaseContext {
  /// Possibly role-exchanged copy of the input.
  SystemPair pair;
  /// True when the caller's B was the nondiagonalizable matrix and the roles
  /// were exchanged (the system is symmetric under A <-> B, u <-> 1 - u).
  bool swapped = false;
  SpectralKind kind_a;
  SpectralKind kind_b;
};

using ValidationResult = std::variant<CaseContext, Rejection>;

/// Checks Hurwitz-ness (throws NotHurwitz), then commutation, then that at
/// least one matrix is nondiagonalizable.
ValidationResult validate_h0(const SystemPair& pair, const Tolerances& tol = {});

bool is_hurwitz(const Mat2& m, const Tolerances& tol = {});

/// Similarity- and joint-scale-invariant parameters of a validated pair.
struct InvariantTriple {
  double eta = 0.0;
  double rho = 0.0;
  /// Snapped to exactly 0 when k_sign == 0.
  double k = 0.0;
  /// Discriminant of B's characteristic polynomial, unrounded.
  double delta = 0.0;
  int delta_sign = 0;
  int k_sign = 0;

  bool operator==(const InvariantTriple&) const = default;
};

/// Tr(AB) - Tr(A)Tr(B)/2, the unnormalised coupling term behind k.
double coupling(const SystemPair& pair) noexcept;

/// Requires pair.A nondiagonalizable (i.e. a CaseContext pair).
InvariantTriple compute_invariants(const SystemPair& pair, const Tolerances& tol = {});

/// The zero/nonzero decisions behind delta_sign and k_sign.
std::vector<Decision> invariant_decisions(const SystemPair& pair, const Tolerances& tol = {});

enum class CaseTag { S1, Sminus1, R1, Rminus1, R0 };

std::string_view to_string(CaseTag tag) noexcept;
bool is_singular(CaseTag tag) noexcept;
/// sign(delta) implied by the tag (+1 for the singular cases).
int delta_sign_of(CaseTag tag) noexcept;

/// Which eigenvalue of B sits on A's eigenvector line in the singular case.
enum class SingularBranch {
  SmallerOnAEigenline,  ///< B = diag(rho - 1, rho + 1): S1
  LargerOnAEigenline,   ///< B = diag(rho + 1, rho - 1): S-1
};

/// Throws PreconditionViolated when k == 0 and no branch is given; the
/// branch is geometric data the triple does not carry.
CaseTag case_tag(const InvariantTriple& inv, std::optional<SingularBranch> branch = std::nullopt);

/// Branch of a singular pair, read off in the coordinates where A is a
/// Jordan block.
SingularBranch singular_branch(const SystemPair& pair);

enum class JordanProbe { Auto, E1, E2 };

/// P such that P^-1 A P = [[lambda, 1], [0, lambda]] for nondiagonalizable A.
/// Columns are (A - lambda I) v and v for a probe v: e1 or e2, or under Auto
/// whichever of the two gives the larger image.
Mat2 jordan_basis(const Mat2& a, JordanProbe probe = JordanProbe::Auto);

struct NormalForm {
  Mat2 A_nf;
  Mat2 B_nf;
  /// T^-1 (A / tau) T == A_nf and likewise for B.
  Mat2 T;
  double tau = 1.0;
  CaseTag tag = CaseTag::R1;
  InvariantTriple inv;
  bool swapped = false;
  /// max |T^-1 (M / tau) T - M_nf| over both matrices.
  double residual = 0.0;
};

/// Throws CommutingPair or OutOfScope for rejected pairs.
NormalForm normal_form(const SystemPair& pair, const Tolerances& tol = {});
NormalForm normal_form(const CaseContext& ctx, const Tolerances& tol = {});

Mat2 canonical_A(double eta);
/// [[rho, s/k], [k, rho]] with s = sign(delta) for the regular tags
/// ([[rho, 0], [k, rho]] for R0); diag(rho -+ 1, rho +- 1) for S1 / S-1.
Mat2 canonical_B(CaseTag tag, double rho, double k);
SystemPair canonical_pair(CaseTag tag, double eta, double rho, double k);
/// Normal form of an already-canonical pair (T = I, tau = 1).
NormalForm canonical_normal_form(CaseTag tag, double eta, double rho, double k);

}  // namespace swstab
