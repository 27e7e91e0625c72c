#pragma once

#include <array>
#include <string_view>

#include "swstab/tolerance.hpp"

namespace swstab {

/// State vector in the plane. Entries are always finite.
class Vec2 {
 public:
  constexpr Vec2() = default;
  Vec2(double x1, double x2);

  double x1() const noexcept { return x1_; }
  double x2() const noexcept { return x2_; }

  double norm() const noexcept;
  bool is_zero() const noexcept { return x1_ == 0.0 && x2_ == 0.0; }

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x1_ + b.x1_, a.x2_ + b.x2_}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x1_ - b.x1_, a.x2_ - b.x2_}; }
  friend Vec2 operator*(double s, const Vec2& v) { return {s * v.x1_, s * v.x2_}; }
  friend Vec2 operator-(const Vec2& v) { return {-v.x1_, -v.x2_}; }
  bool operator==(const Vec2&) const = default;

 private:
  double x1_ = 0.0;
  double x2_ = 0.0;
};

double dot(const Vec2& a, const Vec2& b) noexcept;
/// det(a, b) with a, b as columns.
double cross(const Vec2& a, const Vec2& b) noexcept;

/// Real 2x2 matrix, row-major. Entries are always finite.
class Mat2 {
 public:
  constexpr Mat2() = default;
  Mat2(double a11, double a12, double a21, double a22);

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }
  static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  /// Matrix whose columns are c1 and c2.
  static Mat2 from_columns(const Vec2& c1, const Vec2& c2);

  double a11() const noexcept { return e_[0]; }
  double a12() const noexcept { return e_[1]; }
  double a21() const noexcept { return e_[2]; }
  double a22() const noexcept { return e_[3]; }
  const std::array<double, 4>& entries() const noexcept { return e_; }

  Vec2 col1() const { return {e_[0], e_[2]}; }
  Vec2 col2() const { return {e_[1], e_[3]}; }

  /// Largest absolute entry.
  double max_abs() const noexcept;
  Mat2 inverse() const;

  friend Mat2 operator+(const Mat2& a, const Mat2& b);
  friend Mat2 operator-(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(double s, const Mat2& m);
  friend Vec2 operator*(const Mat2& m, const Vec2& v);
  bool operator==(const Mat2&) const = default;

 private:
  std::array<double, 4> e_{};
};

double trace(const Mat2& m) noexcept;
double det(const Mat2& m) noexcept;
/// AB - BA.
Mat2 commutator(const Mat2& a, const Mat2& b);
/// Largest absolute entry of a - b.
double max_abs_diff(const Mat2& a, const Mat2& b) noexcept;

enum class SpectralTag { RealDistinct, ComplexPair, RepeatedDiagonalizable, RepeatedNondiagonalizable };

std::string_view to_string(SpectralTag tag) noexcept;

struct SpectralKind {
  SpectralTag tag = SpectralTag::RealDistinct;
  /// trace^2 - 4 det, evaluated as (a11 - a22)^2 + 4 a12 a21.
  double discriminant = 0.0;

  bool operator==(const SpectralKind&) const = default;
};

/// Magnitude of the terms that make up the discriminant; the zero test for
/// the discriminant is taken relative to this.
double discriminant_scale(const Mat2& m) noexcept;

SpectralKind spectral_kind(const Mat2& m, const Tolerances& tol = {});

/// exp(M t) for M in one of the normal-form shapes: upper or lower shear
/// with equal diagonal, equal diagonal with off-diagonal product of either
/// sign (rotation / hyperbolic), or diagonal. Throws ShapeMismatch otherwise,
/// or when `kind` contradicts the shape.
Mat2 expm_normal(const Mat2& m, const SpectralKind& kind, double t, const Tolerances& tol = {});
Mat2 expm_normal(const Mat2& m, double t, const Tolerances& tol = {});

/// exp(M t) by scaling and squaring a truncated Taylor series (order 18, at
/// most 20 squarings). General-purpose; used as the oracle for expm_normal
/// and for flowing raw, non-normal-form matrices.
Mat2 expm_reference(const Mat2& m, double t);

}  // namespace swstab
