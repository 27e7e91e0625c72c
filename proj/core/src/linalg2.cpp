#include "swstab/linalg2.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swstab/errors.hpp"

namespace swstab {

namespace {

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NonFiniteValue(std::string(what) + " has a non-finite entry");
    }
  }
}

}  // namespace

Vec2::Vec2(double x1, double x2) : x1_(x1), x2_(x2) { require_finite({x1, x2}, "Vec2"); }

double Vec2::norm() const noexcept { return std::hypot(x1_, x2_); }

double dot(const Vec2& a, const Vec2& b) noexcept { return a.x1() * b.x1() + a.x2() * b.x2(); }

double cross(const Vec2& a, const Vec2& b) noexcept { return a.x1() * b.x2() - a.x2() * b.x1(); }

Mat2::Mat2(double a11, double a12, double a21, double a22) : e_{a11, a12, a21, a22} {
  require_finite({a11, a12, a21, a22}, "Mat2");
}

Mat2 Mat2::from_columns(const Vec2& c1, const Vec2& c2) { return {c1.x1(), c2.x1(), c1.x2(), c2.x2()}; }

double Mat2::max_abs() const noexcept {
  double m = 0.0;
  for (double v : e_) m = std::max(m, std::abs(v));
  return m;
}

Mat2 Mat2::inverse() const {
  const double d = det(*this);
  if (d == 0.0) throw PreconditionViolated("Mat2::inverse: singular matrix");
  return {e_[3] / d, -e_[1] / d, -e_[2] / d, e_[0] / d};
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.e_[0] + b.e_[0], a.e_[1] + b.e_[1], a.e_[2] + b.e_[2], a.e_[3] + b.e_[3]};
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.e_[0] - b.e_[0], a.e_[1] - b.e_[1], a.e_[2] - b.e_[2], a.e_[3] - b.e_[3]};
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.e_[0] * b.e_[0] + a.e_[1] * b.e_[2], a.e_[0] * b.e_[1] + a.e_[1] * b.e_[3],
          a.e_[2] * b.e_[0] + a.e_[3] * b.e_[2], a.e_[2] * b.e_[1] + a.e_[3] * b.e_[3]};
}

Mat2 operator*(double s, const Mat2& m) { return {s * m.e_[0], s * m.e_[1], s * m.e_[2], s * m.e_[3]}; }

Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.e_[0] * v.x1() + m.e_[1] * v.x2(), m.e_[2] * v.x1() + m.e_[3] * v.x2()};
}

double trace(const Mat2& m) noexcept { return m.a11() + m.a22(); }

double det(const Mat2& m) noexcept { return m.a11() * m.a22() - m.a12() * m.a21(); }

Mat2 commutator(const Mat2& a, const Mat2& b) {
  // Written out so that [A,B] == -[B,A] holds bit for bit.
  const double c11 = a.a12() * b.a21() - b.a12() * a.a21();
  const double c12 = (a.a11() * b.a12() + a.a12() * b.a22()) - (b.a11() * a.a12() + b.a12() * a.a22());
  const double c21 = (a.a21() * b.a11() + a.a22() * b.a21()) - (b.a21() * a.a11() + b.a22() * a.a21());
  return {c11, c12, c21, -c11};
}

double max_abs_diff(const Mat2& a, const Mat2& b) noexcept {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

std::string_view to_string(SpectralTag tag) noexcept {
  switch (tag) {
    case SpectralTag::RealDistinct: return "RealDistinct";
    case SpectralTag::ComplexPair: return "ComplexPair";
    case SpectralTag::RepeatedDiagonalizable: return "RepeatedDiagonalizable";
    case SpectralTag::RepeatedNondiagonalizable: return "RepeatedNondiagonalizable";
  }
  return "?";
}

double discriminant_scale(const Mat2& m) noexcept {
  const double d = m.a11() - m.a22();
  return d * d + 4.0 * std::abs(m.a12() * m.a21());
}

SpectralKind spectral_kind(const Mat2& m, const Tolerances& tol) {
  const double d = m.a11() - m.a22();
  SpectralKind kind;
  kind.discriminant = d * d + 4.0 * m.a12() * m.a21();
  const int s = sign_with_tolerance(kind.discriminant, discriminant_scale(m), tol.degenerate);
  if (s > 0) {
    kind.tag = SpectralTag::RealDistinct;
  } else if (s < 0) {
    kind.tag = SpectralTag::ComplexPair;
  } else {
    const double scale = m.max_abs();
    const bool scalar = near_zero(m.a12(), scale, tol.degenerate) && near_zero(m.a21(), scale, tol.degenerate) &&
                        near_zero(d, scale, tol.degenerate);
    kind.tag = scalar ? SpectralTag::RepeatedDiagonalizable : SpectralTag::RepeatedNondiagonalizable;
  }
  return kind;
}

namespace {

[[noreturn]] void shape_mismatch(const Mat2& m, const char* why) {
  std::ostringstream os;
  os.precision(17);
  os << "expm_normal: [[" << m.a11() << ", " << m.a12() << "], [" << m.a21() << ", " << m.a22() << "]] " << why;
  throw ShapeMismatch(os.str());
}

}  // namespace

Mat2 expm_normal(const Mat2& m, const SpectralKind& kind, double t, const Tolerances& tol) {
  const double scale = m.max_abs();
  const bool b_zero = near_zero(m.a12(), scale, tol.degenerate);
  const bool c_zero = near_zero(m.a21(), scale, tol.degenerate);
  const bool equal_diag = near_zero(m.a11() - m.a22(), scale, tol.degenerate);

  if (b_zero && c_zero) {
    if (kind.tag == SpectralTag::ComplexPair || kind.tag == SpectralTag::RepeatedNondiagonalizable) {
      shape_mismatch(m, "is diagonal but the spectral kind disagrees");
    }
    return Mat2::diag(std::exp(m.a11() * t), std::exp(m.a22() * t));
  }
  if (!equal_diag) shape_mismatch(m, "is not a supported normal-form shape");

  const double s = 0.5 * (m.a11() + m.a22());
  const double growth = std::exp(s * t);
  const double b = b_zero ? 0.0 : m.a12();
  const double c = c_zero ? 0.0 : m.a21();

  if (b_zero || c_zero) {
    if (kind.tag != SpectralTag::RepeatedNondiagonalizable) {
      shape_mismatch(m, "is a shear but the spectral kind is not RepeatedNondiagonalizable");
    }
    return growth * Mat2(1.0, b * t, c * t, 1.0);
  }

  const double bc = b * c;
  if (bc < 0.0) {
    if (kind.tag == SpectralTag::RealDistinct || kind.tag == SpectralTag::RepeatedDiagonalizable) {
      shape_mismatch(m, "rotates but the spectral kind has real eigenvalues");
    }
    const double w = std::sqrt(-bc);
    const double cs = std::cos(w * t);
    const double sn = std::sin(w * t) / w;
    return growth * Mat2(cs, b * sn, c * sn, cs);
  }
  if (kind.tag == SpectralTag::ComplexPair || kind.tag == SpectralTag::RepeatedDiagonalizable) {
    shape_mismatch(m, "is hyperbolic but the spectral kind disagrees");
  }
  const double w = std::sqrt(bc);
  const double ep = std::exp((s + w) * t);
  const double em = std::exp((s - w) * t);
  const double ch = 0.5 * (ep + em);
  const double sh = 0.5 * (ep - em) / w;
  return {ch, b * sh, c * sh, ch};
}

Mat2 expm_normal(const Mat2& m, double t, const Tolerances& tol) {
  return expm_normal(m, spectral_kind(m, tol), t, tol);
}

Mat2 expm_reference(const Mat2& m, double t) {
  constexpr int kOrder = 18;
  constexpr int kMaxSquarings = 20;

  Mat2 x = t * m;
  const double row_norm = std::max(std::abs(x.a11()) + std::abs(x.a12()), std::abs(x.a21()) + std::abs(x.a22()));
  int squarings = 0;
  if (row_norm > 0.5) {
    squarings = std::min(kMaxSquarings, static_cast<int>(std::ceil(std::log2(row_norm / 0.5))));
  }
  x = std::ldexp(1.0, -squarings) * x;

  // Horner evaluation of sum_{j<=kOrder} x^j / j!.
  Mat2 result = Mat2::identity();
  for (int j = kOrder; j >= 1; --j) {
    result = Mat2::identity() + (1.0 / j) * (x * result);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace swstab
