#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "swstab/collinearity.hpp"
#include "swstab/errors.hpp"

using namespace swstab;
using swstab::testing::Params;
using swstab::testing::rel_err;
using swstab::testing::Rng;

namespace {

double delta_of(const Params& p) {
  const double s = delta_sign_of(p.tag);
  return p.k * p.k - 4.0 * p.eta * p.rho * p.k + 4.0 * s * p.eta * p.eta;
}

}  // namespace

TEST(ProjectiveSlope, VerticalLine) {
  const auto v = ProjectiveSlope::infinity();
  EXPECT_TRUE(v.is_infinite());
  EXPECT_THROW(v.value(), PreconditionViolated);
  EXPECT_EQ(v.direction(), Vec2(0.0, 1.0));
  EXPECT_DOUBLE_EQ(v.angle(), std::numbers::pi / 2.0);
  const auto f = ProjectiveSlope::finite(-1.0);
  EXPECT_DOUBLE_EQ(f.angle(), 3.0 * std::numbers::pi / 4.0);
  EXPECT_GE(f.direction().x1(), 0.0);
}

TEST(Quadratic, FormulaMatchesDeterminant) {
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const Params p = swstab::testing::random_params(rng);
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    const Vec2 x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double q = quadratic_Q(nf, x);
    EXPECT_NEAR(quadratic_Q_formula(nf.inv, p.tag, x), q, 1e-10 * std::max(1.0, std::abs(q)));
  }
}

TEST(Quadratic, DiscriminantSignDecidesTheZeroSet) {
  Rng rng(32);
  for (int i = 0; i < 2000; ++i) {
    const Params p = swstab::testing::random_params(rng);
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    const auto data = analyze_collinearity(nf);
    EXPECT_NEAR(data.Delta, delta_of(p), 1e-12 * std::max(1.0, std::abs(delta_of(p))));
    if (data.Delta_sign < 0) {
      EXPECT_TRUE(std::holds_alternative<OriginOnly>(data.zset));
    } else if (data.Delta_sign > 0) {
      EXPECT_TRUE(std::holds_alternative<TwoLines>(data.zset));
    }
  }
}

TEST(Slopes, AgreeWithSampledQuadratic) {
  Rng rng(33);
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    const Params p = swstab::testing::random_params(rng);
    if (delta_of(p) < 1e-3) continue;
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    const auto lines = std::get<TwoLines>(slopes(nf.inv, p.tag));
    if (lines.m_plus.is_infinite() || lines.m_minus.is_infinite()) continue;
    const auto roots = swstab::testing::quadratic_roots_by_sampling(nf.A_nf, nf.B_nf);
    ASSERT_EQ(roots.count, 2);
    const double a = lines.m_plus.value();
    const double b = lines.m_minus.value();
    const bool same = std::abs(a - roots.m1) + std::abs(b - roots.m2) < std::abs(a - roots.m2) + std::abs(b - roots.m1);
    const double r1 = same ? roots.m1 : roots.m2;
    const double r2 = same ? roots.m2 : roots.m1;
    EXPECT_NEAR(a, r1, 1e-8 * std::max(1.0, std::abs(r1))) << i;
    EXPECT_NEAR(b, r2, 1e-8 * std::max(1.0, std::abs(r2))) << i;
    EXPECT_NEAR(quadratic_Q(nf, lines.m_plus.direction()), 0.0, 1e-10 * std::max(1.0, nf.B_nf.max_abs()));
    ++checked;
  }
  EXPECT_GT(checked, 500);
}

TEST(Slopes, SingularFormulas) {
  const auto s1 = std::get<TwoLines>(slopes(compute_invariants(canonical_pair(CaseTag::S1, -1.0, -3.0, 0.0)),
                                            CaseTag::S1));
  EXPECT_EQ(s1.m_plus.value(), 0.0);
  EXPECT_DOUBLE_EQ(s1.m_minus.value(), -2.0 * -1.0 / (-3.0 + 1.0));
  const auto sm = std::get<TwoLines>(
      slopes(compute_invariants(canonical_pair(CaseTag::Sminus1, -1.0, -3.0, 0.0)), CaseTag::Sminus1));
  EXPECT_EQ(sm.m_plus.value(), 0.0);
  EXPECT_DOUBLE_EQ(sm.m_minus.value(), 0.5);
}

TEST(Slopes, VanishingChiGivesTheVerticalLine) {
  const double eta = -1.0;
  const double k = -2.0;
  const double rho = -eta / k;
  const NormalForm m1 = canonical_normal_form(CaseTag::Rminus1, eta, rho, k);
  EXPECT_TRUE(chi_vanishes(m1.inv));
  const auto z = std::get<TwoLines>(slopes(m1.inv, CaseTag::Rminus1));
  EXPECT_TRUE(z.m_plus.is_infinite());
  EXPECT_DOUBLE_EQ(z.m_minus.value(), -eta);

  const NormalForm p1 = canonical_normal_form(CaseTag::R1, -1.0, -1.0 / 0.5, 0.5);
  EXPECT_TRUE(chi_vanishes(p1.inv));
  const auto w = std::get<TwoLines>(slopes(p1.inv, CaseTag::R1));
  EXPECT_TRUE(w.m_minus.is_infinite());
  EXPECT_DOUBLE_EQ(w.m_plus.value(), 1.0);
}

TEST(Alphas, CollinearityAndProductSumIdentities) {
  Rng rng(34);
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    const Params p = swstab::testing::random_params(rng);
    if (delta_of(p) < 1e-3) continue;
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    const auto z = slopes(nf.inv, p.tag);
    const auto [ap, am] = alphas(nf, z);
    const auto& lines = std::get<TwoLines>(z);
    for (const auto& [slope, alpha] : {std::pair{lines.m_plus, ap}, std::pair{lines.m_minus, am}}) {
      const Vec2 x = slope.direction();
      const Vec2 r = nf.B_nf * x - alpha * (nf.A_nf * x);
      EXPECT_LT(r.norm(), 1e-9 * std::max(1.0, (nf.B_nf * x).norm())) << i;
    }
    const double detA = det(nf.A_nf);
    EXPECT_LT(rel_err(ap * am, det(nf.B_nf) / detA), 1e-9) << i;
    const double sum = (2.0 * p.eta * p.rho - p.k) / detA;
    EXPECT_LT(std::abs(ap + am - sum) / std::max(1e-300, std::abs(sum)), 1e-9) << i;
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(Orientation, SignOfKMinusTwoEtaRho) {
  InvariantTriple inv;
  inv.eta = -1.0;
  inv.rho = -1.0;
  inv.k = 1.0;
  EXPECT_EQ(orientation(inv, 1.0), Orientation::Direct);
  inv.k = 3.0;
  EXPECT_EQ(orientation(inv, 1.0), Orientation::Inverse);
  EXPECT_EQ(orientation(inv, -1.0), Orientation::NotApplicable);
  EXPECT_EQ(to_string(Orientation::Inverse), "inverse");
}

TEST(Orientation, KAtTwoEtaRhoIsDefinite) {
  Rng rng(35);
  constexpr CaseTag tags[] = {CaseTag::R1, CaseTag::Rminus1, CaseTag::R0};
  for (int i = 0; i < 3000; ++i) {
    Params p = swstab::testing::random_params(rng, tags[i % 3]);
    p.k = 2.0 * p.eta * p.rho;
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    const double Delta = discriminant_Delta(nf.inv);
    EXPECT_LT(discriminant_sign(nf.inv), 0);
    EXPECT_LT(rel_err(Delta, -4.0 * det(nf.A_nf) * det(nf.B_nf)), 1e-9);
  }
}

TEST(Clockwise, AHoldsOnEveryLine) {
  Rng rng(36);
  for (int i = 0; i < 2000; ++i) {
    const Params p = swstab::testing::random_params(rng);
    const NormalForm nf = canonical_normal_form(p.tag, p.eta, p.rho, p.k);
    const auto data = analyze_collinearity(nf);
    if (data.Delta_sign < 0) continue;
    EXPECT_TRUE(clockwise_check(nf, data.zset)) << i;
  }
}

TEST(ProjectiveArc, ComponentContainingAnchor) {
  const TwoLines lines{ProjectiveSlope::finite(1.0), ProjectiveSlope::finite(-1.0)};
  const ProjectiveArc arc = component_containing(lines, 0.0);
  EXPECT_TRUE(arc.contains(0.0));
  EXPECT_TRUE(arc.contains(0.1));
  EXPECT_TRUE(arc.contains(std::numbers::pi - 0.1));
  EXPECT_FALSE(arc.contains(std::numbers::pi / 2.0));
  EXPECT_DOUBLE_EQ(line_angle(Vec2(-1.0, -1.0)), std::numbers::pi / 4.0);
}
