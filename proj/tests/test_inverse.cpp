#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tev/errors.hpp"
#include "tev/inverse.hpp"

using namespace tev;

namespace {

const LiouvilleData& example() {
  static const LiouvilleData l(RefractiveProfile::named("colton_example"));
  return l;
}

// ln((3 - eps)/(1 + eps)) = mass, from the antiderivative ln((r+1)/(3-r)) of sqrt(eta).
double example_boundary(double mass) {
  const double e = std::exp(mass);
  return (3.0 - e) / (1.0 + e);
}

UniquenessScenario bumped(double height) {
  const auto q = Potential::from_profile(example());
  const double x0 = theorem3_epsilon(example()).x0;
  return UniquenessScenario::make(q, q.with_bump(0.25 * x0, 0.25 * x0, height), x0);
}

void expect_agree(const GValues& g, cplx k) {
  const double scale = std::max(1.0, std::abs(g.wronskian));
  EXPECT_LE(std::abs(g.integral - g.wronskian), 1e-8 * scale) << k;
}

}  // namespace

TEST(Theorem3, ExampleEndpoints) {
  const double a = std::log(3.0);
  const auto t = theorem3_epsilon(example());
  EXPECT_NEAR(t.epsilon, example_boundary(0.5 * (a - 1.0)), 1e-11);
  EXPECT_NEAR(t.epsilon1, example_boundary(0.5 * (a + 1.0)), 1e-11);
  EXPECT_GT(t.epsilon, t.epsilon1);
  EXPECT_NEAR(t.x0, 0.5 * (a + 1.0), 1e-15);
  EXPECT_NEAR(example().x_of_r(t.epsilon), t.x0, 1e-10);
  EXPECT_NEAR(example().x_of_r(t.epsilon) - example().x_of_r(t.epsilon1), 1.0, 1e-9);
}

TEST(Theorem3, NeedsLongTravelTime) {
  EXPECT_THROW(theorem3_epsilon(LiouvilleData(RefractiveProfile::named("const1"))), RegimeError);
  EXPECT_THROW(theorem3_epsilon(LiouvilleData(RefractiveProfile::named("smooth_step"))),
               RegimeError);
}

TEST(Scenario, CertifiesAgreement) {
  const auto q = Potential::from_profile(example());
  const double x0 = theorem3_epsilon(example()).x0;
  EXPECT_NO_THROW(UniquenessScenario::make(q, q, x0));
  EXPECT_THROW(UniquenessScenario::make(q, q.with_bump(x0, 0.1, 0.5), x0), InvalidInput);
  auto longer = q;
  longer.a += 1e-6;
  EXPECT_THROW(UniquenessScenario::make(q, longer, x0), InvalidInput);
  EXPECT_THROW(UniquenessScenario::make(q, q, q.a + 0.1), InvalidInput);
  EXPECT_THROW(q.with_bump(0.1, 0.0, 1.0), InvalidInput);
}

TEST(Wronskian, IdenticalPotentialsGiveZero) {
  const auto q = Potential::from_profile(example());
  const auto s = UniquenessScenario::make(q, q, theorem3_epsilon(example()).x0);
  for (cplx k : {cplx(3.7, 0.0), cplx(12.0, 2.5), cplx(0.0, 0.0)}) {
    const auto g = wronskian_g(s, k);
    EXPECT_EQ(g.integral, cplx(0.0, 0.0));
    EXPECT_LE(std::abs(g.wronskian), 1e-15);
  }
}

TEST(Wronskian, BumpAgreesBothWays) {
  const auto s = bumped(0.8);
  const auto g = wronskian_g(s, 3.7);
  EXPECT_GT(std::abs(g.wronskian), 1e-4);
  expect_agree(g, 3.7);
  const auto g0 = wronskian_g(s, 0.0);
  EXPECT_TRUE(std::isfinite(g0.integral.real()) && std::isfinite(g0.wronskian.real()));
  expect_agree(g0, 0.0);
}

TEST(Wronskian, RandomWavenumbers) {
  const auto s = bumped(-1.3);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(0.0, 30.0), im(0.0, 3.0);
  int done = 0;
  while (done < 50) {
    const cplx k(re(rng), im(rng));
    if (std::abs(k) > 30.0) continue;
    expect_agree(wronskian_g(s, k), k);
    ++done;
  }
}

TEST(Wronskian, PiecewisePotentialSplitsAtBreakpoints) {
  // raised_cosine has a ~1.05 > 1 and a C^3 seam inside (0, 1).
  const LiouvilleData l(RefractiveProfile::named("raised_cosine"));
  const auto q = Potential::from_profile(l);
  EXPECT_FALSE(q.breakpoints.empty());
  const double x0 = theorem3_epsilon(l).x0;
  const auto s = UniquenessScenario::make(q, q.with_bump(0.3 * x0, 0.2 * x0, 2.0), x0);
  for (cplx k : {cplx(5.0, 0.5), cplx(21.0, 1.0)}) expect_agree(wronskian_g(s, k), k);
}

TEST(Theorem4, Threshold) {
  const double a = std::log(3.0);
  const auto edge = theorem4_threshold(a, (a - 1.0) / 2.0);
  EXPECT_EQ(edge.value, 2.0);
  EXPECT_TRUE(edge.boundary);
  EXPECT_FALSE(edge.in_range);
  const auto top = theorem4_threshold(a, (a + 1.0) / 2.0);
  EXPECT_NEAR(top.value, 0.0, 1e-15);
  EXPECT_TRUE(top.in_range);
  const auto mid = theorem4_threshold(a, 0.6);
  EXPECT_NEAR(mid.value, a + 1.0 - 1.2, 1e-15);
  EXPECT_FALSE(mid.boundary);
  for (double b : {0.05, 0.3, 0.6, 1.0}) {
    EXPECT_NEAR(theorem4_threshold(a, b).value + 2.0 * b - 1.0, a, 4e-16) << b;
  }
}

TEST(Theorem4, Preconditions) {
  EXPECT_THROW(theorem4_threshold(1.0, 0.5), RegimeError);
  EXPECT_THROW(theorem4_threshold(0.8, 0.5), RegimeError);
  EXPECT_THROW(theorem4_threshold(2.0, 0.4), RegimeError);
  EXPECT_THROW(theorem4_threshold(2.0, 2.1), RegimeError);
}

TEST(Density, Counts) {
  EXPECT_EQ(density_estimate({}, 10.0).alpha_hat, 0.0);
  std::vector<SpectralZero> zs = {
      {cplx(3.0, 1.0), 1, ZeroClass::nonreal, 0.0},
      {cplx(5.0, 0.0), 1, ZeroClass::real, 0.0},
      {cplx(6.0, 1.0), 1, ZeroClass::nonreal, 0.0},
      {cplx(9.0, 1.0), 2, ZeroClass::nonreal, 0.0},
      {cplx(0.0, 20.0), 1, ZeroClass::nonreal, 0.0},
  };
  const auto all = density_estimate(zs, 10.0);
  EXPECT_EQ(all.count, 16);
  EXPECT_NEAR(all.alpha_hat, 16 * std::numbers::pi / 20.0, 1e-15);
  EXPECT_EQ(density_estimate(zs, 10.0, DensitySubset::every_second).count, 12);
  EXPECT_EQ(density_estimate(zs, 30.0).count, 18);
  EXPECT_THROW(density_estimate(zs, 0.0), InvalidInput);
}
