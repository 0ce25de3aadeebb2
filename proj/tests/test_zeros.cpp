#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tev/errors.hpp"
#include "tev/zeros.hpp"

using namespace tev;

namespace {

constexpr double kPi = std::numbers::pi;

int total_multiplicity(const std::vector<SpectralZero>& zs) {
  int n = 0;
  for (const auto& z : zs) n += z.multiplicity;
  return n;
}

const SearchReport& example_report(double tol) {
  static const SearchReport coarse =
      find_zeros(RefractiveProfile::named("colton_example"), {0.5, 20.0, 0.0, 5.0}, 1e-10);
  static const SearchReport fine =
      find_zeros(RefractiveProfile::named("colton_example"), {0.5, 20.0, 0.0, 5.0}, 1e-11);
  return tol == 1e-10 ? coarse : fine;
}

}  // namespace

TEST(CountZeros, TripleZeroOfConstantFour) {
  const auto p = RefractiveProfile::named("const4");
  EXPECT_EQ(count_zeros(p, {0.5, 3.5, -0.5, 0.5}), 3);
  EXPECT_EQ(count_zeros(p, {0.5, 0.9, 0.1, 0.5}), 0);
}

TEST(CountZeros, OriginIsADoubleZero) {
  const auto p = RefractiveProfile::named("const4");
  EXPECT_EQ(count_zeros(p, {-1.0, 1.0, -1.0, 1.0}), 2);
  const auto r = find_zeros(p, {0.0, 1.0, 0.0, 1.0});
  ASSERT_EQ(r.zeros.size(), 1u);
  EXPECT_EQ(r.zeros[0].k, cplx(0.0, 0.0));
  EXPECT_EQ(r.zeros[0].multiplicity, 2);
}

TEST(CountZeros, PerturbsContourThroughAZero) {
  // The right edge passes exactly through the triple zero at pi.
  const auto p = RefractiveProfile::named("const4");
  EXPECT_EQ(count_zeros(p, {0.5, kPi, -0.5, 0.5}), 3);
}

TEST(FindZeros, ConstantFourTripleZeros) {
  const auto r = find_zeros(RefractiveProfile::named("const4"), {0.5, 10.0, 0.0, 3.0});
  ASSERT_EQ(r.zeros.size(), 3u);
  for (int n = 1; n <= 3; ++n) {
    const auto& z = r.zeros[n - 1];
    EXPECT_LE(std::abs(z.k - n * kPi), 1e-8) << n;
    EXPECT_EQ(z.multiplicity, 3);
    EXPECT_EQ(z.cls, ZeroClass::real);
    EXPECT_LE(z.residual, 1e-8);
  }
  EXPECT_EQ(r.count, 9);
  EXPECT_EQ(total_multiplicity(r.all_zeros), r.contour_count);
}

TEST(FindZeros, UnitIndexIsDegenerate) {
  const auto p = RefractiveProfile::named("const1");
  EXPECT_THROW(find_zeros(p, {0.5, 10.0, 0.0, 3.0}), DegenerateCharacteristic);
  EXPECT_THROW(real_zeros(p, 20.0), DegenerateCharacteristic);
}

TEST(FindZeros, RejectsRectanglesOutsideFirstQuadrant) {
  const auto p = RefractiveProfile::named("const4");
  EXPECT_THROW(find_zeros(p, {-1.0, 1.0, 0.0, 1.0}), InvalidInput);
  EXPECT_THROW(find_zeros(p, {1.0, 1.0, 0.0, 1.0}), InvalidInput);
  EXPECT_THROW(find_zeros(p, {1.0, 2.0, 0.0, 1.0}, 1e-3), InvalidInput);
}

TEST(FindZeros, CountMatchesMultiplicitiesOnRandomRectangles) {
  const auto p = RefractiveProfile::named("const4");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> left(0.2, 12.0), width(0.4, 6.0), height(0.2, 2.0);
  for (int i = 0; i < 20; ++i) {
    const double x0 = left(rng);
    const double x1 = x0 + width(rng);
    const double y1 = height(rng);
    const double y0 = i % 2 ? 0.0 : 0.5 * y1;
    const auto r = find_zeros(p, {x0, x1, y0, y1});
    EXPECT_EQ(total_multiplicity(r.all_zeros), r.contour_count) << i;
    EXPECT_EQ(count_zeros(p, r.searched), r.contour_count) << i;
    int expected = 0;
    if (y0 == 0.0) {
      for (int n = 1; n * kPi <= x1; ++n) expected += n * kPi >= x0 ? 3 : 0;
    }
    EXPECT_EQ(r.count, expected) << "rect " << x0 << " " << x1 << " " << y0 << " " << y1;
  }
}

TEST(FindZeros, TwoToleranceStability) {
  const auto& a = example_report(1e-10);
  const auto& b = example_report(1e-11);
  ASSERT_EQ(a.zeros.size(), b.zeros.size());
  ASSERT_GE(a.zeros.size(), 4u);
  for (std::size_t i = 0; i < a.zeros.size(); ++i) {
    EXPECT_LE(std::abs(a.zeros[i].k - b.zeros[i].k), 10 * 1e-10);
    EXPECT_EQ(a.zeros[i].multiplicity, b.zeros[i].multiplicity);
  }
}

TEST(FindZeros, SymmetryClosure) {
  const CharacteristicFunction f(RefractiveProfile::named("colton_example"));
  for (const auto& z : example_report(1e-10).zeros) {
    EXPECT_LE(z.residual, 1e-8);
    EXPECT_LE(std::abs(f.scaled(std::conj(z.k)).value), 1e-8) << z.k;
    EXPECT_LE(std::abs(f.scaled(-z.k).value), 1e-8) << z.k;
  }
}

TEST(FindZeros, ParallelSearchMatchesSequential) {
  const auto p = RefractiveProfile::named("colton_example");
  SearchOptions opt;
  opt.parallel = true;
  const auto r = find_zeros(p, {0.5, 20.0, 0.0, 5.0}, 1e-10, opt);
  const auto& s = example_report(1e-10);
  ASSERT_EQ(r.zeros.size(), s.zeros.size());
  for (std::size_t i = 0; i < r.zeros.size(); ++i) EXPECT_EQ(r.zeros[i].k, s.zeros[i].k);
}

TEST(FindZeros, SmallMmaxStillResolves) {
  SearchOptions opt;
  opt.mmax = 1;
  const auto r = find_zeros(RefractiveProfile::named("colton_example"), {0.5, 20.0, 0.0, 5.0},
                            1e-10, opt);
  const auto& s = example_report(1e-10);
  ASSERT_EQ(r.zeros.size(), s.zeros.size());
  for (std::size_t i = 0; i < r.zeros.size(); ++i) {
    EXPECT_LE(std::abs(r.zeros[i].k - s.zeros[i].k), 1e-9);
  }
}

TEST(RealZeros, ConstantFour) {
  const auto zs = real_zeros(RefractiveProfile::named("const4"), 10.0);
  ASSERT_EQ(zs.size(), 3u);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_LE(std::abs(zs[n - 1].k - n * kPi), 1e-8);
    EXPECT_EQ(zs[n - 1].multiplicity, 3);
    EXPECT_EQ(zs[n - 1].cls, ZeroClass::real);
  }
}

TEST(RealZeros, ExampleApproachesLinearLaw) {
  const auto p = RefractiveProfile::named("colton_example");
  const double a = travel_time(p);
  const auto zs = real_zeros(p, 130.0);
  ASSERT_GE(zs.size(), 4u);
  double prev = 1e300;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    EXPECT_EQ(zs[i].multiplicity, 1);
    const double ratio = zs[i].k.real() * (a - 1.0) / ((i + 1) * kPi);
    EXPECT_LT(std::abs(ratio - 1.0), prev) << i;
    prev = std::abs(ratio - 1.0);
  }
  EXPECT_LT(prev, 1e-3);
}
