#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "tev/errors.hpp"
#include "tev/kernel.hpp"

using namespace tev;

namespace {

constexpr double kPi = std::numbers::pi;

const LiouvilleData& example() {
  static const LiouvilleData l = liouville_transform(RefractiveProfile::named("colton_example"));
  return l;
}

const KernelGrid& example_grid(int n) {
  static const KernelGrid g400 = solve_kernel(example(), example().a() / 400);
  static const KernelGrid g800 = solve_kernel(example(), example().a() / 800);
  return n == 400 ? g400 : g800;
}

}  // namespace

TEST(Kernel, ZeroPotentialGivesZeroKernel) {
  const auto l = liouville_transform(RefractiveProfile::named("const4"));
  const auto g = solve_kernel(l, l.a() / 100);
  for (const auto& row : g.k) {
    for (double v : row) EXPECT_EQ(v, 0.0);
  }
  const auto tr = boundary_traces(l, g);
  for (std::size_t j = 0; j < tr.t.size(); ++j) {
    EXPECT_EQ(tr.k1[j], 0.0);
    EXPECT_EQ(tr.k2[j], 0.0);
  }
}

TEST(Kernel, RejectsCoarseGrid) {
  EXPECT_THROW(solve_kernel(example(), example().a() / 40), InvalidInput);
}

TEST(Kernel, PicardConverges) {
  const auto& g = example_grid(400);
  EXPECT_EQ(g.n, 400);
  EXPECT_LT(g.iterations, 200);
  EXPECT_LE(g.last_difference, 1e-12);
}

TEST(Kernel, VanishesAtZeroT) {
  const auto& g = example_grid(400);
  for (int i = 0; i <= g.n; ++i) EXPECT_EQ(g.at(i, 0), 0.0);
}

TEST(Kernel, DiagonalIdentityExactForConstantPotential) {
  // The example potential is identically 1/4, which the trapezoid rule integrates exactly.
  EXPECT_NEAR(example().q(0.3), 0.25, 1e-13);
  EXPECT_LE(example_grid(400).diagonal_residual(example()), 1e-12);
}

TEST(Kernel, DiagonalIdentityIsSecondOrder) {
  for (const char* name : {"raised_cosine", "smooth_step"}) {
    const auto l = liouville_transform(RefractiveProfile::named(name));
    const double r1 = solve_kernel(l, l.a() / 400).diagonal_residual(l);
    const double r2 = solve_kernel(l, l.a() / 800).diagonal_residual(l);
    EXPECT_LT(r1, 1e-4) << name;
    EXPECT_GE(r1 / r2, 3.0) << name;
    EXPECT_LE(r1 / r2, 5.0) << name;
  }
}

TEST(Kernel, EvenDerivativeVanishesAtZero) {
  const auto& g = example_grid(400);
  const double h = g.h;
  for (int i = 40; i <= g.n; i += 40) {
    // One-sided second difference, exact for cubics.
    const double d2 = (2.0 * g.at(i, 0) - 5.0 * g.at(i, 1) + 4.0 * g.at(i, 2) - g.at(i, 3)) / (h * h);
    EXPECT_LE(std::abs(d2), 1e-3) << "i=" << i;
  }
}

TEST(Traces, EndpointSumIsQuarterOfEtaSecondDerivative) {
  const auto tr = boundary_traces(example(), example_grid(400));
  EXPECT_NEAR(tr.k1.back() + tr.k2.back(), 0.125, 1e-12);
}

TEST(Traces, AgreeWithFiniteDifferences) {
  const auto tr = boundary_traces(example(), example_grid(400));
  for (std::size_t j = 0; j + 2 < tr.t.size(); ++j) {
    EXPECT_NEAR(tr.k1[j], tr.k1_fd[j], 1e-4) << "t=" << tr.t[j];
    EXPECT_NEAR(tr.k2[j], tr.k2_fd[j], 1e-4) << "t=" << tr.t[j];
  }
}

TEST(Traces, SumIdentityFromIndependentSides) {
  const auto tr = boundary_traces(example(), example_grid(400));
  for (std::size_t j = 0; j + 2 < tr.t.size(); ++j) {
    EXPECT_NEAR(tr.k1_fd[j] + tr.k2_fd[j], tr.sum_rhs[j], 1e-4) << "t=" << tr.t[j];
  }
}

TEST(Traces, AtZeroMatchClosedFormulas) {
  // At t = 0 the first integral is empty and the other two coincide.
  const auto tr = boundary_traces(example(), example_grid(400));
  EXPECT_EQ(tr.k1[0], 0.0);
  EXPECT_EQ(tr.k2[0], tr.sum_rhs[0]);
}

TEST(Representation, UnitIndexIsExact) {
  const auto p = RefractiveProfile::named("const1");
  const auto l = liouville_transform(p);
  const auto g = solve_kernel(l, l.a() / 100);
  const auto r = representation_check(p, l, g, 7.3);
  EXPECT_LE(r.residual_y1, 1e-12);
  EXPECT_LE(r.residual_dy1, 1e-12);
}

TEST(Representation, ColtonAgreesWithShooting) {
  const auto& p = example().profile();
  for (double k : {7.3, kPi, 2 * kPi, 3 * kPi, 4 * kPi, 5 * kPi}) {
    const auto raw = representation_check(p, example(), example_grid(800), k);
    EXPECT_LE(raw.residual_y1, 1e-4) << k;
    const auto r = representation_check(p, example(), example_grid(400), example_grid(800), k);
    EXPECT_LE(r.residual_y1, 1e-5) << k;
    EXPECT_LE(r.residual_dy1, 1e-5) << k;
  }
}

TEST(Representation, RequiresNormalizedTail) {
  const auto p = RefractiveProfile::named("const4");
  const auto l = liouville_transform(p);
  const auto g = solve_kernel(l, l.a() / 100);
  EXPECT_THROW(representation_check(p, l, g, 2.0), InvalidInput);
}

TEST(Kernel, CsvDump) {
  const auto l = liouville_transform(RefractiveProfile::named("colton_example"));
  const auto g = solve_kernel(l, l.a() / 60);
  std::ostringstream out;
  write_kernel_csv(out, g);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,t,K");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 61 * 62 / 2);
}
