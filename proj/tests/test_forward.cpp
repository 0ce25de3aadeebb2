#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tev/errors.hpp"
#include "tev/forward.hpp"
#include "tev/rk78.hpp"

using namespace tev;

namespace {

constexpr double kPi = std::numbers::pi;

cplx true_y1(const BoundaryValues& b) { return b.y1 * std::exp(b.scale_log); }
cplx true_dy1(const BoundaryValues& b) { return b.dy1 * std::exp(b.scale_log); }

// Classical fixed-step RK4 for the shooting problem, Richardson-extrapolated
// over two step counts.
std::pair<cplx, cplx> rk4_shoot(const RefractiveProfile& p, cplx k, int n) {
  const cplx k2 = k * k;
  auto f = [&](double r, cplx y, cplx dy, cplx& fy, cplx& fdy) {
    fy = dy;
    fdy = -k2 * p.eta(r) * y;
  };
  cplx y = 0.0, dy = 1.0;
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const double r = i * h;
    cplx a1, b1, a2, b2, a3, b3, a4, b4;
    f(r, y, dy, a1, b1);
    f(r + 0.5 * h, y + 0.5 * h * a1, dy + 0.5 * h * b1, a2, b2);
    f(r + 0.5 * h, y + 0.5 * h * a2, dy + 0.5 * h * b2, a3, b3);
    f(r + h, y + h * a3, dy + h * b3, a4, b4);
    y += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    dy += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
  }
  return {y, dy};
}

}  // namespace

TEST(SolveIvp, UnitIndexAtPi) {
  const auto b = solve_ivp(RefractiveProfile::named("const1"), kPi);
  EXPECT_NEAR(std::abs(true_y1(b)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(true_dy1(b) + 1.0), 0.0, 1e-12);
}

TEST(SolveIvp, ConstantFourClosedForm) {
  const auto p = RefractiveProfile::named("const4");
  for (cplx k : {cplx(0.7, 0.0), cplx(3.0, 1.0), cplx(25.0, -4.0), cplx(0.0, 30.0),
                 cplx(120.0, 60.0)}) {
    const auto b = solve_ivp(p, k);
    const cplx y = std::sin(2.0 * k) / (2.0 * k);
    const cplx dy = std::cos(2.0 * k);
    EXPECT_LE(std::abs(true_y1(b) - y), 1e-10 * std::max(1.0, std::abs(y))) << k;
    EXPECT_LE(std::abs(true_dy1(b) - dy), 1e-10 * std::max(1.0, std::abs(dy))) << k;
  }
}

TEST(SolveIvp, StoredMagnitudesStayBounded) {
  const auto b = solve_ivp(RefractiveProfile::named("colton_example"), cplx(5.0, 250.0));
  EXPECT_GT(b.scale_log, 200.0);
  const double m = std::max(std::abs(b.y1) * 255.0, std::abs(b.dy1));
  EXPECT_GE(m, 1e-2);
  EXPECT_LE(m, 1e2);
}

TEST(SolveIvp, RealInputsGiveRealOutputs) {
  const auto p = RefractiveProfile::named("colton_example");
  for (double k : {1.0, 7.5, 33.0}) {
    const auto b = solve_ivp(p, k);
    EXPECT_EQ(b.y1.imag(), 0.0);
    EXPECT_EQ(b.dy1.imag(), 0.0);
  }
}

TEST(SolveIvp, AgreesWithIndependentRk4) {
  const auto p = RefractiveProfile::named("colton_example");
  const cplx k(10.0, 2.0);
  const auto b = solve_ivp(p, k, 1e-13);
  const auto [y1, dy1] = rk4_shoot(p, k, 8000);
  const auto [y2, dy2] = rk4_shoot(p, k, 16000);
  const cplx y = y2 + (y2 - y1) / 15.0;
  const cplx dy = dy2 + (dy2 - dy1) / 15.0;
  EXPECT_LE(std::abs(true_y1(b) - y), 1e-9 * std::abs(y));
  EXPECT_LE(std::abs(true_dy1(b) - dy), 1e-9 * std::abs(dy));
}

TEST(SolveIvp, RejectsToleranceOutsideRange) {
  const auto p = RefractiveProfile::named("const1");
  EXPECT_THROW(solve_ivp(p, 1.0, 1e-14), InvalidInput);
  EXPECT_THROW(solve_ivp(p, 1.0, 1e-5), InvalidInput);
}

TEST(Characteristic, UnitIndexIsDegenerate) {
  const auto p = RefractiveProfile::named("const1");
  for (cplx k : {cplx(0.3, 0.0), cplx(4.0, 2.0), cplx(40.0, -10.0)}) {
    const auto v = characteristic(p, k);
    EXPECT_LE(std::abs(v.d), 1e-11) << k;
  }
}

TEST(Characteristic, ConstantFourIsMinusSinCubedOverK) {
  const auto p = RefractiveProfile::named("const4");
  for (cplx k : {cplx(0.05, 0.02), cplx(1.3, 0.0), cplx(2.0, 1.5), cplx(17.0, -3.0),
                 cplx(80.0, 40.0)}) {
    const auto v = characteristic(p, k);
    const cplx s = std::sin(k);
    const cplx d = -s * s * s / k;
    const cplx dd = -3.0 * s * s * std::cos(k) / k + s * s * s / (k * k);
    const double scale = std::exp(3.0 * std::abs(k.imag()));
    EXPECT_LE(std::abs(v.unscaled_d() - d), 1e-10 * std::max(scale, std::abs(d))) << k;
    EXPECT_LE(std::abs(v.unscaled_d_prime() - dd), 1e-9 * std::max(scale, std::abs(dd))) << k;
  }
}

TEST(Characteristic, ZeroIsADoubleZero) {
  const auto p = RefractiveProfile::named("colton_example");
  const auto v = characteristic(p, 0.0);
  EXPECT_LE(std::abs(v.unscaled_d()), 1e-13);
  EXPECT_LE(std::abs(v.unscaled_d_prime()), 1e-13);
}

TEST(Characteristic, RealOnRealAxis) {
  const auto p = RefractiveProfile::named("colton_example");
  for (int i = 0; i <= 49; ++i) {
    const auto v = characteristic(p, 1.0 + i);
    EXPECT_LE(std::abs(v.d.imag()), 1e-10 * std::abs(v.d));
  }
}

TEST(Characteristic, EvenAndConjugateSymmetric) {
  const auto p = RefractiveProfile::named("colton_example");
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> radius(1.0, 50.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const cplx k = std::polar(radius(rng), angle(rng));
    const auto v = characteristic(p, k);
    const auto vm = characteristic(p, -k);
    const auto vc = characteristic(p, std::conj(k));
    // Compare on the common scale of v.
    const cplx dm = vm.d * std::exp(vm.scale_log - v.scale_log);
    const cplx dc = vc.d * std::exp(vc.scale_log - v.scale_log);
    const double scale = std::max(std::abs(v.d), std::exp(-v.scale_log));
    EXPECT_LE(std::abs(v.d - dm), 1e-10 * scale) << k;
    EXPECT_LE(std::abs(std::conj(v.d) - dc), 1e-10 * scale) << k;
  }
}

TEST(Characteristic, DerivativeMatchesFiniteDifference) {
  const auto p = RefractiveProfile::named("colton_example");
  const double h = 1e-5;
  for (cplx k : {cplx(3.3, 0.4), cplx(12.0, -2.0), cplx(30.0, 5.0)}) {
    const auto v = characteristic(p, k);
    const auto vp = characteristic(p, k + h);
    const auto vm = characteristic(p, k - h);
    const cplx fd = (vp.unscaled_d() - vm.unscaled_d()) / (2.0 * h);
    EXPECT_LE(std::abs(v.unscaled_d_prime() - fd), 1e-6 * std::abs(fd)) << k;
  }
}

TEST(Characteristic, WronskianIsConstant) {
  const auto p = RefractiveProfile::named("raised_cosine");
  const cplx k(9.0, 0.0);
  auto rhs = [&](double r, const CVec<2>& u, CVec<2>& du) {
    du[0] = u[1];
    du[1] = -k * k * p.eta(r) * u[0];
  };
  Rk78Integrator<2, decltype(rhs)> s(rhs, 0.0, {0.0, 1.0}, 1e-13, 0.05, {9.0, 1.0});
  Rk78Integrator<2, decltype(rhs)> c(rhs, 0.0, {1.0, 0.0}, 1e-13, 0.05, {9.0, 1.0});
  for (int i = 1; i <= 20; ++i) {
    const double r = i / 20.0;
    s.advance_to(r);
    c.advance_to(r);
    const cplx w = (c.state()[0] * s.state()[1] - c.state()[1] * s.state()[0]) *
                   std::exp(s.scale_log() + c.scale_log());
    EXPECT_LE(std::abs(w - 1.0), 1e-10) << r;
  }
}

TEST(CharacteristicFunction, ScaledSampleIsBounded) {
  const CharacteristicFunction f(RefractiveProfile::named("colton_example"));
  for (cplx k : {cplx(3.0, 1.0), cplx(50.0, 100.0), cplx(10.0, 400.0)}) {
    const auto s = f.scaled(k);
    EXPECT_TRUE(std::isfinite(std::abs(s.value)));
    EXPECT_LE(std::abs(s.value), 10.0);
  }
}
