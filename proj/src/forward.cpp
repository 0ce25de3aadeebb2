#include "tev/forward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tev/errors.hpp"
#include "tev/rk78.hpp"

namespace tev {

namespace {

void check_tol(double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    std::ostringstream msg;
    msg << "integration tolerance " << tol << " outside [1e-13, 1e-6]";
    throw InvalidInput(msg.str());
  }
}

double max_step(const RefractiveProfile& profile, cplx k) {
  return std::min(0.1, 0.5 / (std::abs(k) * std::sqrt(profile.eta_max()) + 1.0));
}

// sin(k)/k and its derivative, both times exp(-|Im k|).
struct ScaledTrig {
  cplx s;       // sin k e^{-m}
  cplx c;       // cos k e^{-m}
  cplx sinc;    // sin k / k e^{-m}
  cplx dsinc;   // d/dk (sin k / k) e^{-m}
};

ScaledTrig scaled_trig(cplx k) {
  const double m = std::abs(k.imag());
  const cplx i(0.0, 1.0);
  const cplx ep = std::exp(i * k - m);
  const cplx em = std::exp(-i * k - m);
  ScaledTrig t;
  t.s = (ep - em) / (2.0 * i);
  t.c = 0.5 * (ep + em);
  if (std::abs(k) < 0.1) {
    // sin k / k = sum (-1)^n k^{2n} / (2n+1)!
    const cplx k2 = k * k;
    cplx sinc = 0.0;
    cplx dsinc = 0.0;
    cplx even = 1.0;  // k^{2n}
    cplx odd = k;     // k^{2n-1}
    double fact = 1.0;
    for (int n = 0; n <= 7; ++n) {
      const double sign = n % 2 ? -1.0 : 1.0;
      sinc += sign * even / fact;
      if (n > 0) {
        dsinc += sign * (2.0 * n) * odd / fact;
        odd *= k2;
      }
      even *= k2;
      fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
    }
    const double e = std::exp(-m);
    t.sinc = sinc * e;
    t.dsinc = dsinc * e;
  } else {
    t.sinc = t.s / k;
    t.dsinc = (k * t.c - t.s) / (k * k);
  }
  return t;
}

}  // namespace

SensitivityValues solve_ivp_with_sensitivity(const RefractiveProfile& profile, cplx k,
                                             double tol) {
  check_tol(tol);
  const cplx k2 = k * k;
  auto rhs = [&profile, k, k2](double r, const CVec<4>& u, CVec<4>& du) {
    const double eta = profile.eta(r);
    du[0] = u[1];
    du[1] = -k2 * eta * u[0];
    du[2] = u[3];
    du[3] = -k2 * eta * u[2] - 2.0 * k * eta * u[0];
  };
  const double w = std::max(1.0, std::abs(k));
  Rk78Integrator<4, decltype(rhs)> integ(rhs, 0.0, {0.0, 1.0, 0.0, 0.0}, tol,
                                         max_step(profile, k), {w, 1.0, w, 1.0});
  integ.advance_to(1.0);
  const auto& u = integ.state();
  return {u[0], u[1], u[2], u[3], integ.scale_log(),
          integ.accepted_steps() + integ.rejected_steps()};
}

BoundaryValues solve_ivp(const RefractiveProfile& profile, cplx k, double tol) {
  check_tol(tol);
  const cplx k2 = k * k;
  auto rhs = [&profile, k2](double r, const CVec<2>& u, CVec<2>& du) {
    du[0] = u[1];
    du[1] = -k2 * profile.eta(r) * u[0];
  };
  const double w = std::max(1.0, std::abs(k));
  Rk78Integrator<2, decltype(rhs)> integ(rhs, 0.0, {0.0, 1.0}, tol, max_step(profile, k),
                                         {w, 1.0});
  integ.advance_to(1.0);
  return {integ.state()[0], integ.state()[1], integ.scale_log()};
}

CharacteristicValue characteristic_from(const SensitivityValues& s, cplx k) {
  const ScaledTrig t = scaled_trig(k);
  CharacteristicValue out;
  out.d = s.dy1 * t.sinc - s.y1 * t.c;
  out.d_prime = s.dv1 * t.sinc + s.dy1 * t.dsinc - s.v1 * t.c + s.y1 * t.s;
  out.scale_log = s.scale_log + std::abs(k.imag());
  return out;
}

CharacteristicValue characteristic(const RefractiveProfile& profile, cplx k, double tol) {
  return characteristic_from(solve_ivp_with_sensitivity(profile, k, tol), k);
}

CharacteristicFunction::CharacteristicFunction(RefractiveProfile profile, double tol)
    : profile_(std::move(profile)), a_(travel_time(profile_)), tol_(tol) {
  check_tol(tol);
}

ScaledSample CharacteristicFunction::scaled(cplx k) const {
  const CharacteristicValue v = (*this)(k);
  const double shift = v.scale_log - (1.0 + a_) * std::abs(k.imag());
  ScaledSample out;
  out.value = v.d * k * std::exp(shift);
  out.log_deriv = v.d_prime / v.d;
  return out;
}

}  // namespace tev
