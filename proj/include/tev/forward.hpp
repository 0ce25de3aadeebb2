#pragma once

// Shooting solver for y'' + k^2 eta(r) y = 0, y(0) = 0, y'(0) = 1 on [0,1]
// and the characteristic function d(k) = y'(1,k) sin k / k - y(1,k) cos k.

#include <complex>

#include "tev/profile.hpp"

namespace tev {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-12;

// True values are stored values times exp(scale_log).
struct BoundaryValues {
  cplx y1;
  cplx dy1;
  double scale_log = 0.0;
};

struct CharacteristicValue {
  cplx d;
  cplx d_prime;
  double scale_log = 0.0;

  cplx unscaled_d() const { return d * std::exp(scale_log); }
  cplx unscaled_d_prime() const { return d_prime * std::exp(scale_log); }
  double log_abs_d() const { return std::log(std::abs(d)) + scale_log; }
};

// Boundary values together with their k-derivatives, all sharing scale_log.
struct SensitivityValues {
  cplx y1;
  cplx dy1;
  cplx v1;   // dy(1,k)/dk
  cplx dv1;  // dy'(1,k)/dk
  double scale_log = 0.0;
  int steps = 0;
};

BoundaryValues solve_ivp(const RefractiveProfile& profile, cplx k, double tol = kDefaultTol);
SensitivityValues solve_ivp_with_sensitivity(const RefractiveProfile& profile, cplx k,
                                             double tol = kDefaultTol);
CharacteristicValue characteristic(const RefractiveProfile& profile, cplx k,
                                   double tol = kDefaultTol);

// Assembles d and d' from boundary data; exposed for the kernel oracle.
CharacteristicValue characteristic_from(const SensitivityValues& s, cplx k);

// d(k) k exp(-(1+a)|Im k|), the bounded quantity sampled by the root finder.
struct ScaledSample {
  cplx value;       // D(k)
  cplx log_deriv;   // d'(k)/d(k)
};

class CharacteristicFunction {
 public:
  explicit CharacteristicFunction(RefractiveProfile profile, double tol = kDefaultTol);

  const RefractiveProfile& profile() const { return profile_; }
  double a() const { return a_; }
  double tol() const { return tol_; }

  CharacteristicValue operator()(cplx k) const { return characteristic(profile_, k, tol_); }
  ScaledSample scaled(cplx k) const;

 private:
  RefractiveProfile profile_;
  double a_;
  double tol_;
};

}  // namespace tev
