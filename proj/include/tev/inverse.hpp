#pragma once

// Computable ingredients of the uniqueness results: the subinterval
// conditions, the Wronskian function g(k) and the density threshold.

#include <functional>
#include <string>
#include <vector>

#include "tev/profile.hpp"
#include "tev/zeros.hpp"

namespace tev {

// A potential on [0, a] together with the initial slope of phi.
struct Potential {
  std::string label;
  double a = 0.0;
  double phi_slope = 1.0;  // phi'(0) = eta(0)^(-1/4)
  std::function<double(double)> q;
  std::vector<double> breakpoints;  // points in (0, a) where q is not smooth

  static Potential from_profile(const LiouvilleData& liouville);
  // q + height * (1 - ((x - center)/half_width)^2)^3 on |x - center| < half_width.
  Potential with_bump(double center, double half_width, double height) const;
};

struct UniquenessScenario {
  Potential q;
  Potential q_tilde;
  double agree_from = 0.0;  // x0: q = q_tilde on [x0, a]
  double b = 0.0;
  double alpha = 0.0;

  // Certifies equal travel times and agreement on [x0, a] (1e-10); InvalidInput otherwise.
  static UniquenessScenario make(Potential q, Potential q_tilde, double agree_from, double b = 0.0,
                                 double alpha = 0.0);
};

struct Theorem3Interval {
  double epsilon = 0.0;   // int_eps^1 sqrt(eta) = (a-1)/2
  double epsilon1 = 0.0;  // int_eps1^1 sqrt(eta) = (a+1)/2
  double x0 = 0.0;        // (a+1)/2: q is known on [x0, a]
};

Theorem3Interval theorem3_epsilon(const LiouvilleData& liouville);

struct GValues {
  cplx integral;   // int_0^x0 (q_tilde - q) phi phi_tilde
  cplx wronskian;  // phi_tilde'(a) phi(a) - phi_tilde(a) phi'(a)
};

GValues wronskian_g(const UniquenessScenario& scenario, cplx k, double tol = 1e-12);

struct Threshold {
  double value = 0.0;     // a + 1 - 2b
  bool in_range = false;  // value in [0, 2)
  bool boundary = false;  // b = (a-1)/2, where the strict hypothesis fails
};

// RegimeError unless a > 1 and (a-1)/2 <= b <= a.
Threshold theorem4_threshold(double a, double b);

enum class DensitySubset { all, every_second };

struct DensityEstimate {
  double r = 0.0;
  int count = 0;  // N_D(r), all symmetric copies
  double alpha_hat = 0.0;  // N_D(r) pi / (2 r), a finite-r estimate
};

// D is drawn from the non-real first-quadrant zeros ordered by |k|; every_second
// keeps the 1st, 3rd, ... of them.
DensityEstimate density_estimate(const std::vector<SpectralZero>& first_quadrant, double r,
                                 DensitySubset subset = DensitySubset::all);

}  // namespace tev
