#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tev/errors.hpp"

namespace tev {

// Adaptive Gauss-Kronrod (7/15) with an absolute error target. Throws
// QuadratureFailure when the estimate at max_depth still exceeds abs_tol.
template <class F>
double integrate_adaptive(F&& f, double lo, double hi, double abs_tol, unsigned max_depth = 20) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (lo == hi) return 0.0;
  double l1 = 0.0;
  double err = 0.0;
  const double rough = GK::integrate(f, lo, hi, 0, 0.0, &err, &l1);
  (void)rough;
  const double rel = abs_tol / std::max(l1, std::numeric_limits<double>::min());
  const double value = GK::integrate(f, lo, hi, max_depth, std::max(rel, 1e-15), &err, &l1);
  if (!(err <= abs_tol) && !(err <= 1e-15 * l1)) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << lo << ", " << hi << "] reached error estimate " << err
        << " above tolerance " << abs_tol;
    throw QuadratureFailure(msg.str());
  }
  return value;
}

}  // namespace tev
