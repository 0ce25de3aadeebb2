#pragma once

// Zeros of d(k) in rectangles of the closed first quadrant, with
// multiplicities certified by the argument principle.

#include <complex>
#include <vector>

#include "tev/forward.hpp"

namespace tev {

struct Rect {
  double x0 = 0.0, x1 = 0.0;  // Re k
  double y0 = 0.0, y1 = 0.0;  // Im k

  bool contains(cplx k, double slack = 0.0) const {
    return k.real() >= x0 - slack && k.real() <= x1 + slack && k.imag() >= y0 - slack &&
           k.imag() <= y1 + slack;
  }
};

enum class ZeroClass { real, nonreal };

const char* to_string(ZeroClass c);

struct SpectralZero {
  cplx k;
  int multiplicity = 1;
  ZeroClass cls = ZeroClass::nonreal;
  double residual = 0.0;  // |D(k)|
};

struct SearchStats {
  int cells = 0;
  int subdivisions = 0;
  int newton_failures = 0;
  int perturbations = 0;
  long evaluations = 0;
};

struct SearchReport {
  Rect requested;
  Rect searched;  // after mirroring across the axes and any perturbation
  std::vector<SpectralZero> zeros;      // canonical representatives inside requested
  std::vector<SpectralZero> all_zeros;  // every zero inside searched
  int count = 0;          // sum of multiplicities of zeros
  int contour_count = 0;  // argument-principle count over searched
  SearchStats stats;
};

struct SearchOptions {
  int mmax = 4;
  bool parallel = false;
};

// Argument-principle count over any rectangle not passing through a zero.
int count_zeros(const RefractiveProfile& profile, const Rect& rect, double tol = kDefaultTol);

SearchReport find_zeros(const RefractiveProfile& profile, const Rect& rect,
                        double tol = kDefaultTol, const SearchOptions& options = {});

// Positive real zeros up to kmax from sign changes of d on the real axis. The
// double zero at the origin is not reported; zeros of even multiplicity are missed.
std::vector<SpectralZero> real_zeros(const RefractiveProfile& profile, double kmax,
                                     double tol = kDefaultTol);

}  // namespace tev
