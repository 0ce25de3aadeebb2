#pragma once

// Transformation-operator kernel K(x,t) on the triangle 0 <= t <= x <= a,
// used as an independent check of the shooting solver.

#include <complex>
#include <iosfwd>
#include <vector>

#include "tev/profile.hpp"

namespace tev {

struct KernelGrid {
  double a = 0.0;
  double h = 0.0;
  int n = 0;                             // x_n = a
  std::vector<std::vector<double>> k;    // k[i][j] = K(i h, j h), j <= i
  int iterations = 0;
  double last_difference = 0.0;

  double at(int i, int j) const { return k[i][j]; }
  // Largest |2K(x,x) - int_0^x q| over the grid diagonal.
  double diagonal_residual(const LiouvilleData& liouville) const;
};

// h is rounded down so that a/h is an integer; requires h <= a/50.
KernelGrid solve_kernel(const LiouvilleData& liouville, double h);

struct BoundaryTraces {
  std::vector<double> t;
  std::vector<double> k1;     // K_x(a,t) from the closed trace formulas
  std::vector<double> k2;     // K_t(a,t)
  std::vector<double> k1_fd;  // finite differences of the grid
  std::vector<double> k2_fd;
  std::vector<double> sum_rhs;  // q((a+t)/2)/2 + int_{(a+t)/2}^a q(tau) K(tau, a+t-tau)

  double K1(double t) const;
  double K2(double t) const;
};

BoundaryTraces boundary_traces(const LiouvilleData& liouville, const KernelGrid& grid);

struct RepresentationReport {
  std::complex<double> y1_ivp;
  std::complex<double> dy1_ivp;
  std::complex<double> y1_kernel;
  std::complex<double> dy1_kernel;
  double residual_y1 = 0.0;
  double residual_dy1 = 0.0;
};

// y(1,k), y'(1,k) by direct integration and by the kernel representation.
RepresentationReport representation_check(const RefractiveProfile& profile,
                                          const LiouvilleData& liouville,
                                          const KernelGrid& grid, std::complex<double> k);

// Same, with the kernel side Richardson-extrapolated from grids at h and h/2.
RepresentationReport representation_check(const RefractiveProfile& profile,
                                          const LiouvilleData& liouville,
                                          const KernelGrid& coarse, const KernelGrid& fine,
                                          std::complex<double> k);

void write_kernel_csv(std::ostream& out, const KernelGrid& grid);

}  // namespace tev
