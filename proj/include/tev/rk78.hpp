#pragma once

// Embedded Runge-Kutta-Fehlberg 7(8) integrator for linear complex systems.
//
// The state is renormalized by a common factor whenever its weighted size
// leaves [1e-2, 1e2]; the factor is accumulated in scale_log() so that
// true state = state() * exp(scale_log()). Valid only for linear homogeneous
// right-hand sides, where a common rescaling commutes with the flow.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>

#include "tev/errors.hpp"

namespace tev {

template <std::size_t N>
using CVec = std::array<std::complex<double>, N>;

namespace rk78 {

inline constexpr int kStages = 13;

inline constexpr double c[kStages] = {0.0,       2.0 / 27.0, 1.0 / 9.0, 1.0 / 6.0, 5.0 / 12.0,
                                      1.0 / 2.0, 5.0 / 6.0,  1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0,
                                      1.0,       0.0,        1.0};

inline constexpr double a[kStages][kStages - 1] = {
    {},
    {2.0 / 27.0},
    {1.0 / 36.0, 1.0 / 12.0},
    {1.0 / 24.0, 0.0, 1.0 / 8.0},
    {5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0},
    {1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0},
    {-25.0 / 108.0, 0.0, 0.0, 125.0 / 108.0, -65.0 / 27.0, 125.0 / 54.0},
    {31.0 / 300.0, 0.0, 0.0, 0.0, 61.0 / 225.0, -2.0 / 9.0, 13.0 / 900.0},
    {2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0},
    {-91.0 / 108.0, 0.0, 0.0, 23.0 / 108.0, -976.0 / 135.0, 311.0 / 54.0, -19.0 / 60.0,
     17.0 / 6.0, -1.0 / 12.0},
    {2383.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -301.0 / 82.0, 2133.0 / 4100.0,
     45.0 / 82.0, 45.0 / 164.0, 18.0 / 41.0},
    {3.0 / 205.0, 0.0, 0.0, 0.0, 0.0, -6.0 / 41.0, -3.0 / 205.0, -3.0 / 41.0, 3.0 / 41.0,
     6.0 / 41.0, 0.0},
    {-1777.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -289.0 / 82.0,
     2193.0 / 4100.0, 51.0 / 82.0, 33.0 / 164.0, 12.0 / 41.0, 0.0, 1.0},
};

// Eighth-order weights; the error estimate is (b8 - b7) = 41/840 (k11 + k12 - k0 - k10).
inline constexpr double b[kStages] = {0.0,          0.0,          0.0,         0.0,        0.0,
                                      34.0 / 105.0, 9.0 / 35.0,   9.0 / 35.0,  9.0 / 280.0,
                                      9.0 / 280.0,  0.0,          41.0 / 840.0, 41.0 / 840.0};

}  // namespace rk78

template <std::size_t N, class Rhs>
class Rk78Integrator {
 public:
  // tol bounds the weighted local error per unit length, relative to the
  // weighted state size.
  Rk78Integrator(Rhs rhs, double t0, const CVec<N>& y0, double tol, double h_max,
                 const std::array<double, N>& weights)
      : rhs_(std::move(rhs)), t_(t0), y_(y0), tol_(tol), h_max_(h_max), h_(h_max),
        weights_(weights) {
    renormalize();
  }

  const CVec<N>& state() const { return y_; }
  double scale_log() const { return scale_log_; }
  double t() const { return t_; }
  int accepted_steps() const { return accepted_; }
  int rejected_steps() const { return rejected_; }

  void advance_to(double t_end) {
    constexpr double kSafety = 0.9;
    constexpr double kAlpha = 0.7 / 8.0;
    constexpr double kBeta = 0.4 / 8.0;
    while (t_ < t_end) {
      const double remaining = t_end - t_;
      double h = std::min({h_, h_max_, remaining});
      const bool last = h >= remaining;
      if (last) h = remaining;
      CVec<N> y_new;
      const double err = attempt(h, y_new);
      if (err <= 1.0) {
        t_ = last ? t_end : t_ + h;
        y_ = y_new;
        ++accepted_;
        renormalize();
        double fac = err > 0.0 ? kSafety * std::pow(err, -kAlpha) * std::pow(err_prev_, kBeta) : 5.0;
        fac = std::clamp(fac, 0.2, 5.0);
        err_prev_ = std::max(err, 1e-4);
        if (!last) h_ = h * fac;
      } else {
        ++rejected_;
        h_ = h * std::max(0.2, kSafety * std::pow(err, -1.0 / 8.0));
        if (h_ < 1e-13 * (1.0 + std::abs(t_))) {
          std::ostringstream msg;
          msg << "step size underflow at t = " << t_ << " (h = " << h_ << ")";
          throw StepUnderflow(msg.str());
        }
      }
    }
  }

 private:
  double weighted_size(const CVec<N>& y) const {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, weights_[i] * std::abs(y[i]));
    return m;
  }

  void renormalize() {
    const double m = weighted_size(y_);
    if (m > 0.0 && (m > 1e2 || m < 1e-2)) {
      for (auto& v : y_) v /= m;
      scale_log_ += std::log(m);
    }
  }

  double attempt(double h, CVec<N>& y_new) {
    std::array<CVec<N>, rk78::kStages> k;
    CVec<N> tmp;
    for (int s = 0; s < rk78::kStages; ++s) {
      tmp = y_;
      for (int j = 0; j < s; ++j) {
        const double aij = rk78::a[s][j];
        if (aij == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) tmp[i] += (h * aij) * k[j][i];
      }
      rhs_(t_ + rk78::c[s] * h, tmp, k[s]);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      std::complex<double> acc = 0.0;
      for (int s = 0; s < rk78::kStages; ++s) {
        if (rk78::b[s] != 0.0) acc += rk78::b[s] * k[s][i];
      }
      y_new[i] = y_[i] + h * acc;
      const std::complex<double> e =
          (h * 41.0 / 840.0) * (k[11][i] + k[12][i] - k[0][i] - k[10][i]);
      err = std::max(err, weights_[i] * std::abs(e));
    }
    const double size = std::max({weighted_size(y_), weighted_size(y_new), 1e-300});
    return err / (tol_ * h * size);
  }

  Rhs rhs_;
  double t_;
  CVec<N> y_;
  double tol_;
  double h_max_;
  double h_;
  std::array<double, N> weights_;
  double scale_log_ = 0.0;
  double err_prev_ = 1e-4;
  int accepted_ = 0;
  int rejected_ = 0;
};

}  // namespace tev
