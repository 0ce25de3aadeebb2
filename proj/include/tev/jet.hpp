#pragma once

// Truncated Taylor series arithmetic.
//
// A Jet holds the normalized Taylor coefficients c_k = f^(k)(r0)/k! of a
// function around a fixed expansion point, truncated at a runtime order.
// Named analytic profiles are written once as ordinary expressions over Jet
// and get exact derivatives of any order up to kMaxOrder for free.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

namespace tev {

class Jet {
 public:
  static constexpr int kMaxOrder = 12;

  Jet() = default;

  // Constant function.
  static Jet constant(double value, int order) {
    Jet j(order);
    j.c_[0] = value;
    return j;
  }

  // The identity function r -> r expanded around r0.
  static Jet variable(double r0, int order) {
    Jet j(order);
    j.c_[0] = r0;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return order_; }
  double value() const { return c_[0]; }
  double coeff(int k) const { return k <= order_ ? c_[k] : 0.0; }
  double& coeff(int k) { return c_[k]; }

  // k-th derivative at the expansion point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return coeff(k) * f;
  }

  // Series of the derivative, one order shorter.
  Jet differentiate() const {
    Jet d(std::max(order_ - 1, 0));
    for (int k = 0; k < order_; ++k) d.c_[k] = (k + 1) * c_[k + 1];
    return d;
  }

  // Series of the antiderivative with zero constant term, one order longer
  // (capped at kMaxOrder).
  Jet integrate() const {
    Jet s(std::min(order_ + 1, kMaxOrder));
    for (int k = 0; k + 1 <= s.order_; ++k) s.c_[k + 1] = c_[k] / (k + 1);
    return s;
  }

  Jet truncated(int order) const {
    Jet t(std::min(order, order_));
    for (int k = 0; k <= t.order_; ++k) t.c_[k] = c_[k];
    return t;
  }

  Jet& operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (int k = 0; k <= order_; ++k) c_[k] *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet p(std::min(a.order_, b.order_));
    for (int k = 0; k <= p.order_; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      p.c_[k] = s;
    }
    return p;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    assert(b.c_[0] != 0.0);
    Jet q(std::min(a.order_, b.order_));
    for (int k = 0; k <= q.order_; ++k) {
      double s = a.c_[k];
      for (int j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  friend Jet operator/(double s, const Jet& b) { return constant(s, b.order_) / b; }

  friend Jet sqrt(const Jet& a) {
    assert(a.c_[0] > 0.0);
    Jet r(a.order_);
    r.c_[0] = std::sqrt(a.c_[0]);
    for (int k = 1; k <= r.order_; ++k) {
      double s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
      r.c_[k] = s / (2.0 * r.c_[0]);
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    Jet e(a.order_);
    e.c_[0] = std::exp(a.c_[0]);
    for (int k = 1; k <= e.order_; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * a.c_[j] * e.c_[k - j];
      e.c_[k] = s / k;
    }
    return e;
  }

  friend void sincos(const Jet& a, Jet& s, Jet& c) {
    s = Jet(a.order_);
    c = Jet(a.order_);
    s.c_[0] = std::sin(a.c_[0]);
    c.c_[0] = std::cos(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      double ss = 0.0;
      double cc = 0.0;
      for (int j = 1; j <= k; ++j) {
        ss += j * a.c_[j] * c.c_[k - j];
        cc -= j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = ss / k;
      c.c_[k] = cc / k;
    }
  }

  friend Jet sin(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return s;
  }

  friend Jet cos(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return c;
  }

  friend Jet pow(const Jet& a, int n) {
    if (n < 0) return 1.0 / pow(a, -n);
    Jet r = constant(1.0, a.order_);
    Jet b = a;
    while (n > 0) {
      if (n & 1) r = r * b;
      n >>= 1;
      if (n > 0) b = b * b;
    }
    return r;
  }

  // Evaluate this series (in powers of delta) at another series whose
  // constant term is zero: (this o inner)(delta).
  Jet compose(const Jet& inner) const {
    assert(inner.c_[0] == 0.0);
    const int n = std::min(order_, inner.order_);
    Jet acc = constant(c_[n], n);
    for (int k = n - 1; k >= 0; --k) acc = acc * inner.truncated(n) + c_[k];
    return acc;
  }

 private:
  explicit Jet(int order) : order_(std::clamp(order, 0, kMaxOrder)) {}

  int order_ = 0;
  std::array<double, kMaxOrder + 1> c_{};
};

}  // namespace tev
