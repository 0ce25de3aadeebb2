#include "tev/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tev/errors.hpp"
#include "tev/forward.hpp"

namespace tev {

namespace {

using Table = std::vector<std::vector<double>>;

// Cumulative trapezoid sums: out[m] = h * trapezoid(g[0..m]).
std::vector<double> cumulative_trapezoid(const std::vector<double>& g, double h) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t m = 1; m < g.size(); ++m) out[m] = out[m - 1] + 0.5 * h * (g[m - 1] + g[m]);
  return out;
}

// One sweep of the integral equation: returns 2K from the current iterate.
class Sweep {
 public:
  Sweep(const std::vector<double>& q, const std::vector<double>& q_half_cum, double h, int n)
      : q_(q), tq_(q_half_cum), h_(h), n_(n) {}

  Table apply(const Table& k) const {
    const int n = n_;
    // Row-wise cumulative integrals C(l, m) = int_0^{t_m} K(x_l, s) ds.
    Table c(n + 1);
    for (int l = 0; l <= n; ++l) c[l] = cumulative_trapezoid(k[l], h_);

    std::vector<double> gmain(n + 1);
    for (int l = 0; l <= n; ++l) gmain[l] = q_[l] * c[l][l];
    const std::vector<double> tm = cumulative_trapezoid(gmain, h_);

    // Fixed offset d = l - m along diagonals.
    Table td(n + 1);
    for (int d = 0; d <= n; ++d) {
      std::vector<double> g(n - d + 1);
      for (int l = d; l <= n; ++l) g[l - d] = q_[l] * c[l][l - d];
      td[d] = cumulative_trapezoid(g, h_);
    }
    // Fixed sum s = l + m along anti-diagonals, l from ceil(s/2).
    Table ta(2 * n + 1);
    std::vector<std::vector<double>> ga(2 * n + 1);
    for (int s = 0; s <= 2 * n; ++s) {
      const int lo = (s + 1) / 2;
      const int hi = std::min(s, n);
      std::vector<double> g(hi - lo + 1);
      for (int l = lo; l <= hi; ++l) g[l - lo] = q_[l] * c[l][s - l];
      ta[s] = cumulative_trapezoid(g, h_);
      ga[s] = std::move(g);
    }

    // int over tau in [s/2, hi] of q(tau) (C(tau,tau) - C(tau, s - tau)); the
    // integrand vanishes at tau = s/2, which covers the half cell for odd s.
    auto folded = [&](int s, int hi) {
      const int lo = (s + 1) / 2;
      double v = (tm[hi] - tm[lo]) - ta[s][hi - lo];
      if (s % 2) v += 0.25 * h_ * (gmain[lo] - ga[s][0]);
      return v;
    };

    Table out(n + 1);
    for (int i = 0; i <= n; ++i) {
      out[i].assign(i + 1, 0.0);
      for (int j = 0; j <= i; ++j) {
        const int d = i - j;
        const double first = tq_[i + j] - tq_[i - j];
        const double second = (tm[i] - tm[d]) - td[d][i - d];
        const double third = folded(i - j, i - j);
        const double fourth = folded(i + j, i);
        out[i][j] = first + second + third - fourth;
      }
    }
    return out;
  }

 private:
  const std::vector<double>& q_;
  const std::vector<double>& tq_;
  double h_;
  int n_;
};

}  // namespace

KernelGrid solve_kernel(const LiouvilleData& liouville, double h) {
  const double a = liouville.a();
  if (!(h > 0.0) || h > a / 50.0) {
    std::ostringstream msg;
    msg << "kernel grid step " << h << " must lie in (0, a/50] with a = " << a;
    throw InvalidInput(msg.str());
  }
  KernelGrid grid;
  grid.a = a;
  grid.n = static_cast<int>(std::ceil(a / h - 1e-9));
  grid.h = a / grid.n;
  const int n = grid.n;

  std::vector<double> q(n + 1);
  for (int l = 0; l <= n; ++l) q[l] = liouville.q(l == n ? a : l * grid.h);
  std::vector<double> q_half(2 * n + 1);
  for (int m = 0; m <= 2 * n; ++m) q_half[m] = liouville.q(m == 2 * n ? a : 0.5 * m * grid.h);
  const std::vector<double> tq = cumulative_trapezoid(q_half, 0.5 * grid.h);

  const Sweep sweep(q, tq, grid.h, n);
  Table k(n + 1);
  for (int i = 0; i <= n; ++i) {
    k[i].resize(i + 1);
    for (int j = 0; j <= i; ++j) k[i][j] = 0.5 * (tq[i + j] - tq[i - j]);
  }

  constexpr int kMaxIterations = 200;
  constexpr double kTarget = 1e-12;
  for (int it = 1; it <= kMaxIterations; ++it) {
    Table next = sweep.apply(k);
    double diff = 0.0;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= i; ++j) {
        next[i][j] *= 0.5;
        diff = std::max(diff, std::abs(next[i][j] - k[i][j]));
      }
    }
    k = std::move(next);
    grid.iterations = it;
    grid.last_difference = diff;
    if (!std::isfinite(diff) || diff > 1e10) break;
    if (diff <= kTarget) {
      grid.k = std::move(k);
      return grid;
    }
  }
  std::ostringstream msg;
  msg << "kernel iteration stopped after " << grid.iterations
      << " sweeps with sup-norm change " << grid.last_difference << "; retry with smaller h";
  throw NoConvergence(msg.str());
}

double KernelGrid::diagonal_residual(const LiouvilleData& liouville) const {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i == n ? a : i * h;
    worst = std::max(worst, std::abs(2.0 * k[i][i] - liouville.q_integral(0.0, x)));
  }
  return worst;
}

BoundaryTraces boundary_traces(const LiouvilleData& liouville, const KernelGrid& grid) {
  const int n = grid.n;
  const double h = grid.h;
  const double a = grid.a;
  const auto& k = grid.k;
  auto xq = [&](int l) { return liouville.q(l == n ? a : l * h); };
  std::vector<double> q(n + 1);
  for (int l = 0; l <= n; ++l) q[l] = xq(l);

  // int_{s/2}^{hi} q(tau) K(tau, s h - tau) dtau, with K on the diagonal at
  // half-grid points taken by linear interpolation.
  auto anti = [&](int s, int hi) {
    const int lo = (s + 1) / 2;
    double v = 0.0;
    for (int l = lo; l < hi; ++l) v += 0.5 * h * (q[l] * k[l][s - l] + q[l + 1] * k[l + 1][s - l - 1]);
    if (s % 2) {
      const double kd = 0.5 * (k[lo - 1][lo - 1] + k[lo][lo]);
      const double f_half = liouville.q(0.5 * s * h) * kd;
      v += 0.25 * h * (f_half + q[lo] * k[lo][s - lo]);
    }
    return v;
  };

  BoundaryTraces tr;
  tr.t.resize(n + 1);
  tr.k1.resize(n + 1);
  tr.k2.resize(n + 1);
  tr.sum_rhs.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double t = j == n ? a : j * h;
    tr.t[j] = t;
    const double qp = liouville.q(0.5 * (a + t));
    const double qm = liouville.q(0.5 * (a - t));
    double i1 = 0.0;
    for (int l = n - j; l < n; ++l) {
      i1 += 0.5 * h * (q[l] * k[l][l + j - n] + q[l + 1] * k[l + 1][l + 1 + j - n]);
    }
    const double i2 = anti(n - j, n - j);
    const double i3 = anti(n + j, n);
    tr.k1[j] = 0.25 * (qp - qm) + 0.5 * (i1 - i2 + i3);
    tr.k2[j] = 0.25 * (qp + qm) + 0.5 * (-i1 + i2 + i3);
    tr.sum_rhs[j] = 0.5 * qp + i3;
  }

  tr.k1_fd.resize(n + 1);
  tr.k2_fd.resize(n + 1);
  for (int j = 0; j <= n - 2; ++j) {
    tr.k1_fd[j] = (3.0 * k[n][j] - 4.0 * k[n - 1][j] + k[n - 2][j]) / (2.0 * h);
  }
  // The backward stencil leaves the grid for the last two points.
  for (int j = n - 1; j <= n; ++j) tr.k1_fd[j] = 2.0 * tr.k1_fd[j - 1] - tr.k1_fd[j - 2];
  for (int j = 1; j < n; ++j) tr.k2_fd[j] = (k[n][j + 1] - k[n][j - 1]) / (2.0 * h);
  tr.k2_fd[0] = (-3.0 * k[n][0] + 4.0 * k[n][1] - k[n][2]) / (2.0 * h);
  tr.k2_fd[n] = (3.0 * k[n][n] - 4.0 * k[n][n - 1] + k[n][n - 2]) / (2.0 * h);
  return tr;
}

namespace {

double interpolate(const std::vector<double>& t, const std::vector<double>& v, double x) {
  if (x <= t.front()) return v.front();
  if (x >= t.back()) return v.back();
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - t.begin());
  const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
  return (1.0 - w) * v[j - 1] + w * v[j];
}

struct KernelSide {
  std::complex<double> y1;
  std::complex<double> dy1;
};

KernelSide kernel_side(const RefractiveProfile& profile, const LiouvilleData& liouville,
                       const KernelGrid& grid, std::complex<double> k) {
  const BoundaryTraces tr = boundary_traces(liouville, grid);
  const double a = grid.a;
  const double total_q = liouville.q_integral(0.0, a);
  std::complex<double> c_int = 0.0;
  std::complex<double> s_int = 0.0;
  for (int j = 0; j <= grid.n; ++j) {
    const double w = (j == 0 || j == grid.n) ? 0.5 * grid.h : grid.h;
    c_int += w * tr.k2[j] * std::cos(k * tr.t[j]);
    s_int += w * tr.k1[j] * std::sin(k * tr.t[j]);
  }
  const double scale = std::pow(profile.eta(0.0), -0.25);
  const std::complex<double> sa = std::sin(k * a);
  const std::complex<double> ca = std::cos(k * a);
  KernelSide out;
  out.y1 = scale * (sa / k - ca * total_q / (2.0 * k * k) + c_int / (k * k));
  out.dy1 = scale * (ca + sa * total_q / (2.0 * k) + s_int / k);
  return out;
}

void check_representation_inputs(const RefractiveProfile& profile, std::complex<double> k) {
  if (!profile.normalized_tail()) {
    throw InvalidInput("kernel representation requires eta(1) = 1 and eta'(1) = 0");
  }
  if (std::abs(k.imag()) > 5.0 || k == 0.0) {
    std::ostringstream msg;
    msg << "kernel representation check needs k != 0 and |Im k| <= 5, got " << k;
    throw InvalidInput(msg.str());
  }
}

RepresentationReport finish(const RefractiveProfile& profile, std::complex<double> k,
                            const KernelSide& side) {
  const BoundaryValues b = solve_ivp(profile, k, 1e-12);
  RepresentationReport r;
  r.y1_ivp = b.y1 * std::exp(b.scale_log);
  r.dy1_ivp = b.dy1 * std::exp(b.scale_log);
  r.y1_kernel = side.y1;
  r.dy1_kernel = side.dy1;
  r.residual_y1 = std::abs(r.y1_kernel - r.y1_ivp);
  r.residual_dy1 = std::abs(r.dy1_kernel - r.dy1_ivp);
  return r;
}

}  // namespace

double BoundaryTraces::K1(double x) const { return interpolate(t, k1, x); }
double BoundaryTraces::K2(double x) const { return interpolate(t, k2, x); }

RepresentationReport representation_check(const RefractiveProfile& profile,
                                          const LiouvilleData& liouville,
                                          const KernelGrid& grid, std::complex<double> k) {
  check_representation_inputs(profile, k);
  return finish(profile, k, kernel_side(profile, liouville, grid, k));
}

RepresentationReport representation_check(const RefractiveProfile& profile,
                                          const LiouvilleData& liouville,
                                          const KernelGrid& coarse, const KernelGrid& fine,
                                          std::complex<double> k) {
  check_representation_inputs(profile, k);
  const KernelSide c = kernel_side(profile, liouville, coarse, k);
  const KernelSide f = kernel_side(profile, liouville, fine, k);
  const double ratio = coarse.h / fine.h;
  const double w = ratio * ratio;
  KernelSide x;
  x.y1 = (w * f.y1 - c.y1) / (w - 1.0);
  x.dy1 = (w * f.dy1 - c.dy1) / (w - 1.0);
  return finish(profile, k, x);
}

void write_kernel_csv(std::ostream& out, const KernelGrid& grid) {
  out << "x,t,K\n" << std::setprecision(17);
  for (int i = 0; i <= grid.n; ++i) {
    const double x = i == grid.n ? grid.a : i * grid.h;
    for (int j = 0; j <= i; ++j) {
      const double t = j == grid.n ? grid.a : j * grid.h;
      out << x << ',' << t << ',' << grid.k[i][j] << '\n';
    }
  }
}

}  // namespace tev
