#include "tev/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "tev/errors.hpp"
#include "tev/rk78.hpp"

namespace tev {

namespace {

constexpr double kAgreeTol = 1e-10;

using Gauss = boost::math::quadrature::gauss<double, 20>;

// Sorted panel edges on [lo, hi]: uniform panels of length <= h plus breakpoints.
std::vector<double> panel_edges(double lo, double hi, double h, const std::vector<double>& extra) {
  std::vector<double> edges;
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
  for (int i = 0; i <= n; ++i) edges.push_back(lo + (hi - lo) * i / n);
  for (double x : extra) {
    if (x > lo && x < hi) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double u, double v) { return std::abs(u - v) < 1e-14; }),
              edges.end());
  return edges;
}

double max_step(cplx k) { return std::min(0.05, 0.5 / (std::abs(k) + 1.0)); }

// phi'' = (q - k^2) phi on [0, a], phi(0) = 0, phi'(0) = slope.
class PhiSolver {
 public:
  PhiSolver(const Potential& p, cplx k, double tol)
      : rhs_{&p, k * k},
        integ_(rhs_, 0.0, {0.0, p.phi_slope}, tol, max_step(k),
               {std::max(1.0, std::abs(k)), 1.0}) {}

  // True (phi, phi') at x >= current position.
  CVec<2> at(double x) {
    integ_.advance_to(x);
    const double s = std::exp(integ_.scale_log());
    return {integ_.state()[0] * s, integ_.state()[1] * s};
  }

 private:
  struct Rhs {
    const Potential* p;
    cplx k2;
    void operator()(double x, const CVec<2>& u, CVec<2>& du) const {
      du[0] = u[1];
      du[1] = (p->q(x) - k2) * u[0];
    }
  };
  Rhs rhs_;
  Rk78Integrator<2, Rhs> integ_;
};

double bump(double x, double center, double half_width) {
  const double t = (x - center) / half_width;
  if (std::abs(t) >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return s * s * s;
}

}  // namespace

Potential Potential::from_profile(const LiouvilleData& liouville) {
  Potential p;
  p.label = liouville.profile().label();
  p.a = liouville.a();
  p.phi_slope = std::pow(liouville.profile().eta(0.0), -0.25);
  p.q = [liouville](double x) { return liouville.q(x); };
  for (double r : liouville.profile().breakpoints()) {
    const double x = liouville.x_of_r(r);
    if (x > 0.0 && x < p.a) p.breakpoints.push_back(x);
  }
  return p;
}

Potential Potential::with_bump(double center, double half_width, double height) const {
  if (!(half_width > 0.0) || !std::isfinite(center) || !std::isfinite(height)) {
    throw InvalidInput("bump needs a positive half width and finite center and height");
  }
  Potential p = *this;
  std::ostringstream label;
  label << this->label << "+bump(" << center << "," << half_width << "," << height << ")";
  p.label = label.str();
  auto base = q;
  p.q = [base, center, half_width, height](double x) {
    return base(x) + height * bump(x, center, half_width);
  };
  for (double x : {center - half_width, center + half_width}) {
    if (x > 0.0 && x < a) p.breakpoints.push_back(x);
  }
  std::sort(p.breakpoints.begin(), p.breakpoints.end());
  return p;
}

UniquenessScenario UniquenessScenario::make(Potential q, Potential q_tilde, double agree_from,
                                            double b, double alpha) {
  if (!q.q || !q_tilde.q) throw InvalidInput("scenario potentials must be set");
  if (std::abs(q.a - q_tilde.a) > kAgreeTol) {
    std::ostringstream msg;
    msg << "travel times differ: " << q.a << " vs " << q_tilde.a;
    throw InvalidInput(msg.str());
  }
  if (std::abs(q.phi_slope - q_tilde.phi_slope) > kAgreeTol) {
    throw InvalidInput("potentials disagree on eta(0)");
  }
  if (!(agree_from >= 0.0 && agree_from <= q.a)) {
    throw InvalidInput("agreement point must lie in [0, a]");
  }
  constexpr int kGrid = 1000;
  double worst = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = agree_from + (q.a - agree_from) * i / kGrid;
    worst = std::max(worst, std::abs(q.q(x) - q_tilde.q(x)));
  }
  if (worst > kAgreeTol) {
    std::ostringstream msg;
    msg << "potentials differ by " << worst << " on [" << agree_from << ", " << q.a << "]";
    throw InvalidInput(msg.str());
  }
  return {std::move(q), std::move(q_tilde), agree_from, b, alpha};
}

Theorem3Interval theorem3_epsilon(const LiouvilleData& liouville) {
  const double a = liouville.a();
  if (!(a > 1.0)) {
    std::ostringstream msg;
    msg << "subinterval condition needs a > 1, got a = " << a;
    throw RegimeError(msg.str());
  }
  Theorem3Interval out;
  out.epsilon = subinterval_boundary(liouville, 0.5 * (a - 1.0));
  out.epsilon1 = subinterval_boundary(liouville, 0.5 * (a + 1.0));
  out.x0 = 0.5 * (a + 1.0);
  return out;
}

GValues wronskian_g(const UniquenessScenario& s, cplx k, double tol) {
  const double a = s.q.a;
  const double x0 = s.agree_from;
  GValues out;

  std::vector<double> extra = s.q.breakpoints;
  extra.insert(extra.end(), s.q_tilde.breakpoints.begin(), s.q_tilde.breakpoints.end());
  const auto edges = panel_edges(0.0, x0, max_step(k), extra);

  PhiSolver phi(s.q, k, tol), phi_t(s.q_tilde, k, tol);
  const auto& nodes = Gauss::abscissa();
  const auto& weights = Gauss::weights();
  // Nodes in increasing order on each panel so the solvers only move forward.
  std::vector<std::pair<double, double>> rule;
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (nodes[i] != 0.0) rule.emplace_back(-nodes[i], weights[i]);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) rule.emplace_back(nodes[i], weights[i]);

  cplx sum = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p], hi = edges[p + 1];
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    cplx panel = 0.0;
    for (const auto& [t, w] : rule) {
      const double x = mid + half * t;
      const double dq = s.q_tilde.q(x) - s.q.q(x);
      if (dq == 0.0) continue;
      panel += w * dq * phi.at(x)[0] * phi_t.at(x)[0];
    }
    sum += half * panel;
  }
  out.integral = sum;

  PhiSolver fa(s.q, k, tol), ga(s.q_tilde, k, tol);
  const CVec<2> u = fa.at(a), v = ga.at(a);
  out.wronskian = v[1] * u[0] - v[0] * u[1];
  return out;
}

Threshold theorem4_threshold(double a, double b) {
  if (!(a > 1.0)) throw RegimeError("density threshold needs a > 1");
  const double lower = 0.5 * (a - 1.0);
  if (!(b >= lower)) {
    std::ostringstream msg;
    msg << "b = " << b << " is below (a-1)/2 = " << lower;
    throw RegimeError(msg.str());
  }
  if (b > a) throw RegimeError("b cannot exceed a");
  Threshold t;
  t.value = 2.0 - 2.0 * (b - lower);
  t.boundary = b == lower;
  t.in_range = t.value >= 0.0 && t.value < 2.0;
  return t;
}

DensityEstimate density_estimate(const std::vector<SpectralZero>& first_quadrant, double r,
                                 DensitySubset subset) {
  if (!(r > 0.0)) throw InvalidInput("density radius must be positive");
  std::vector<SpectralZero> zs;
  for (const auto& z : first_quadrant) {
    if (z.cls == ZeroClass::nonreal && std::abs(z.k) <= r) zs.push_back(z);
  }
  std::sort(zs.begin(), zs.end(),
            [](const SpectralZero& x, const SpectralZero& y) { return std::abs(x.k) < std::abs(y.k); });
  DensityEstimate e;
  e.r = r;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (subset == DensitySubset::every_second && i % 2 == 1) continue;
    const int copies = zs[i].k.real() == 0.0 || zs[i].k.imag() == 0.0 ? 2 : 4;
    e.count += copies * zs[i].multiplicity;
  }
  e.alpha_hat = e.count * std::numbers::pi / (2.0 * r);
  return e;
}

}  // namespace tev
