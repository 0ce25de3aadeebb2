#include "tev/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "tev/errors.hpp"

namespace tev {

const char* to_string(ZeroClass c) { return c == ZeroClass::real ? "real" : "nonreal"; }

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateFloor = 1e-12;
constexpr double kNearZero = 1e-6;
constexpr double kPanelTol = 1e-6;
constexpr double kMaxPanel = 0.5;
constexpr double kResidualTol = 1e-8;
const cplx kI(0.0, 1.0);

double wrap(double angle) { return std::remainder(angle, 2.0 * kPi); }

struct Sample {
  cplx log_deriv;  // d'/d
  double log_abs = 0.0;
  double arg = 0.0;
  double abs_scaled = 0.0;  // |D(k)|
};

// Memoized evaluation of d at exact complex arguments; safe to share between threads.
class Sampler {
 public:
  Sampler(const RefractiveProfile& profile, double tol) : f_(profile, tol) {}

  double a() const { return f_.a(); }
  long evaluations() const {
    std::lock_guard lock(mutex_);
    return static_cast<long>(cache_.size());
  }

  Sample operator()(cplx k) const {
    const std::pair<double, double> key{k.real(), k.imag()};
    {
      std::lock_guard lock(mutex_);
      const auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const CharacteristicValue v = f_(k);
    Sample s;
    s.log_deriv = v.d_prime / v.d;
    s.log_abs = std::log(std::abs(v.d)) + v.scale_log;
    s.arg = std::arg(v.d);
    s.abs_scaled =
        k == 0.0 ? 0.0
                 : std::exp(s.log_abs + std::log(std::abs(k)) - (1.0 + f_.a()) * std::abs(k.imag()));
    std::lock_guard lock(mutex_);
    cache_.emplace(key, s);
    return s;
  }

 private:
  CharacteristicFunction f_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<double, double>, Sample> cache_;
};

struct GaussRule {
  std::array<double, 12> x{};
  std::array<double, 12> w{};
};

const GaussRule& gauss12() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 12>;
    GaussRule r;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t i = 0; i < ab.size(); ++i) {
      r.x[2 * i] = ab[i];
      r.x[2 * i + 1] = -ab[i];
      r.w[2 * i] = wt[i];
      r.w[2 * i + 1] = wt[i];
    }
    return r;
  }();
  return rule;
}

struct Node {
  cplx k;
  cplx weight;  // quadrature weight times dk
  cplx f;       // d'/d
};

struct Contour {
  bool ok = true;
  int count = 0;
  double raw = 0.0;      // quadrature estimate of the winding number
  double arg_sum = 0.0;  // exact sum of endpoint argument increments
  double max_abs = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  std::vector<Node> nodes;

  bool near_zero() const { return !(min_abs >= kNearZero * max_abs); }
  double defect() const { return std::abs(raw - count); }
};

void track(Contour& c, const Sample& s) {
  c.max_abs = std::max(c.max_abs, s.abs_scaled);
  c.min_abs = std::min(c.min_abs, s.abs_scaled);
}

void integrate_edge(const Sampler& d, cplx za, cplx zb, Contour& c) {
  const GaussRule& g = gauss12();
  const double length = std::abs(zb - za);
  const int panels = std::max(1, static_cast<int>(std::ceil(length / kMaxPanel)));
  std::vector<std::pair<double, double>> stack;
  for (int p = panels - 1; p >= 0; --p) {
    stack.emplace_back(static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels);
  }
  int processed = 0;
  while (!stack.empty()) {
    const auto [t0, t1] = stack.back();
    stack.pop_back();
    if (++processed > 20000) {
      c.ok = false;
      return;
    }
    const Sample sa = d(za + t0 * (zb - za));
    const Sample sb = d(za + t1 * (zb - za));
    track(c, sa);
    track(c, sb);
    const double tm = 0.5 * (t0 + t1);
    const double hr = 0.5 * (t1 - t0);
    std::array<Node, 12> nodes;
    cplx integral = 0.0;
    for (int i = 0; i < 12; ++i) {
      const cplx k = za + (tm + hr * g.x[i]) * (zb - za);
      const Sample s = d(k);
      track(c, s);
      nodes[i] = {k, g.w[i] * hr * (zb - za), s.log_deriv};
      integral += nodes[i].weight * nodes[i].f;
    }
    const double dlog = sb.log_abs - sa.log_abs;
    const double darg = wrap(sb.arg - sa.arg);
    const bool good = std::isfinite(integral.real()) && std::isfinite(integral.imag()) &&
                      std::isfinite(dlog) && std::abs(integral.real() - dlog) <= kPanelTol &&
                      std::abs(wrap(integral.imag() - darg)) <= kPanelTol &&
                      std::abs(integral.imag()) < 2.0;
    if (good) {
      c.raw += integral.imag() / (2.0 * kPi);
      c.arg_sum += darg;
      c.nodes.insert(c.nodes.end(), nodes.begin(), nodes.end());
    } else if ((t1 - t0) * length < 1e-10 * (1.0 + std::abs(za))) {
      c.ok = false;
      return;
    } else {
      stack.emplace_back(tm, t1);
      stack.emplace_back(t0, tm);
    }
  }
}

Contour contour(const Sampler& d, const Rect& r) {
  Contour c;
  const std::array<cplx, 5> corners = {cplx(r.x0, r.y0), cplx(r.x1, r.y0), cplx(r.x1, r.y1),
                                       cplx(r.x0, r.y1), cplx(r.x0, r.y0)};
  for (int e = 0; e < 4 && c.ok; ++e) integrate_edge(d, corners[e], corners[e + 1], c);
  if (c.ok) {
    c.count = static_cast<int>(std::lround(c.arg_sum / (2.0 * kPi)));
    if (c.defect() > 0.25) c.ok = false;
  }
  return c;
}

// Moments (1/2 pi i) \oint ((k - c)/rho)^p d'/d dk for p = 0..n.
std::vector<cplx> moments(const Contour& con, cplx center, double rho, int n) {
  std::vector<cplx> s(n + 1, 0.0);
  for (const Node& node : con.nodes) {
    const cplx z = (node.k - center) / rho;
    cplx zp = 1.0;
    for (int p = 0; p <= n; ++p) {
      s[p] += node.weight * node.f * zp;
      zp *= z;
    }
  }
  for (auto& v : s) v /= 2.0 * kPi * kI;
  return s;
}

// Roots from power sums via Newton's identities and a companion matrix.
std::vector<cplx> delves_lyness(const Contour& con, cplx center, double rho, int n) {
  const std::vector<cplx> s = moments(con, center, rho, n);
  if (n == 1) return {center + rho * s[1]};
  std::vector<cplx> e(n + 1, 0.0);
  e[0] = 1.0;
  for (int j = 1; j <= n; ++j) {
    cplx acc = 0.0;
    for (int i = 1; i <= j; ++i) acc += (i % 2 ? 1.0 : -1.0) * e[j - i] * s[i];
    e[j] = acc / static_cast<double>(j);
  }
  // Monic z^n + c_{n-1} z^{n-1} + ... + c_0 with c_{n-j} = (-1)^j e_j.
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int j = 1; j <= n; ++j) companion(n - j, n - 1) = -(j % 2 ? -1.0 : 1.0) * e[j];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<cplx> roots;
  for (int i = 0; i < n; ++i) roots.push_back(center + rho * solver.eigenvalues()(i));
  return roots;
}

struct Found {
  cplx k;
  int multiplicity;
};

struct ClusterResult {
  bool ok = false;
  bool multiple = false;
  cplx centroid;
  double rho = 0.0;
};

// Centroid and spread of the m zeros inside a square around c0, with the
// quadrature refined until the centroid settles.
ClusterResult refine_cluster(const Sampler& d, cplx c0, int m, double rho) {
  const GaussRule& g = gauss12();
  for (int shrink = 0; shrink < 4; ++shrink, rho *= 0.25) {
    const std::array<cplx, 5> corners = {c0 + rho * cplx(-1, -1), c0 + rho * cplx(1, -1),
                                         c0 + rho * cplx(1, 1), c0 + rho * cplx(-1, 1),
                                         c0 + rho * cplx(-1, -1)};
    cplx prev_centroid = std::numeric_limits<double>::quiet_NaN();
    for (int panels = 2; panels <= 64; panels *= 2) {
      cplx i0 = 0.0, i1 = 0.0, i2 = 0.0;
      bool finite = true;
      for (int e = 0; e < 4; ++e) {
        const cplx za = corners[e];
        const cplx zb = corners[e + 1];
        for (int p = 0; p < panels; ++p) {
          const double tm = (p + 0.5) / panels;
          const double hr = 0.5 / panels;
          for (int i = 0; i < 12; ++i) {
            const cplx k = za + (tm + hr * g.x[i]) * (zb - za);
            const cplx f = d(k).log_deriv;
            if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) finite = false;
            const cplx w = g.w[i] * hr * (zb - za) * f;
            const cplx u = (k - c0) / rho;
            i0 += w;
            i1 += w * u;
            i2 += w * u * u;
          }
        }
      }
      if (!finite) break;
      i0 /= 2.0 * kPi * kI;
      i1 /= 2.0 * kPi * kI;
      i2 /= 2.0 * kPi * kI;
      const cplx mean = i1 / static_cast<double>(m);
      const cplx centroid = c0 + rho * mean;
      const bool settled = std::abs(centroid - prev_centroid) <= 1e-12 * (1.0 + std::abs(c0)) &&
                           std::abs(i0 - static_cast<double>(m)) < 1e-6;
      prev_centroid = centroid;
      if (!settled) continue;
      const cplx variance = i2 / static_cast<double>(m) - mean * mean;
      ClusterResult r;
      r.ok = true;
      r.centroid = centroid;
      r.rho = rho;
      r.multiple = m > 1 && rho * std::sqrt(std::abs(variance)) <= 1e-6 * (1.0 + std::abs(c0));
      return r;
    }
  }
  return {};
}

// Newton on d with multiplicity-aware update; false on stall or escape.
bool newton(const Sampler& d, cplx& k, int m, cplx anchor, double radius) {
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    const cplx step = static_cast<double>(m) / d(k).log_deriv;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return std::abs(k - anchor) <= radius;
    k -= step;
    if (std::abs(k - anchor) > radius) return false;
    const double size = std::abs(step);
    if (size <= 1e-14 * (1.0 + std::abs(k))) break;
    if (it > 3 && size > 0.5 * prev && size < 1e-9 * (1.0 + std::abs(k))) break;
    prev = size;
    if (it == 59) return false;
  }
  return d(k).abs_scaled <= kResidualTol;
}

class Searcher {
 public:
  Searcher(const Sampler& d, const SearchOptions& options) : d_(d), options_(options) {}

  std::vector<Found> process(const Rect& rect, const Contour& con, int depth) {
    {
      std::lock_guard lock(stats_mutex_);
      ++stats_.cells;
    }
    if (con.count == 0) return {};
    if (con.count <= options_.mmax) {
      std::vector<Found> out;
      if (resolve(rect, con, depth, out)) return out;
      std::lock_guard lock(stats_mutex_);
      ++stats_.newton_failures;
    }
    return subdivide(rect, con, depth);
  }

  SearchStats stats() const { return stats_; }

 private:
  static cplx center(const Rect& r) { return {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)}; }
  static double half_diagonal(const Rect& r) { return 0.5 * std::hypot(r.x1 - r.x0, r.y1 - r.y0); }

  bool resolve(const Rect& rect, const Contour& con, int depth, std::vector<Found>& out) {
    const cplx c = center(rect);
    const double rho = half_diagonal(rect);
    const std::vector<cplx> roots = delves_lyness(con, c, rho, con.count);

    // Group approximations that are close relative to the cell.
    std::vector<std::vector<cplx>> groups;
    for (const cplx& r : roots) {
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) return false;
      bool placed = false;
      for (auto& grp : groups) {
        if (std::abs(grp.front() - r) < 0.05 * rho) {
          grp.push_back(r);
          placed = true;
          break;
        }
      }
      if (!placed) groups.push_back({r});
    }
    std::vector<cplx> centers;
    for (const auto& grp : groups) {
      cplx s = 0.0;
      for (const cplx& r : grp) s += r;
      centers.push_back(s / static_cast<double>(grp.size()));
    }

    const double slack = 1e-12 * (1.0 + std::abs(c));
    std::vector<Found> found;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      double gap = 2.0 * rho;
      for (std::size_t h = 0; h < groups.size(); ++h) {
        if (h != g) gap = std::min(gap, std::abs(centers[h] - centers[g]));
      }
      const int m = static_cast<int>(groups[g].size());
      if (m == 1) {
        cplx k = centers[g];
        if (!newton(d_, k, 1, c, 2.0 * rho) || !rect.contains(k, slack)) return false;
        found.push_back({k, 1});
        continue;
      }
      const double box = std::min({0.3 * gap, 0.5 * rho, 0.25});
      const ClusterResult cl = refine_cluster(d_, centers[g], m, box);
      if (!cl.ok) return false;
      if (cl.multiple) {
        if (!rect.contains(cl.centroid, slack)) return false;
        found.push_back({cl.centroid, m});
        continue;
      }
      // Distinct zeros that were merely close: resolve the small square on its own.
      if (depth > 60) return false;
      const Rect square{cl.centroid.real() - cl.rho, cl.centroid.real() + cl.rho,
                        cl.centroid.imag() - cl.rho, cl.centroid.imag() + cl.rho};
      const Contour sc = contour(d_, square);
      if (!sc.ok || sc.count != m) return false;
      for (const Found& f : process(square, sc, depth + 1)) {
        if (!rect.contains(f.k, slack)) return false;
        found.push_back(f);
      }
    }

    int total = 0;
    for (std::size_t i = 0; i < found.size(); ++i) {
      total += found[i].multiplicity;
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(found[i].k - found[j].k) < 1e-7 * (1.0 + std::abs(found[i].k))) return false;
      }
    }
    if (total != con.count) return false;

    // Every simple zero is confirmed by its own small contour.
    for (const Found& f : found) {
      if (f.multiplicity != 1) continue;
      double gap = 1e-3 * (1.0 + std::abs(f.k));
      for (const Found& o : found) {
        if (&o != &f) gap = std::min(gap, 0.3 * std::abs(o.k - f.k));
      }
      const Rect small{f.k.real() - gap, f.k.real() + gap, f.k.imag() - gap, f.k.imag() + gap};
      const Contour sc = contour(d_, small);
      if (!sc.ok || sc.count != 1) return false;
    }
    out.insert(out.end(), found.begin(), found.end());
    return true;
  }

  std::vector<Found> subdivide(const Rect& rect, const Contour& con, int depth) {
    static constexpr std::array<double, 6> kFractions = {0.5371, 0.4629, 0.5813,
                                                         0.4187, 0.6127, 0.3873};
    const bool split_x = (rect.x1 - rect.x0) >= (rect.y1 - rect.y0);
    if (std::max(rect.x1 - rect.x0, rect.y1 - rect.y0) < 1e-9 * (1.0 + std::abs(center(rect)))) {
      throw ContourTooClose("cell shrank below resolution without isolating its zeros");
    }
    for (double f : kFractions) {
      Rect a = rect, b = rect;
      if (split_x) {
        a.x1 = b.x0 = rect.x0 + f * (rect.x1 - rect.x0);
      } else {
        a.y1 = b.y0 = rect.y0 + f * (rect.y1 - rect.y0);
      }
      const Contour ca = contour(d_, a);
      const Contour cb = contour(d_, b);
      if (!ca.ok || !cb.ok || ca.near_zero() || cb.near_zero() || ca.count + cb.count != con.count) {
        continue;
      }
      {
        std::lock_guard lock(stats_mutex_);
        ++stats_.subdivisions;
      }
      std::vector<Found> left, right;
      if (options_.parallel && depth < 3 && ca.count > 0 && cb.count > 0) {
        auto fut = std::async(std::launch::async, [&] { return process(a, ca, depth + 1); });
        right = process(b, cb, depth + 1);
        left = fut.get();
      } else {
        left = process(a, ca, depth + 1);
        right = process(b, cb, depth + 1);
      }
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
    throw ContourTooClose("no subdivision line of the cell avoided the zeros of d");
  }

  const Sampler& d_;
  SearchOptions options_;
  std::mutex stats_mutex_;
  SearchStats stats_;
};

void check_tol(double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    std::ostringstream msg;
    msg << "search tolerance " << tol << " outside [1e-13, 1e-6]";
    throw InvalidInput(msg.str());
  }
}

void check_not_degenerate(const Sampler& d, const Rect& r) {
  double peak = 0.0;
  constexpr int kPerEdge = 16;
  const std::array<cplx, 5> corners = {cplx(r.x0, r.y0), cplx(r.x1, r.y0), cplx(r.x1, r.y1),
                                       cplx(r.x0, r.y1), cplx(r.x0, r.y0)};
  for (int e = 0; e < 4; ++e) {
    for (int i = 0; i < kPerEdge; ++i) {
      const double t = (i + 0.5) / kPerEdge;
      peak = std::max(peak, d(corners[e] + t * (corners[e + 1] - corners[e])).abs_scaled);
    }
  }
  if (!(peak >= kDegenerateFloor)) {
    std::ostringstream msg;
    msg << "characteristic function is numerically zero on the contour (max |D| = " << peak
        << "); the spectrum is degenerate";
    throw DegenerateCharacteristic(msg.str());
  }
}

Rect inflate(const Rect& r, double factor) {
  const double cx = 0.5 * (r.x0 + r.x1), hx = 0.5 * (r.x1 - r.x0) * factor;
  const double cy = 0.5 * (r.y0 + r.y1), hy = 0.5 * (r.y1 - r.y0) * factor;
  return {cx - hx, cx + hx, cy - hy, cy + hy};
}

// Outer contour, inflating the rectangle when a zero sits on or near it.
std::pair<Rect, Contour> outer_contour(const Sampler& d, const Rect& rect, int& perturbations) {
  // Smallest inflation first: factors 1 + 2^-j for j = 5, ..., 1.
  for (int j = 0; j <= 5; ++j) {
    const Rect r = j == 0 ? rect : inflate(rect, 1.0 + std::ldexp(1.0, j - 6));
    Contour c = contour(d, r);
    if (c.ok && !c.near_zero()) {
      perturbations = j;
      return {r, std::move(c)};
    }
  }
  std::ostringstream msg;
  msg << "contour of [" << rect.x0 << ", " << rect.x1 << "] x [" << rect.y0 << ", " << rect.y1
      << "] stays too close to a zero after 5 perturbations";
  throw ContourTooClose(msg.str());
}

SpectralZero finalize(const Sampler& d, cplx k, int multiplicity) {
  if (std::abs(k.imag()) <= 1e-9 * (1.0 + std::abs(k.real()))) k.imag(0.0);
  if (std::abs(k.real()) <= 1e-9 * (1.0 + std::abs(k.imag()))) k.real(0.0);
  SpectralZero z;
  z.k = k;
  z.multiplicity = multiplicity;
  z.cls = k.imag() == 0.0 ? ZeroClass::real : ZeroClass::nonreal;
  z.residual = d(k).abs_scaled;
  return z;
}

bool by_position(const SpectralZero& a, const SpectralZero& b) {
  if (a.k.real() != b.k.real()) return a.k.real() < b.k.real();
  return a.k.imag() < b.k.imag();
}

}  // namespace

int count_zeros(const RefractiveProfile& profile, const Rect& rect, double tol) {
  check_tol(tol);
  if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0)) throw InvalidInput("empty rectangle");
  const Sampler d(profile, tol);
  check_not_degenerate(d, rect);
  int perturbations = 0;
  return outer_contour(d, rect, perturbations).second.count;
}

SearchReport find_zeros(const RefractiveProfile& profile, const Rect& rect, double tol,
                        const SearchOptions& options) {
  check_tol(tol);
  if (!(rect.x0 >= 0.0 && rect.y0 >= 0.0 && rect.x1 > rect.x0 && rect.y1 > rect.y0)) {
    throw InvalidInput("search rectangle must be non-empty and lie in the closed first quadrant");
  }
  if (options.mmax < 1) throw InvalidInput("mmax must be positive");
  const Sampler d(profile, tol);

  // Zeros on the axes are moved inside by using the symmetries d(-k) = d(k)
  // and d(conj k) = conj d(k).
  Rect searched = rect;
  if (rect.x0 == 0.0) searched.x0 = -std::min(0.25, 0.5 * rect.x1);
  if (rect.y0 == 0.0) searched.y0 = -rect.y1;
  check_not_degenerate(d, searched);

  SearchReport report;
  report.requested = rect;
  auto [outer_rect, outer] = outer_contour(d, searched, report.stats.perturbations);
  report.searched = outer_rect;
  report.contour_count = outer.count;

  Searcher searcher(d, options);
  const std::vector<Found> found = searcher.process(outer_rect, outer, 0);
  const int perturbations = report.stats.perturbations;
  report.stats = searcher.stats();
  report.stats.perturbations = perturbations;

  for (const Found& f : found) report.all_zeros.push_back(finalize(d, f.k, f.multiplicity));
  std::sort(report.all_zeros.begin(), report.all_zeros.end(), by_position);
  const double slack = 1e-9 * (1.0 + std::max(std::abs(rect.x1), std::abs(rect.y1)));
  for (const SpectralZero& z : report.all_zeros) {
    if (z.k.real() < 0.0 || z.k.imag() < 0.0 || !rect.contains(z.k, slack)) continue;
    report.zeros.push_back(z);
    report.count += z.multiplicity;
  }
  report.stats.evaluations = d.evaluations();
  return report;
}

std::vector<SpectralZero> real_zeros(const RefractiveProfile& profile, double kmax, double tol) {
  check_tol(tol);
  if (!(kmax > 0.0)) throw InvalidInput("kmax must be positive");
  const Sampler d(profile, tol);
  const CharacteristicFunction f(profile, tol);
  const double a = d.a();
  const double step = std::min(0.05, kPi / (20.0 * (1.0 + a)));
  auto value = [&](double k) { return f(k).unscaled_d().real(); };

  // The double zero at the origin is excluded by starting one step out.
  const int n = std::max(1, static_cast<int>(std::ceil((kmax - step) / step)));
  std::vector<double> grid(n + 1), vals(n + 1);
  double peak = 0.0;
  for (int i = 0; i <= n; ++i) {
    grid[i] = std::min(kmax, step + i * step);
    vals[i] = value(grid[i]);
    peak = std::max(peak, std::abs(vals[i]) * grid[i]);
  }
  if (!(peak >= kDegenerateFloor)) {
    throw DegenerateCharacteristic("characteristic function is numerically zero on the real axis");
  }

  std::vector<SpectralZero> out;
  for (int i = 0; i < n; ++i) {
    if (!(vals[i] == 0.0 || vals[i] * vals[i + 1] < 0.0)) continue;
    double root = grid[i];
    if (vals[i] != 0.0) {
      boost::uintmax_t iters = 100;
      const auto bracket = boost::math::tools::toms748_solve(
          value, grid[i], grid[i + 1], vals[i], vals[i + 1],
          boost::math::tools::eps_tolerance<double>(50), iters);
      root = 0.5 * (bracket.first + bracket.second);
    }
    // Multiplicity from a local contour; shrink while complex zeros intrude.
    double rho = 0.25 * step;
    cplx k = root;
    int mult = 0;
    for (int attempt = 0; attempt < 5 && mult == 0; ++attempt, rho *= 0.5) {
      const Rect sq{root - rho, root + rho, -rho, rho};
      const Contour c = contour(d, sq);
      if (!c.ok || c.count < 1) continue;
      if (c.count == 1) {
        cplx polished = root;
        if (newton(d, polished, 1, root, rho)) k = cplx(polished.real(), 0.0);
        mult = 1;
        break;
      }
      const ClusterResult cl = refine_cluster(d, root, c.count, rho);
      if (cl.ok && cl.multiple) {
        k = cplx(cl.centroid.real(), 0.0);
        mult = c.count;
      }
    }
    if (mult == 0) mult = 1;
    if (!out.empty() && std::abs(out.back().k - k) < 1e-8 * (1.0 + std::abs(k))) continue;
    out.push_back(finalize(d, k, mult));
  }
  return out;
}

}  // namespace tev
