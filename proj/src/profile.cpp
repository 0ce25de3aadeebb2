#include "tev/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tev/errors.hpp"
#include "tev/quadrature.hpp"

namespace tev {
namespace {

constexpr double kPi = std::numbers::pi;

// Wraps an expression template usable with both double and Jet.
template <class Formula>
class AnalyticModel final : public ProfileModel {
 public:
  explicit AnalyticModel(Formula f) : f_(std::move(f)) {}
  double eta(double r) const override { return f_(r); }
  Jet jet(double r, int order) const override {
    if (order > Jet::kMaxOrder) {
      throw DerivativeUnavailable("analytic profiles provide at most " +
                                  std::to_string(Jet::kMaxOrder) + " derivatives");
    }
    return f_(Jet::variable(r, order));
  }
  int max_derivative_order() const override { return Jet::kMaxOrder; }
  std::vector<double> breakpoints() const override {
    if constexpr (requires { f_.breakpoints(); }) {
      return f_.breakpoints();
    } else {
      return {};
    }
  }

 private:
  Formula f_;
};

template <class Formula>
std::shared_ptr<const ProfileModel> make_analytic(Formula f) {
  return std::make_shared<AnalyticModel<Formula>>(std::move(f));
}

template <class T>
T constant_like(const T& r, double v) {
  if constexpr (std::is_same_v<T, Jet>) {
    return Jet::constant(v, r.order());
  } else {
    return T(v);
  }
}

struct ConstantEta {
  double value;
  template <class T>
  T operator()(const T& r) const {
    return constant_like(r, value);
  }
};

struct ColtonExample {
  template <class T>
  T operator()(const T& r) const {
    const T p = (r + 1.0) * (r - 3.0);
    return 16.0 / (p * p);
  }
};

// 1 + A cos^4(pi (r - c) / (2 w)) inside |r - c| < w, 1 outside. C^3 at the
// support edges.
struct RaisedCosine {
  double amplitude, center, half_width;
  template <class T>
  T operator()(const T& r) const {
    double r0;
    if constexpr (std::is_same_v<T, Jet>) {
      r0 = r.value();
    } else {
      r0 = r;
    }
    if (std::abs(r0 - center) >= half_width) return constant_like(r, 1.0);
    const T c = cos((r - center) * (kPi / (2.0 * half_width)));
    const T c2 = c * c;
    return 1.0 + amplitude * (c2 * c2);
  }
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (double r : {center - half_width, center + half_width}) {
      if (r > 0.0 && r < 1.0) out.push_back(r);
    }
    return out;
  }
};

// eta0 on [0, r0], then a C^3 polynomial ramp 5t^4 - 4t^5 to eta(1) = 1 with
// eta'(1) = 0 and eta''(1) = -20 (1 - eta0) / (1 - r0)^2.
struct SmoothStep {
  double eta0, r0;
  template <class T>
  T operator()(const T& r) const {
    double rv;
    if constexpr (std::is_same_v<T, Jet>) {
      rv = r.value();
    } else {
      rv = r;
    }
    if (rv <= r0) return constant_like(r, eta0);
    const T t = (r - r0) / (1.0 - r0);
    const T t2 = t * t;
    const T t4 = t2 * t2;
    return eta0 + (1.0 - eta0) * (5.0 * t4 - 4.0 * (t4 * t));
  }
  std::vector<double> breakpoints() const { return {r0}; }
};

class ChebyshevModel final : public ProfileModel {
 public:
  ChebyshevModel(std::vector<double> coeffs, int deriv_order) : deriv_order_(deriv_order) {
    derivs_.push_back(std::move(coeffs));
    for (int d = 1; d <= deriv_order; ++d) derivs_.push_back(differentiate(derivs_.back()));
  }

  double eta(double r) const override { return clenshaw(derivs_[0], 2.0 * r - 1.0); }

  Jet jet(double r, int order) const override {
    if (order > deriv_order_) {
      std::ostringstream msg;
      msg << "Chebyshev profile declares deriv_order " << deriv_order_ << " but derivative of order "
          << order << " was requested";
      throw DerivativeUnavailable(msg.str());
    }
    Jet j = Jet::variable(r, order);
    double factorial = 1.0;
    for (int k = 0; k <= order; ++k) {
      if (k > 0) factorial *= k;
      j.coeff(k) = clenshaw(derivs_[k], 2.0 * r - 1.0) / factorial;
    }
    return j;
  }

  int max_derivative_order() const override { return deriv_order_; }

 private:
  // Coefficients of d/dr for a series in T_j(2r - 1) with full-weight c_0.
  static std::vector<double> differentiate(const std::vector<double>& c) {
    const std::size_t n = c.size();
    if (n <= 1) return {0.0};
    std::vector<double> d(n + 1, 0.0);
    for (std::size_t j = n - 1; j >= 1; --j) d[j - 1] = d[j + 1] + 2.0 * static_cast<double>(j) * c[j];
    d[0] *= 0.5;
    d.resize(n - 1);
    for (double& v : d) v *= 2.0;  // dt/dr
    return d;
  }

  static double clenshaw(const std::vector<double>& c, double t) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
      const double b0 = c[k] + 2.0 * t * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return c.empty() ? 0.0 : c[0] + t * b1 - b2;
  }

  int deriv_order_;
  std::vector<std::vector<double>> derivs_;
};

double param_or(const std::vector<double>& p, std::size_t i, double fallback) {
  return i < p.size() ? p[i] : fallback;
}

}  // namespace

RefractiveProfile RefractiveProfile::named(std::string_view name, std::vector<double> params,
                                           std::optional<bool> normalized_tail,
                                           std::optional<int> smoothness_m) {
  std::shared_ptr<const ProfileModel> model;
  std::string canonical(name);
  if (name == "const1" || name == "const4" || name == "constant") {
    double value = name == "const4" ? 4.0 : 1.0;
    if (name == "constant") value = param_or(params, 0, 1.0);
    if (name != "constant") params.clear();
    if (!(value > 0.0)) throw InvalidInput("constant profile needs a positive value");
    model = make_analytic(ConstantEta{value});
    if (!normalized_tail) normalized_tail = (value == 1.0);
  } else if (name == "colton_example") {
    params.clear();
    model = make_analytic(ColtonExample{});
    if (!normalized_tail) normalized_tail = true;
  } else if (name == "raised_cosine") {
    const double amp = param_or(params, 0, 0.5);
    const double center = param_or(params, 1, 0.4);
    const double half_width = param_or(params, 2, 0.3);
    if (!(half_width > 0.0) || !(amp > -1.0)) {
      throw InvalidInput("raised_cosine needs half_width > 0 and amplitude > -1");
    }
    params = {amp, center, half_width};
    model = make_analytic(RaisedCosine{amp, center, half_width});
    if (!normalized_tail) normalized_tail = center + half_width <= 1.0;
  } else if (name == "smooth_step") {
    const double eta0 = param_or(params, 0, 0.25);
    const double r0 = param_or(params, 1, 0.5);
    if (!(eta0 > 0.0) || !(r0 >= 0.0 && r0 < 1.0)) {
      throw InvalidInput("smooth_step needs eta0 > 0 and 0 <= r0 < 1");
    }
    params = {eta0, r0};
    model = make_analytic(SmoothStep{eta0, r0});
    if (!normalized_tail) normalized_tail = true;
  } else {
    throw InvalidInput("unknown named profile '" + canonical + "'");
  }
  return RefractiveProfile(NamedAnalytic{canonical, std::move(params)}, std::move(model),
                           normalized_tail, smoothness_m);
}

RefractiveProfile RefractiveProfile::chebyshev(std::vector<double> coeffs, int deriv_order,
                                               std::optional<bool> normalized_tail,
                                               std::optional<int> smoothness_m) {
  if (coeffs.empty()) throw InvalidInput("Chebyshev profile needs at least one coefficient");
  if (deriv_order < 2) {
    throw InvalidInput("Chebyshev profile needs deriv_order >= 2 for the Liouville potential");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw InvalidInput("Chebyshev coefficients must be finite");
  }
  auto model = std::make_shared<ChebyshevModel>(coeffs, deriv_order);
  return RefractiveProfile(ChebyshevSeries{std::move(coeffs), deriv_order}, std::move(model),
                           normalized_tail.value_or(false), smoothness_m);
}

std::vector<std::string> RefractiveProfile::registered_names() {
  return {"constant", "const1", "const4", "colton_example", "raised_cosine", "smooth_step"};
}

RefractiveProfile::RefractiveProfile(ProfileKind kind, std::shared_ptr<const ProfileModel> model,
                                     std::optional<bool> normalized_tail,
                                     std::optional<int> smoothness_m)
    : kind_(std::move(kind)), model_(std::move(model)) {
  // Positivity certificate: 10x refined grid plus a first-derivative bound on
  // each cell.
  constexpr int kCells = 1000;
  const double h = 1.0 / kCells;
  double lo = model_->eta(0.0);
  double hi = lo;
  double slope = 0.0;
  for (int i = 0; i <= kCells; ++i) {
    const double r = i * h;
    const Jet j = model_->jet(r, 1);
    if (!std::isfinite(j.value())) throw InvalidInput("eta is not finite on [0,1]");
    lo = std::min(lo, j.value());
    hi = std::max(hi, j.value());
    slope = std::max(slope, std::abs(j.derivative(1)));
  }
  eta_min_ = lo - 0.5 * h * slope;
  eta_max_ = hi + 0.5 * h * slope;
  if (!(eta_min_ > 0.0)) {
    std::ostringstream msg;
    msg << "eta is not certified positive on [0,1] (grid minimum " << lo << ", bound " << eta_min_
        << ")";
    throw InvalidInput(msg.str());
  }

  // Series data carries its own rounding; 1e-10 is the evaluation floor.
  constexpr double kTailTol = 1e-10;
  const Jet tail = model_->jet(1.0, std::min(model_->max_derivative_order(), Jet::kMaxOrder));
  const bool tail_holds =
      std::abs(tail.value() - 1.0) <= kTailTol && std::abs(tail.derivative(1)) <= kTailTol;
  normalized_tail_ = normalized_tail.value_or(tail_holds);
  if (normalized_tail_ && !tail_holds) {
    std::ostringstream msg;
    msg << "profile flagged normalized_tail but eta(1) = " << tail.value()
        << ", eta'(1) = " << tail.derivative(1);
    throw InvalidInput(msg.str());
  }

  // Detect m: first nonvanishing derivative of order >= 2 at r = 1.
  std::optional<int> detected;
  if (tail_holds) {
    for (int u = 2; u <= tail.order(); ++u) {
      if (std::abs(tail.derivative(u)) > 1e-10) {
        detected = u - 2;
        break;
      }
    }
  }
  if (smoothness_m) {
    const int m = *smoothness_m;
    if (m < 0) throw InvalidInput("smoothness_m must be nonnegative");
    if (!tail_holds) throw InvalidInput("smoothness_m requires eta(1) = 1 and eta'(1) = 0");
    if (m + 2 <= tail.order() && detected && *detected != m) {
      std::ostringstream msg;
      msg << "declared smoothness_m = " << m << " but eta^(" << (*detected + 2)
          << ")(1) is the first nonzero derivative";
      throw InvalidInput(msg.str());
    }
    smoothness_m_ = m;
  } else {
    smoothness_m_ = detected;
  }
}

double RefractiveProfile::sqrt_eta(double r) const { return std::sqrt(model_->eta(r)); }

double RefractiveProfile::derivative(double r, int order) const {
  if (order == 0) return model_->eta(r);
  return model_->jet(r, order).derivative(order);
}

std::string RefractiveProfile::label() const {
  if (const auto* named = std::get_if<NamedAnalytic>(&kind_)) {
    std::ostringstream out;
    out << named->name;
    if (!named->params.empty()) {
      out << '(';
      for (std::size_t i = 0; i < named->params.size(); ++i) {
        out << (i ? "," : "") << named->params[i];
      }
      out << ')';
    }
    return out.str();
  }
  return "chebyshev[" + std::to_string(std::get<ChebyshevSeries>(kind_).coeffs.size()) + "]";
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kMapPanels = 64;

double gk_panel(const RefractiveProfile& p, double lo, double hi) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  return GK::integrate([&](double r) { return p.sqrt_eta(r); }, lo, hi, 5, 1e-13, &err);
}

}  // namespace

TravelTimeMap::TravelTimeMap(const RefractiveProfile& profile) : profile_(profile) {
  edges_.reserve(kMapPanels + 1);
  for (int j = 0; j <= kMapPanels; ++j) edges_.push_back(static_cast<double>(j) / kMapPanels);
  for (double b : profile_.breakpoints()) edges_.push_back(b);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  cumulative_.assign(edges_.size(), 0.0);
  for (std::size_t j = 0; j + 1 < edges_.size(); ++j) {
    const double piece = integrate_adaptive([&](double r) { return profile_.sqrt_eta(r); },
                                            edges_[j], edges_[j + 1], 1e-14);
    cumulative_[j + 1] = cumulative_[j] + piece;
  }
}

double TravelTimeMap::operator()(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return cumulative_.back();
  const std::size_t j =
      static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), r) - edges_.begin()) - 1;
  if (r == edges_[j]) return cumulative_[j];
  return cumulative_[j] + gk_panel(profile_, edges_[j], r);
}

double travel_time(const RefractiveProfile& profile) { return TravelTimeMap(profile).total(); }

Jet potential_jet_in_r(const RefractiveProfile& profile, double r, int order) {
  const Jet e = profile.jet(r, order + 2);
  const Jet e1 = e.differentiate();
  const Jet e2 = e1.differentiate();
  const Jet e2t = e2.truncated(order);
  const Jet et = e.truncated(order);
  const Jet e1t = e1.truncated(order);
  return e2t / (4.0 * et * et) - (5.0 / 16.0) * (e1t * e1t) / (et * et * et);
}

// Piecewise Chebyshev interpolant of r(x), nodes located by bisection.
struct LiouvilleData::InverseTable {
  static constexpr int kPanels = 32;
  static constexpr int kDegree = 20;

  double a = 0.0;
  std::vector<std::vector<double>> values;  // per panel, at second-kind nodes

  InverseTable(const TravelTimeMap& map, double total) : a(total) {
    values.resize(kPanels);
    for (int p = 0; p < kPanels; ++p) {
      values[p].resize(kDegree + 1);
      const double x0 = a * p / kPanels;
      const double x1 = a * (p + 1) / kPanels;
      for (int j = 0; j <= kDegree; ++j) {
        const double node = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * std::cos(kPi * j / kDegree);
        values[p][j] = bisect(map, node);
      }
    }
  }

  static double bisect(const TravelTimeMap& map, double target) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      (map(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double interpolate(double x) const {
    const int p = std::clamp(static_cast<int>(x / a * kPanels), 0, kPanels - 1);
    const double x0 = a * p / kPanels;
    const double x1 = a * (p + 1) / kPanels;
    const double t = (2.0 * x - x0 - x1) / (x1 - x0);
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= kDegree; ++j) {
      const double node = std::cos(kPi * j / kDegree);
      const double diff = t - node;
      if (diff == 0.0) return values[p][j];
      double w = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == kDegree) w *= 0.5;
      num += w / diff * values[p][j];
      den += w / diff;
    }
    return num / den;
  }
};

LiouvilleData::LiouvilleData(const RefractiveProfile& profile) : profile_(profile) {
  if (profile_.max_derivative_order() < 2) {
    throw DerivativeUnavailable("Liouville transform needs two derivatives of eta");
  }
  map_ = std::make_shared<TravelTimeMap>(profile_);
  a_ = map_->total();
  inverse_ = std::make_shared<InverseTable>(*map_, a_);
  q_mean_ = q_integral(0.0, a_);
}

double LiouvilleData::x_of_r(double r) const { return (*map_)(r); }

double LiouvilleData::r_of_x(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= a_) return 1.0;
  double r = std::clamp(inverse_->interpolate(x), 0.0, 1.0);
  for (int it = 0; it < 2; ++it) {
    const double step = (x_of_r(r) - x) / profile_.sqrt_eta(r);
    r = std::clamp(r - step, 0.0, 1.0);
    if (std::abs(step) < 1e-16) break;
  }
  return r;
}

double LiouvilleData::q(double x) const {
  const double r = r_of_x(x);
  const Jet e = profile_.jet(r, 2);
  const double eta = e.value();
  const double d1 = e.derivative(1);
  const double d2 = e.derivative(2);
  return d2 / (4.0 * eta * eta) - (5.0 / 16.0) * d1 * d1 / (eta * eta * eta);
}

Jet LiouvilleData::q_jet(double x, int order) const {
  const double r0 = r_of_x(x);
  // x(r0 + e) - x(r0) as a series in e, then invert to e(delta).
  const Jet speed = sqrt(profile_.jet(r0, order));
  const Jet forward = speed.integrate();  // constant term 0, one order longer
  Jet inverse = Jet::variable(0.0, order) / speed.value();
  for (int it = 0; it < 6; ++it) {
    Jet residual = forward.compose(inverse) - Jet::variable(0.0, order);
    const Jet slope = forward.differentiate().compose(inverse);
    inverse -= residual / slope;
  }
  return potential_jet_in_r(profile_, r0, order).compose(inverse);
}

double LiouvilleData::q_integral(double x0, double x1) const {
  const double r0 = r_of_x(x0);
  const double r1 = r_of_x(x1);
  auto integrand = [&](double r) {
    const Jet e = profile_.jet(r, 2);
    const double eta = e.value();
    const double d1 = e.derivative(1);
    const double d2 = e.derivative(2);
    const double qr = d2 / (4.0 * eta * eta) - (5.0 / 16.0) * d1 * d1 / (eta * eta * eta);
    return qr * std::sqrt(eta);
  };
  const double lo = std::min(r0, r1);
  const double hi = std::max(r0, r1);
  std::vector<double> edges{lo};
  for (double b : profile_.breakpoints()) {
    if (b > lo && b < hi) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.push_back(hi);
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    total += integrate_adaptive(integrand, edges[j], edges[j + 1], 1e-12);
  }
  return r0 <= r1 ? total : -total;
}

LiouvilleData liouville_transform(const RefractiveProfile& profile) {
  return LiouvilleData(profile);
}

double subinterval_boundary(const LiouvilleData& liouville, double mass) {
  const double a = liouville.a();
  if (!(mass > 0.0) || mass > a) {
    std::ostringstream msg;
    msg << "mass " << mass << " outside (0, a] with a = " << a;
    throw MassOutOfRange(msg.str());
  }
  if (mass == a) return 0.0;
  const double target = a - mass;
  double eps = liouville.r_of_x(target);
  // Newton polish on the cumulative map, guarded by a bracket.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double residual = (a - liouville.x_of_r(eps)) - mass;
    if (std::abs(residual) <= 1e-13) break;
    (residual > 0.0 ? lo : hi) = eps;
    double next = eps + residual / liouville.profile().sqrt_eta(eps);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    eps = next;
  }
  return eps;
}

double subinterval_boundary(const RefractiveProfile& profile, double mass) {
  return subinterval_boundary(LiouvilleData(profile), mass);
}

}  // namespace tev
