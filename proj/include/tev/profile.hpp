#pragma once

// Squared refractive index eta(r) on [0,1] and its Liouville transform to
// travel-time coordinates x in [0,a] with potential q(x).

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tev/jet.hpp"

namespace tev {

struct NamedAnalytic {
  std::string name;
  std::vector<double> params;
};

struct ChebyshevSeries {
  std::vector<double> coeffs;  // in T_j(2r - 1)
  int deriv_order = 2;
};

using ProfileKind = std::variant<NamedAnalytic, ChebyshevSeries>;

class ProfileModel {
 public:
  virtual ~ProfileModel() = default;
  virtual double eta(double r) const = 0;
  // Taylor jet of eta around r; throws DerivativeUnavailable above
  // max_derivative_order().
  virtual Jet jet(double r, int order) const = 0;
  virtual int max_derivative_order() const = 0;
  // Interior points where eta loses smoothness.
  virtual std::vector<double> breakpoints() const { return {}; }
};

class RefractiveProfile {
 public:
  // Registered names: constant [value], const1, const4, colton_example,
  // raised_cosine [amplitude, center, half_width], smooth_step [eta0, r0].
  static RefractiveProfile named(std::string_view name, std::vector<double> params = {},
                                 std::optional<bool> normalized_tail = std::nullopt,
                                 std::optional<int> smoothness_m = std::nullopt);
  static RefractiveProfile chebyshev(std::vector<double> coeffs, int deriv_order,
                                     std::optional<bool> normalized_tail = std::nullopt,
                                     std::optional<int> smoothness_m = std::nullopt);

  static std::vector<std::string> registered_names();

  double eta(double r) const { return model_->eta(r); }
  double sqrt_eta(double r) const;
  double derivative(double r, int order) const;
  Jet jet(double r, int order) const { return model_->jet(r, order); }
  int max_derivative_order() const { return model_->max_derivative_order(); }
  std::vector<double> breakpoints() const { return model_->breakpoints(); }

  double eta_min() const { return eta_min_; }
  double eta_max() const { return eta_max_; }
  bool normalized_tail() const { return normalized_tail_; }
  std::optional<int> smoothness_m() const { return smoothness_m_; }
  const ProfileKind& kind() const { return kind_; }
  std::string label() const;

 private:
  RefractiveProfile(ProfileKind kind, std::shared_ptr<const ProfileModel> model,
                    std::optional<bool> normalized_tail, std::optional<int> smoothness_m);

  ProfileKind kind_;
  std::shared_ptr<const ProfileModel> model_;
  double eta_min_ = 0.0;
  double eta_max_ = 0.0;
  bool normalized_tail_ = false;
  std::optional<int> smoothness_m_;
};

// Cumulative optical length x(r) = int_0^r sqrt(eta). Panels are integrated
// once at construction; travel time is the sum of the panels.
class TravelTimeMap {
 public:
  explicit TravelTimeMap(const RefractiveProfile& profile);

  double total() const { return cumulative_.back(); }
  double operator()(double r) const;

 private:
  RefractiveProfile profile_;
  std::vector<double> edges_;
  std::vector<double> cumulative_;
};

double travel_time(const RefractiveProfile& profile);

// eta''/(4 eta^2) - (5/16) eta'^2/eta^3 at r, as a jet in r.
Jet potential_jet_in_r(const RefractiveProfile& profile, double r, int order);

class LiouvilleData {
 public:
  explicit LiouvilleData(const RefractiveProfile& profile);

  double a() const { return a_; }
  double x_of_r(double r) const;
  double r_of_x(double x) const;
  double q(double x) const;
  // Taylor jet of q in the x variable around x.
  Jet q_jet(double x, int order) const;
  double q_mean() const { return q_mean_; }
  // int_{x0}^{x1} q, evaluated on the r side.
  double q_integral(double x0, double x1) const;
  const RefractiveProfile& profile() const { return profile_; }

 private:
  struct InverseTable;

  RefractiveProfile profile_;
  std::shared_ptr<const TravelTimeMap> map_;
  std::shared_ptr<const InverseTable> inverse_;
  double a_ = 0.0;
  double q_mean_ = 0.0;
};

LiouvilleData liouville_transform(const RefractiveProfile& profile);

// Left endpoint eps in [0,1] with int_eps^1 sqrt(eta) = mass.
double subinterval_boundary(const LiouvilleData& liouville, double mass);
double subinterval_boundary(const RefractiveProfile& profile, double mass);

}  // namespace tev
