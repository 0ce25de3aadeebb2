#include "tev/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tev/errors.hpp"

namespace tev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnitTol = 1e-6;

// i^p exactly.
cplx i_power(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double sign_power(Branch b, int p) { return (b == Branch::minus && p % 2 != 0) ? -1.0 : 1.0; }

double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

void check_case(const AsymptoticCase& c) {
  if (c.m < 0) throw InvalidInput("m must be nonnegative");
  if (!(c.a > 0.0) || !std::isfinite(c.a)) throw InvalidInput("travel time must be positive");
  if (c.eta_deriv == 0.0 || !std::isfinite(c.eta_deriv)) {
    throw InvalidInput("eta^(m+2)(1) must be nonzero");
  }
  if (regime_of(c.a) != c.regime) {
    std::ostringstream msg;
    msg << "regime " << to_string(c.regime) << " does not match a = " << c.a;
    throw CaseMismatch(msg.str());
  }
  if (c.regime == Regime::a_eq_1 && (c.q_mean == 0.0 || !std::isfinite(c.q_mean))) {
    throw InvalidInput("a = 1 needs a nonzero integral of q");
  }
}

// Exponent p, scale s and constant C with the prediction written as
// z +- (p/2) log z = i n pi -+ (1/2) log C, k = -i z / s, z ~ i n pi.
struct Reduced {
  int p;
  double s;
  cplx c;
};

Reduced reduce(const AsymptoticCase& c, Branch b) {
  const double two_m4 = std::ldexp(1.0, c.m + 4);
  switch (c.regime) {
    case Regime::a_gt_1:
      return {c.m + 2, 1.0, two_m4 / (sign_power(b, c.m) * c.eta_deriv)};
    case Regime::a_lt_1:
      return {c.m + 2, c.a, -two_m4 / (sign_power(b, c.m) * c.eta_deriv)};
    case Regime::a_eq_1:
      return {c.m + 1, 1.0, -two_m4 * c.q_mean / (sign_power(b, c.m + 1) * c.eta_deriv)};
  }
  return {};
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::a_gt_1: return "a_gt_1";
    case Regime::a_lt_1: return "a_lt_1";
    case Regime::a_eq_1: return "a_eq_1";
  }
  return "?";
}

const char* to_string(Branch b) { return b == Branch::plus ? "+" : "-"; }

Regime regime_of(double a) {
  if (std::abs(a - 1.0) < kUnitTol) return Regime::a_eq_1;
  return a > 1.0 ? Regime::a_gt_1 : Regime::a_lt_1;
}

AsymptoticCase AsymptoticCase::make(Regime regime, int m, double eta_deriv, double q_mean,
                                    double a) {
  AsymptoticCase c{regime, m, eta_deriv, q_mean, a};
  check_case(c);
  return c;
}

AsymptoticCase AsymptoticCase::from(const LiouvilleData& liouville) {
  const auto& profile = liouville.profile();
  const auto m = profile.smoothness_m();
  if (!m) {
    throw InvalidInput("profile has no smoothness index m (needs eta(1) = 1, eta'(1) = 0 and "
                       "a nonvanishing higher derivative at r = 1)");
  }
  const double a = liouville.a();
  return make(regime_of(a), *m, profile.derivative(1.0, *m + 2), liouville.q_mean(), a);
}

cplx branch_log(cplx z, cplx w) { return std::log(w) + std::log(z / w); }

cplx solve_transcendental(double lambda, cplx w, double tol) {
  if (!std::isfinite(lambda) || !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    throw InvalidInput("transcendental equation needs finite lambda and w");
  }
  if (std::abs(w) < 10.0 * (1.0 + std::abs(lambda))) {
    throw InvalidInput("|w| must be at least 10 (1 + |lambda|)");
  }
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  if (lambda == 0.0) return w;

  auto residual = [&](cplx z) { return std::abs(z - lambda * branch_log(z, w) - w); };
  cplx z = w + lambda * std::log(w);
  double res = residual(z);
  double best = res;
  int stalled = 0;
  for (int it = 0; it < 100; ++it) {
    if (res <= tol) return z;
    z = w + lambda * branch_log(z, w);
    res = residual(z);
    if (res < best) {
      best = res;
      stalled = 0;
    } else if (++stalled >= 3) {
      break;
    }
  }
  if (res <= tol) return z;
  std::ostringstream msg;
  msg << "z - lambda log z = w: residual " << res << " after fixed-point iteration";
  throw IterationDiverged(msg.str());
}

cplx predict_nonreal(const AsymptoticCase& c, int n, Branch branch, bool refine) {
  if (n < 1) throw InvalidInput("prediction index must be >= 1");
  check_case(c);
  const double sgn = branch_sign(branch);
  const int p = c.regime == Regime::a_eq_1 ? c.m + 1 : c.m + 2;
  const cplx power = std::pow(2.0 * n * kPi, p) * i_power(p);
  const double pm = sign_power(branch, c.regime == Regime::a_eq_1 ? c.m + 1 : c.m);
  cplx arg;
  double base = n * kPi;
  double half = 0.5;
  switch (c.regime) {
    case Regime::a_gt_1: arg = 4.0 * power / (pm * c.eta_deriv); break;
    case Regime::a_lt_1:
      arg = -4.0 * power / (pm * c.eta_deriv);
      base /= c.a;
      half /= c.a;
      break;
    case Regime::a_eq_1: arg = -8.0 * power * c.q_mean / (pm * c.eta_deriv); break;
  }
  const cplx lead = base + sgn * cplx(0.0, half) * std::log(arg);
  if (!refine) return lead;

  const Reduced r = reduce(c, branch);
  const cplx w = cplx(0.0, n * kPi) - sgn * 0.5 * std::log(r.c);
  const double lambda = -sgn * 0.5 * r.p;
  if (std::abs(w) < 10.0 * (1.0 + std::abs(lambda))) return lead;
  const cplx z = solve_transcendental(lambda, w);
  cplx k = cplx(0.0, -1.0) * z / r.s;
  // Log branches can differ from the leading formula by 2 pi i; keep the index.
  const double spacing = kPi / r.s;
  k += spacing * std::round((lead.real() - k.real()) / spacing);
  return k;
}

double predict_real(const LiouvilleData& liouville, int n) {
  const double a = liouville.a();
  if (std::abs(a - 1.0) < kUnitTol) throw RegimeError("real-zero law needs a != 1");
  if (n < 1) throw InvalidInput("prediction index must be >= 1");
  const double k2 = n * n * kPi * kPi / ((a - 1.0) * (a - 1.0)) + liouville.q_mean() / (a - 1.0);
  if (k2 < 0.0) {
    std::ostringstream msg;
    msg << "two-term real-zero law is negative at n = " << n;
    throw RegimeError(msg.str());
  }
  return std::sqrt(k2);
}

std::vector<MatchedPair> MatchReport::all_pairs() const {
  std::vector<MatchedPair> out = plus.pairs;
  out.insert(out.end(), minus.pairs.begin(), minus.pairs.end());
  std::sort(out.begin(), out.end(), [](const MatchedPair& x, const MatchedPair& y) {
    return x.n != y.n ? x.n < y.n : x.branch == Branch::plus && y.branch == Branch::minus;
  });
  return out;
}

bool MatchReport::all_matched() const {
  return plus.unmatched_indices.empty() && minus.unmatched_indices.empty() &&
         plus.pairs.size() + minus.pairs.size() > 0;
}

double MatchReport::max_residual(int lo, int hi) const {
  double worst = 0.0;
  for (const auto& p : all_pairs()) {
    if (p.n >= lo && p.n <= hi) worst = std::max(worst, p.residual);
  }
  return worst;
}

std::vector<double> MatchReport::partial_sums() const {
  std::vector<double> out;
  double s = 0.0;
  for (const auto& p : all_pairs()) {
    s += p.residual * p.residual;
    out.push_back(s);
  }
  return out;
}

double MatchReport::decay_exponent() const {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const auto& p : all_pairs()) {
    if (!(p.residual > 0.0)) continue;
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(p.residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double den = count * sxx - sx * sx;
  if (count < 2 || den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return -(count * sxy - sx * sy) / den;
}

namespace {

BranchMatch match_branch(const std::vector<cplx>& computed, const Predictor& predict,
                         Branch branch, double spacing, int n_first, int n_last) {
  BranchMatch out;
  out.branch = branch;
  if (n_last < n_first) return out;
  std::vector<cplx> pred;
  for (int n = n_first; n <= n_last; ++n) pred.push_back(predict(n, branch));
  if (computed.empty()) {
    for (int n = n_first; n <= n_last; ++n) out.unmatched_indices.push_back(n);
    return out;
  }

  // Anchor: computed zero nearest the first prediction (ties to smaller distance).
  std::size_t anchor = 0;
  for (std::size_t j = 1; j < computed.size(); ++j) {
    if (std::abs(computed[j] - pred[0]) < std::abs(computed[anchor] - pred[0])) anchor = j;
  }

  const int count = static_cast<int>(pred.size());
  auto score = [&](int s, int& paired) {
    double total = 0.0;
    paired = 0;
    for (int i = 0; i < count; ++i) {
      const long j = static_cast<long>(anchor) + s + i;
      if (j < 0 || j >= static_cast<long>(computed.size())) continue;
      total += std::abs(computed[j] - pred[i]);
      ++paired;
    }
    return total;
  };
  int best_shift = 0;
  int best_paired = 0;
  double best_total = score(0, best_paired);
  for (int s : {-1, 1}) {
    int paired = 0;
    const double total = score(s, paired);
    // More pairs wins; among equal coverage, smaller total residual.
    const bool better = paired > best_paired ||
                        (paired == best_paired && total < best_total * (1.0 - 1e-12));
    if (better) {
      best_shift = s;
      best_total = total;
      best_paired = paired;
    }
  }
  // Ordinal offset of the chosen pairing relative to the anchor ordering.
  out.shift = best_shift;

  std::vector<bool> used(computed.size(), false);
  int suspects = 0;
  for (int i = 0; i < count; ++i) {
    const long j = static_cast<long>(anchor) + best_shift + i;
    if (j < 0 || j >= static_cast<long>(computed.size())) {
      out.unmatched_indices.push_back(n_first + i);
      continue;
    }
    MatchedPair p;
    p.n = n_first + i;
    p.branch = branch;
    p.predicted = pred[i];
    p.computed = computed[j];
    p.residual = std::abs(p.computed - p.predicted);
    p.suspect = p.residual > 0.5 * spacing;
    suspects += p.suspect;
    used[j] = true;
    out.pairs.push_back(p);
  }
  // Computed zeros inside the predicted window that no index claimed.
  const double lo = std::min(pred.front().real(), pred.back().real()) - 0.5 * spacing;
  const double hi = std::max(pred.front().real(), pred.back().real()) + 0.5 * spacing;
  for (std::size_t j = 0; j < computed.size(); ++j) {
    if (!used[j] && computed[j].real() >= lo && computed[j].real() <= hi) {
      out.unmatched_computed.push_back(computed[j]);
    }
  }
  int run = 0, longest = 0;
  for (const auto& p : out.pairs) {
    run = p.suspect ? run + 1 : 0;
    longest = std::max(longest, run);
  }
  out.systematic_offset = best_shift != 0 || longest >= 3 ||
                          (!out.pairs.empty() && 2 * suspects >= static_cast<int>(out.pairs.size()));
  return out;
}

}  // namespace

MatchReport match(const std::vector<SpectralZero>& zeros, const Predictor& predict, double spacing,
                  int n_first, int n_last) {
  MatchReport report;
  report.n_first = n_first;
  report.n_last = n_last;
  report.spacing = spacing;

  std::vector<cplx> upper, lower;
  for (const auto& z : zeros) {
    if (z.cls != ZeroClass::nonreal || z.k.real() <= 0.0) continue;
    for (int i = 0; i < z.multiplicity; ++i) {
      if (z.k.imag() > 0.0) {
        upper.push_back(z.k);
        lower.push_back(std::conj(z.k));
      } else {
        lower.push_back(z.k);
        upper.push_back(std::conj(z.k));
      }
    }
  }
  auto by_real = [](cplx x, cplx y) { return x.real() < y.real(); };
  std::sort(upper.begin(), upper.end(), by_real);
  std::sort(lower.begin(), lower.end(), by_real);

  // Which half plane a branch lives in depends on the regime constants; take
  // the half plane of its first prediction.
  auto side = [&](Branch b) {
    return predict(std::max(n_first, 1), b).imag() >= 0.0 ? &upper : &lower;
  };
  if (zeros.empty()) {
    report.plus.branch = Branch::plus;
    report.minus.branch = Branch::minus;
    return report;
  }
  report.plus = match_branch(*side(Branch::plus), predict, Branch::plus, spacing, n_first, n_last);
  report.minus =
      match_branch(*side(Branch::minus), predict, Branch::minus, spacing, n_first, n_last);
  return report;
}

MatchReport match(const SearchReport& zeros, const AsymptoticCase& c, int n_first, int n_last) {
  check_case(c);
  const double spacing = c.regime == Regime::a_lt_1 ? kPi / c.a : kPi;
  return match(
      zeros.zeros, [&](int n, Branch b) { return predict_nonreal(c, n, b); }, spacing, n_first,
      n_last);
}

std::vector<CountingRow> counting_check(const std::vector<SpectralZero>& first_quadrant,
                                        const std::vector<double>& radii) {
  std::vector<CountingRow> rows;
  for (double r : radii) {
    CountingRow row;
    row.r = r;
    for (const auto& z : first_quadrant) {
      if (z.cls != ZeroClass::nonreal || std::abs(z.k) > r) continue;
      const int copies = z.k.real() == 0.0 || z.k.imag() == 0.0 ? 2 : 4;
      row.count += copies * z.multiplicity;
    }
    row.ratio = r > 0.0 ? row.count * kPi / (4.0 * r) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tev
