// Command-line front end. Exit codes: 0 ok, 2 bad input, 3 regime mismatch,
// 4 numerical failure or a failed check.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tev/asymptotics.hpp"
#include "tev/errors.hpp"
#include "tev/inverse.hpp"
#include "tev/io.hpp"
#include "tev/kernel.hpp"
#include "tev/zeros.hpp"

using namespace tev;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInput = 2;
constexpr int kRegime = 3;
constexpr int kNumerical = 4;

struct Options {
  std::string profile;
  std::string rect;
  std::string spectrum;
  std::string scenario;
  std::string out;
  std::string radii;
  std::string ks;
  std::string bump;
  double kmax = 0.0;
  double tol = kDefaultTol;
  double h = 0.0;
  double b = std::numeric_limits<double>::quiet_NaN();
  double radius = 0.0;
  int n_first = 5;
  int n_last = 30;
  int mmax = 4;
  int samples = 20;
  unsigned seed = 1;
  bool json = false;
  bool parallel = false;
  bool refine = false;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write " + path);
  return f;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string fmt(double x) { return format_double(x); }

std::string fmt(cplx z) {
  std::ostringstream s;
  s << fmt(z.real()) << (std::signbit(z.imag()) ? "-" : "+") << fmt(std::abs(z.imag())) << "i";
  return s.str();
}

struct CheckTable {
  json rows = json::array();
  bool ok = true;

  void add(const std::string& name, double value, double bound) {
    const bool pass = value <= bound;
    ok = ok && pass;
    rows.push_back({{"check", name}, {"value", value}, {"bound", bound}, {"pass", pass}});
  }

  int print(bool as_json) const {
    if (as_json) {
      emit({{"checks", rows}, {"pass", ok}});
    } else {
      for (const auto& r : rows) {
        std::cout << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["check"].get<std::string>()
                  << " value=" << fmt(r["value"].get<double>())
                  << " bound=" << fmt(r["bound"].get<double>()) << '\n';
      }
    }
    return ok ? kOk : kNumerical;
  }
};

int profile_info(const Options& o) {
  const auto profile = load_profile(o.profile);
  const LiouvilleData l(profile);
  const double a = l.a();
  json j = {{"profile", profile_to_json(profile)},
            {"label", profile.label()},
            {"a", a},
            {"q_mean", l.q_mean()},
            {"regime", to_string(regime_of(a))},
            {"eta0", profile.eta(0.0)},
            {"eta_min", profile.eta_min()},
            {"eta_max", profile.eta_max()},
            {"normalized_tail", profile.normalized_tail()}};
  if (profile.smoothness_m()) {
    j["m"] = *profile.smoothness_m();
    j["eta_deriv"] = profile.derivative(1.0, *profile.smoothness_m() + 2);
  }
  if (regime_of(a) == Regime::a_gt_1) {
    const auto t = theorem3_epsilon(l);
    j["epsilon"] = t.epsilon;
    j["epsilon1"] = t.epsilon1;
    j["x0"] = t.x0;
  }
  if (!std::isnan(o.b)) {
    j["b"] = o.b;
    j["epsilon2"] = subinterval_boundary(l, o.b);
    const auto t = theorem4_threshold(a, o.b);
    j["threshold"] = t.value;
    j["threshold_boundary"] = t.boundary;
  }
  if (profile.eta_min() == 1.0 && profile.eta_max() == 1.0) {
    std::cerr << "warning: eta == 1 makes d(k) vanish identically\n";
  }
  if (o.json) {
    emit(j);
    return kOk;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "profile") continue;
    std::cout << key << ' ';
    if (value.is_number_float()) {
      std::cout << fmt(value.get<double>());
    } else if (value.is_string()) {
      std::cout << value.get<std::string>();
    } else {
      std::cout << value.dump();
    }
    std::cout << '\n';
  }
  return kOk;
}

SearchReport search(const RefractiveProfile& profile, const Options& o) {
  SearchOptions opt;
  opt.mmax = o.mmax;
  opt.parallel = o.parallel;
  return find_zeros(profile, parse_rect(o.rect), o.tol, opt);
}

int spectrum(const Options& o) {
  const auto profile = load_profile(o.profile);
  const Rect rect = parse_rect(o.rect);
  const auto report = search(profile, o);
  if (rect.y0 == 0.0) {
    const double kmax = o.kmax > 0.0 ? std::min(o.kmax, rect.x1) : rect.x1;
    for (const auto& r : real_zeros(profile, kmax, o.tol)) {
      if (r.k.real() < rect.x0) continue;
      bool found = false;
      for (const auto& z : report.zeros) {
        found = found || (z.cls == ZeroClass::real &&
                          std::abs(z.k - r.k) <= 1e-6 * (1.0 + std::abs(r.k)));
      }
      if (!found) std::cerr << "warning: sign change at " << fmt(r.k.real()) << " not certified\n";
    }
  }
  json j = zeros_to_json(rect, report.zeros);
  j["a"] = travel_time(profile);
  j["regime"] = to_string(regime_of(j["a"].get<double>()));
  if (!o.out.empty()) {
    auto csv = open_out(o.out + ".csv");
    write_zeros_csv(csv, report.zeros);
    open_out(o.out + ".json") << j.dump(2) << '\n';
    auto plot = open_out(o.out + "_plot.csv");
    write_quadrant_plot(plot, report.zeros);
  }
  if (o.json) {
    emit(j);
  } else if (o.out.empty()) {
    write_zeros_csv(std::cout, report.zeros);
  } else {
    std::cout << "zeros " << report.zeros.size() << " count " << report.count << '\n';
  }
  return kOk;
}

int asymptotics(const Options& o) {
  const auto profile = load_profile(o.profile);
  const LiouvilleData l(profile);
  const auto c = AsymptoticCase::from(l);
  std::vector<SpectralZero> zeros;
  if (!o.spectrum.empty()) {
    const auto file = read_spectrum(o.spectrum);
    if (file.regime && *file.regime != c.regime) {
      throw RegimeError(std::string("spectrum regime ") + to_string(*file.regime) +
                        " disagrees with profile regime " + to_string(c.regime));
    }
    zeros = file.zeros;
  } else if (!o.rect.empty()) {
    zeros = search(profile, o).zeros;
  } else {
    throw InvalidInput("asymptotics needs --spectrum or --rect");
  }

  const auto predict = [&](int n, Branch b) { return predict_nonreal(c, n, b, o.refine); };
  const double spacing = c.regime == Regime::a_lt_1 ? std::numbers::pi / c.a : std::numbers::pi;
  const auto m = match(zeros, predict, spacing, o.n_first, o.n_last);

  json j = {{"regime", to_string(c.regime)}, {"m", c.m},  {"a", c.a},
            {"n_first", o.n_first},           {"n_last", o.n_last},
            {"pairs", m.all_pairs().size()},   {"all_matched", m.all_matched()},
            {"shift_plus", m.plus.shift},      {"shift_minus", m.minus.shift},
            {"systematic_offset", m.systematic_offset()},
            {"unmatched_computed", m.plus.unmatched_computed.size() + m.minus.unmatched_computed.size()},
            {"unmatched_indices", m.plus.unmatched_indices.size() + m.minus.unmatched_indices.size()}};
  if (!m.all_pairs().empty()) {
    const int mid = (o.n_first + o.n_last) / 2;
    const double early = m.max_residual(o.n_first, mid);
    const double late = m.max_residual(mid + 1, o.n_last);
    j["max_residual"] = m.max_residual(o.n_first, o.n_last);
    j["max_residual_early"] = early;
    j["max_residual_late"] = late;
    j["decay_trend"] = late <= early;
    const double p = m.decay_exponent();
    if (std::isfinite(p)) j["decay_exponent"] = p;
  }
  if (!o.radii.empty()) {
    json rows = json::array();
    for (const auto& r : counting_check(zeros, parse_list(o.radii))) {
      rows.push_back({{"r", r.r}, {"N", r.count}, {"ratio", r.ratio}});
    }
    j["counting"] = rows;
  }
  if (!o.out.empty()) {
    auto csv = open_out(o.out + "_match.csv");
    write_match_csv(csv, m);
    open_out(o.out + "_summary.json") << j.dump(2) << '\n';
  }
  if (o.json) {
    emit(j);
  } else {
    if (o.out.empty()) write_match_csv(std::cout, m);
    for (const auto& [key, value] : j.items()) {
      if (key == "counting") continue;
      std::cout << "# " << key << ' ';
      if (value.is_number_float()) {
        std::cout << fmt(value.get<double>());
      } else if (value.is_string()) {
        std::cout << value.get<std::string>();
      } else {
        std::cout << value.dump();
      }
      std::cout << '\n';
    }
    if (j.contains("counting")) {
      for (const auto& r : j["counting"]) {
        std::cout << "# counting r=" << fmt(r["r"].get<double>()) << " N=" << r["N"]
                  << " ratio=" << fmt(r["ratio"].get<double>()) << '\n';
      }
    }
  }
  return kOk;
}

int kernel_check(const Options& o) {
  const auto profile = load_profile(o.profile);
  const LiouvilleData l(profile);
  const double h = o.h > 0.0 ? o.h : l.a() / 200.0;
  const auto coarse = solve_kernel(l, h);
  const auto fine = solve_kernel(l, coarse.h / 2.0);
  if (!o.out.empty()) {
    auto f = open_out(o.out);
    write_kernel_csv(f, coarse);
  }

  CheckTable t;
  t.add("picard_last_difference", coarse.last_difference, 1e-12);
  t.add("diagonal_residual", coarse.diagonal_residual(l), 5e-4);
  const auto tr = boundary_traces(l, coarse);
  double fd = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    fd = std::max({fd, std::abs(tr.k1[i] - tr.k1_fd[i]), std::abs(tr.k2[i] - tr.k2_fd[i])});
    sum = std::max(sum, std::abs(tr.k1[i] + tr.k2[i] - tr.sum_rhs[i]));
  }
  t.add("trace_vs_finite_difference", fd, 1e-3);
  t.add("trace_sum_identity", sum, 1e-3);
  t.add("endpoint_sum_minus_half_q(a)",
        std::abs(tr.k1.back() + tr.k2.back() - 0.5 * l.q(l.a())), 1e-3);
  if (profile.normalized_tail()) {
    std::vector<double> ks = o.ks.empty() ? std::vector<double>{std::numbers::pi, 7.3, 12.0}
                                          : parse_list(o.ks);
    for (double k : ks) {
      const auto r = representation_check(profile, l, coarse, fine, k);
      t.add("representation_k=" + fmt(k), std::max(r.residual_y1, r.residual_dy1), 1e-5);
    }
  } else {
    std::cerr << "note: representation check skipped (needs eta(1) = 1, eta'(1) = 0)\n";
  }
  return t.print(o.json);
}

UniquenessScenario scenario_of(const Options& o) {
  if (!o.scenario.empty()) return load_scenario(o.scenario);
  if (o.profile.empty()) throw InvalidInput("inverse-check needs --scenario or --profile");
  const LiouvilleData l(load_profile(o.profile));
  const auto q = Potential::from_profile(l);
  const double x0 = theorem3_epsilon(l).x0;
  const auto bump = o.bump.empty() ? std::vector<double>{0.25 * x0, 0.25 * x0, 1.0}
                                   : parse_list(o.bump);
  if (bump.size() != 3) throw InvalidInput("--bump expects center,half_width,height");
  return UniquenessScenario::make(q, q.with_bump(bump[0], bump[1], bump[2]), x0,
                                  std::isnan(o.b) ? 0.0 : o.b);
}

int inverse_check(const Options& o) {
  const auto s = scenario_of(o);
  CheckTable t;
  std::mt19937_64 rng(o.seed);
  const double kmax = o.kmax > 0.0 ? o.kmax : 30.0;
  std::uniform_real_distribution<double> re(0.0, kmax), im(0.0, 3.0);
  for (int i = 0; i < o.samples;) {
    const cplx k(re(rng), im(rng));
    if (std::abs(k) > kmax) continue;
    const auto g = wronskian_g(s, k);
    t.add("g_two_way_k=" + fmt(k), std::abs(g.integral - g.wronskian),
          1e-8 * std::max(1.0, std::abs(g.wronskian)));
    ++i;
  }
  if (!std::isnan(o.b)) {
    const auto th = theorem4_threshold(s.q.a, o.b);
    t.rows.push_back({{"check", "threshold"}, {"value", th.value}, {"boundary", th.boundary},
                      {"in_range", th.in_range}, {"pass", true}});
  }
  if (!o.spectrum.empty() && o.radius > 0.0) {
    const auto zs = read_spectrum(o.spectrum).zeros;
    for (auto subset : {DensitySubset::all, DensitySubset::every_second}) {
      const auto e = density_estimate(zs, o.radius, subset);
      t.rows.push_back({{"check", subset == DensitySubset::all ? "alpha_hat_all"
                                                               : "alpha_hat_every_second"},
                        {"value", e.alpha_hat}, {"N", e.count}, {"r", e.r}, {"pass", true}});
    }
  }
  if (o.json) {
    emit({{"checks", t.rows}, {"pass", t.ok}});
    return t.ok ? kOk : kNumerical;
  }
  for (const auto& r : t.rows) {
    std::cout << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["check"].get<std::string>()
              << " value=" << fmt(r["value"].get<double>());
    if (r.contains("bound")) std::cout << " bound=" << fmt(r["bound"].get<double>());
    if (r.contains("N")) std::cout << " N=" << r["N"];
    if (r.contains("boundary")) std::cout << " boundary=" << r["boundary"];
    std::cout << '\n';
  }
  return t.ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior transmission eigenvalues of a stratified sphere"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool need_profile) {
    auto* p = c->add_option("--profile", o.profile, "Registered profile name or profile JSON file");
    if (need_profile) p->required();
    c->add_option("--tol", o.tol, "Integration tolerance");
    c->add_option("--out", o.out, "Output path or prefix");
    c->add_flag("--json", o.json, "Print JSON");
  };

  auto* info = app.add_subcommand("profile-info", "Travel time, potential and regime");
  common(info, true);
  info->add_option("--b", o.b, "Mass b for epsilon2 and the density threshold");

  auto* spec = app.add_subcommand("spectrum", "Zeros of d(k) in a rectangle");
  common(spec, true);
  spec->add_option("--rect", o.rect, "x0,x1,y0,y1")->required();
  spec->add_option("--kmax", o.kmax, "Upper end of the real-axis cross-check");
  spec->add_option("--mmax", o.mmax, "Largest zero count resolved per cell");
  spec->add_flag("--parallel", o.parallel, "Search sibling cells concurrently");

  auto* asym = app.add_subcommand("asymptotics", "Match zeros against the asymptotic formulas");
  common(asym, true);
  asym->add_option("--spectrum", o.spectrum, "Zero set CSV or JSON");
  asym->add_option("--rect", o.rect, "Search this rectangle instead of reading --spectrum");
  asym->add_option("--n-first", o.n_first, "First index");
  asym->add_option("--n-last", o.n_last, "Last index");
  asym->add_option("--radii", o.radii, "Radii for the counting law, comma separated");
  asym->add_flag("--refine", o.refine, "Refine predictions through the transcendental equation");
  asym->add_option("--mmax", o.mmax, "Largest zero count resolved per cell");

  auto* kern = app.add_subcommand("kernel-check", "Transformation-operator checks");
  common(kern, true);
  kern->add_option("--step", o.h, "Grid step (default a/200)");
  kern->add_option("--k", o.ks, "Wavenumbers for the representation check");

  auto* inv = app.add_subcommand("inverse-check", "Wronskian identity and density threshold");
  common(inv, false);
  inv->add_option("--scenario", o.scenario, "Scenario JSON");
  inv->add_option("--bump", o.bump, "center,half_width,height of the perturbation");
  inv->add_option("--samples", o.samples, "Number of random wavenumbers");
  inv->add_option("--seed", o.seed, "Random seed");
  inv->add_option("--kmax", o.kmax, "Largest |k| sampled (default 30)");
  inv->add_option("--b", o.b, "Mass b for the density threshold");
  inv->add_option("--spectrum", o.spectrum, "Zero set for the density estimate");
  inv->add_option("--radius", o.radius, "Radius for the density estimate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*info) return profile_info(o);
    if (*spec) return spectrum(o);
    if (*asym) return asymptotics(o);
    if (*kern) return kernel_check(o);
    if (*inv) return inverse_check(o);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const MassOutOfRange& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRegime;
  } catch (const CaseMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRegime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
