#include "tev/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tev/errors.hpp"

namespace tev {

using nlohmann::json;

namespace {

template <class T>
T get_field(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) {
    std::ostringstream msg;
    msg << what << ": missing \"" << key << "\"";
    throw InvalidInput(msg.str());
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    std::ostringstream msg;
    msg << what << ": bad \"" << key << "\": " << e.what();
    throw InvalidInput(msg.str());
  }
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_field<T>(j, key, what);
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size() || !std::isfinite(v)) {
    throw InvalidInput("not a finite number: '" + s + "'");
  }
  return v;
}

Potential potential_from_json(const json& j) {
  if (j.is_string()) {
    return Potential::from_profile(LiouvilleData(load_profile(j.get<std::string>())));
  }
  if (!j.is_object()) throw InvalidInput("scenario potential must be a profile ref or an object");
  if (j.contains("kind")) return Potential::from_profile(LiouvilleData(profile_from_json(j)));
  if (!j.contains("base")) throw InvalidInput("potential object needs \"base\"");
  Potential p = potential_from_json(j.at("base"));
  if (j.contains("bump")) {
    const json& b = j.at("bump");
    p = p.with_bump(get_field<double>(b, "center", "bump"),
                    get_field<double>(b, "half_width", "bump"),
                    get_field<double>(b, "height", "bump"));
  }
  return p;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": malformed JSON: " + e.what());
  }
}

RefractiveProfile profile_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("profile JSON must be an object");
  const auto kind = get_field<std::string>(j, "kind", "profile");
  const auto tail = get_optional<bool>(j, "normalized_tail", "profile");
  const auto m = get_optional<int>(j, "smoothness_m", "profile");
  if (kind == "named") {
    const auto params = get_optional<std::vector<double>>(j, "params", "profile");
    return RefractiveProfile::named(get_field<std::string>(j, "name", "profile"),
                                    params.value_or(std::vector<double>{}), tail, m);
  }
  if (kind == "chebyshev") {
    return RefractiveProfile::chebyshev(get_field<std::vector<double>>(j, "coeffs", "profile"),
                                        get_optional<int>(j, "deriv_order", "profile").value_or(2),
                                        tail, m);
  }
  throw InvalidInput("profile kind must be \"named\" or \"chebyshev\", got \"" + kind + "\"");
}

json profile_to_json(const RefractiveProfile& profile) {
  json j;
  if (const auto* n = std::get_if<NamedAnalytic>(&profile.kind())) {
    j = {{"kind", "named"}, {"name", n->name}, {"params", n->params}};
  } else {
    const auto& c = std::get<ChebyshevSeries>(profile.kind());
    j = {{"kind", "chebyshev"}, {"coeffs", c.coeffs}, {"deriv_order", c.deriv_order}};
  }
  j["normalized_tail"] = profile.normalized_tail();
  if (profile.smoothness_m()) j["smoothness_m"] = *profile.smoothness_m();
  return j;
}

RefractiveProfile load_profile(const std::string& ref) {
  for (const auto& name : RefractiveProfile::registered_names()) {
    if (ref == name) return RefractiveProfile::named(ref);
  }
  if (!std::filesystem::exists(ref)) {
    throw InvalidInput("'" + ref + "' is neither a registered profile nor a file");
  }
  return profile_from_json(read_json_file(ref));
}

UniquenessScenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("scenario JSON must be an object");
  if (!j.contains("q") || !j.contains("q_tilde")) {
    throw InvalidInput("scenario needs \"q\" and \"q_tilde\"");
  }
  Potential q = potential_from_json(j.at("q"));
  Potential qt = potential_from_json(j.at("q_tilde"));
  const double x0 = get_optional<double>(j, "agree_from", "scenario").value_or(0.5 * (q.a + 1.0));
  return UniquenessScenario::make(std::move(q), std::move(qt), x0,
                                  get_optional<double>(j, "b", "scenario").value_or(0.0),
                                  get_optional<double>(j, "alpha", "scenario").value_or(0.0));
}

UniquenessScenario load_scenario(const std::string& path) {
  return scenario_from_json(read_json_file(path));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw InvalidInput("empty list");
  return out;
}

Rect parse_rect(const std::string& text) {
  std::vector<double> v;
  try {
    v = parse_list(text);
  } catch (const InvalidInput& e) {
    throw InvalidInput("--rect expects x0,x1,y0,y1: " + std::string(e.what()));
  }
  if (v.size() != 4) throw InvalidInput("--rect expects four numbers x0,x1,y0,y1");
  return {v[0], v[1], v[2], v[3]};
}

void write_zeros_csv(std::ostream& out, const std::vector<SpectralZero>& zeros) {
  out << "re_k,im_k,multiplicity,class,residual\n";
  for (const auto& z : zeros) {
    out << format_double(z.k.real()) << ',' << format_double(z.k.imag()) << ',' << z.multiplicity
        << ',' << to_string(z.cls) << ',' << format_double(z.residual) << '\n';
  }
}

json zeros_to_json(const Rect& rect, const std::vector<SpectralZero>& zeros) {
  json list = json::array();
  int count = 0;
  for (const auto& z : zeros) {
    list.push_back({{"re", z.k.real()}, {"im", z.k.imag()}, {"mult", z.multiplicity},
                    {"class", to_string(z.cls)}});
    count += z.multiplicity;
  }
  return {{"rect", {rect.x0, rect.x1, rect.y0, rect.y1}}, {"zeros", list}, {"count", count}};
}

void write_quadrant_plot(std::ostream& out, const std::vector<SpectralZero>& zeros) {
  out << "re,im\n";
  for (const auto& z : zeros) {
    std::vector<cplx> copies = {z.k, std::conj(z.k), -z.k, -std::conj(z.k)};
    std::vector<cplx> seen;
    for (cplx c : copies) {
      // Zeros on an axis have only two distinct copies.
      bool dup = false;
      for (cplx s : seen) dup = dup || s == c;
      if (dup) continue;
      seen.push_back(c);
      out << format_double(c.real() + 0.0) << ',' << format_double(c.imag() + 0.0) << '\n';
    }
  }
}

SpectrumFile read_spectrum(const std::string& path) {
  SpectrumFile out;
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".json") {
    const json j = read_json_file(path);
    if (!j.is_object() || !j.contains("zeros") || !j.at("zeros").is_array()) {
      throw InvalidInput(path + ": spectrum JSON needs a \"zeros\" array");
    }
    for (const auto& z : j.at("zeros")) {
      SpectralZero s;
      s.k = {get_field<double>(z, "re", "zero"), get_field<double>(z, "im", "zero")};
      s.multiplicity = get_field<int>(z, "mult", "zero");
      const auto cls = get_field<std::string>(z, "class", "zero");
      if (cls != "real" && cls != "nonreal") {
        throw InvalidInput("zero class must be real or nonreal");
      }
      s.cls = cls == "real" ? ZeroClass::real : ZeroClass::nonreal;
      out.zeros.push_back(s);
    }
    if (j.contains("regime")) {
      const auto r = get_field<std::string>(j, "regime", "spectrum");
      for (Regime g : {Regime::a_gt_1, Regime::a_lt_1, Regime::a_eq_1}) {
        if (r == to_string(g)) out.regime = g;
      }
      if (!out.regime) throw InvalidInput(path + ": unknown regime '" + r + "'");
    }
    return out;
  }

  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("re_k,im_k,multiplicity,class", 0) != 0) {
    throw InvalidInput(path + ": expected header re_k,im_k,multiplicity,class,residual");
  }
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) {
      throw InvalidInput(path + ": row " + std::to_string(row) + " has too few columns");
    }
    SpectralZero s;
    s.k = {parse_number(cells[0]), parse_number(cells[1])};
    s.multiplicity = static_cast<int>(parse_number(cells[2]));
    if (cells[3] != "real" && cells[3] != "nonreal") {
      throw InvalidInput(path + ": row " + std::to_string(row) + " has unknown class");
    }
    s.cls = cells[3] == "real" ? ZeroClass::real : ZeroClass::nonreal;
    if (cells.size() > 4) s.residual = parse_number(cells[4]);
    out.zeros.push_back(s);
  }
  return out;
}

void write_match_csv(std::ostream& out, const MatchReport& report) {
  out << "n,branch,re_pred,im_pred,re_comp,im_comp,abs_residual\n";
  for (const auto& p : report.all_pairs()) {
    out << p.n << ',' << to_string(p.branch) << ',' << format_double(p.predicted.real()) << ','
        << format_double(p.predicted.imag()) << ',' << format_double(p.computed.real()) << ','
        << format_double(p.computed.imag()) << ',' << format_double(p.residual) << '\n';
  }
}

}  // namespace tev
