#pragma once

// Profile and scenario files, and the CSV/JSON formats of the command-line tool.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tev/asymptotics.hpp"
#include "tev/inverse.hpp"
#include "tev/zeros.hpp"

namespace tev {

// {"kind":"named","name":..,"params":[..]} or
// {"kind":"chebyshev","coeffs":[..],"deriv_order":N}, both with optional
// "normalized_tail" and "smoothness_m".
RefractiveProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const RefractiveProfile& profile);

// A registered name, or the path of a profile JSON file.
RefractiveProfile load_profile(const std::string& ref);

// {"q": ref, "q_tilde": ref | {"base": ref, "bump": {"center","half_width","height"}},
//  "agree_from": x0, "b": .., "alpha": ..}. Profile refs as in load_profile;
// agree_from defaults to (a+1)/2.
UniquenessScenario scenario_from_json(const nlohmann::json& j);
UniquenessScenario load_scenario(const std::string& path);

nlohmann::json read_json_file(const std::string& path);

Rect parse_rect(const std::string& text);
std::vector<double> parse_list(const std::string& text);

void write_zeros_csv(std::ostream& out, const std::vector<SpectralZero>& zeros);
nlohmann::json zeros_to_json(const Rect& rect, const std::vector<SpectralZero>& zeros);
// All four symmetric copies of each zero: re, im.
void write_quadrant_plot(std::ostream& out, const std::vector<SpectralZero>& zeros);

struct SpectrumFile {
  std::vector<SpectralZero> zeros;
  std::optional<Regime> regime;  // present in JSON written by this library
};

// CSV (re_k, im_k, multiplicity, class, residual) or JSON by extension.
SpectrumFile read_spectrum(const std::string& path);

void write_match_csv(std::ostream& out, const MatchReport& report);

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

}  // namespace tev
