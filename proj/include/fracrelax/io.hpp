#pragma once

// JSON conversions and atomic file output.

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "fracrelax/errors.hpp"
#include "fracrelax/fitting.hpp"
#include "fracrelax/gridops.hpp"
#include "fracrelax/power_sum.hpp"
#include "fracrelax/relax.hpp"
#include "fracrelax/specparams.hpp"
#include "fracrelax/volterra.hpp"

namespace fracrelax {

using Json = nlohmann::ordered_json;

inline Json to_json(const DerivativeSpec& s) {
  return Json{{"n", s.n()}, {"alpha", s.alpha()}, {"gamma", s.gamma()}};
}

/// {"n": int, "alpha": float, "gamma": [float]}; "n" is optional but must
/// match the gamma length when present.
inline DerivativeSpec spec_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ValidationError("spec JSON must be an object");
    const double alpha = j.at("alpha").get<double>();
    const auto gamma = j.at("gamma").get<std::vector<double>>();
    if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(gamma.size())) {
      throw ValidationError("spec JSON: n does not match the length of gamma");
    }
    return DerivativeSpec(alpha, gamma);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("spec JSON: ") + e.what());
  }
}

inline Json to_json(const PowerSum& f) {
  Json arr = Json::array();
  for (const auto& t : f.terms()) arr.push_back({{"c", t.coeff}, {"mu", t.exponent}});
  return arr;
}

inline PowerSum power_sum_from_json(const Json& j) {
  try {
    std::vector<PowerTerm> terms;
    for (const auto& t : j) terms.push_back({t.at("c").get<double>(), t.at("mu").get<double>()});
    return PowerSum(std::move(terms));
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("power sum JSON: ") + e.what());
  }
}

inline Json to_json(const ValidationReport& r) {
  return Json{{"valid", r.valid},
              {"truly_nth_level", r.truly_nth_level},
              {"cm_admissible", r.cm_admissible},
              {"s", r.s},
              {"sigma", r.sigma},
              {"messages", r.messages}};
}

inline Json to_json(const SpecClass& c) {
  return Json{{"label", label(c)},
              {"kind", std::string(to_string(c.kind))},
              {"reduced", c.reduced},
              {"effective", to_json(c.effective)},
              {"surviving", c.surviving},
              {"notes", c.notes}};
}

inline Json to_json(const RelaxationSolution& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms) {
    terms.push_back({{"y", t.y}, {"sigma", t.sigma}, {"beta", t.beta}});
  }
  return Json{{"alpha", s.alpha}, {"lambda", s.lambda}, {"terms", terms}};
}

inline Json to_json(const AsymptoticForm& a) {
  Json terms = Json::array();
  for (const auto& t : a.terms) terms.push_back({{"d", t.coeff}, {"exponent", t.exponent}});
  return terms;
}

inline Json to_json(const CMReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"order", x.order}, {"x", x.x}, {"value", x.value}});
  }
  return Json{{"admissible_by_theorem", r.admissible_by_theorem},
              {"numeric_orders_checked", r.numeric_orders_checked},
              {"violations", v},
              {"reasons", r.reasons}};
}

inline Json to_json(const FitResult& r, int n) {
  Json params = Json::object();
  const auto names = fit_parameter_names(n);
  for (std::size_t i = 0; i < names.size() && i < r.parameters.size(); ++i) {
    params[names[i]] = r.parameters[i];
  }
  return Json{{"parameters", params},     {"rss", r.rss},
              {"iterations", r.iterations}, {"evaluations", r.evaluations},
              {"converged", r.converged},   {"spec_label", r.spec_label},
              {"cm_verdict", to_json(r.cm)}};
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ValidationError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ValidationError("cannot move output into place at '" + path + "'");
  }
}

/// Plain x,y CSV at 17 significant digits.
inline std::string xy_csv(const std::vector<double>& x, const std::vector<double>& y) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y\n";
  for (std::size_t i = 0; i < x.size(); ++i) os << x[i] << "," << y[i] << "\n";
  return os.str();
}

/// Reads an x,y CSV (header required, '#' lines ignored).
inline void read_xy_csv(const std::string& text, std::vector<double>& x,
                        std::vector<double>& y) {
  std::istringstream is(text);
  std::string line;
  bool header = false;
  int row = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "x,y") throw ValidationError("CSV: expected header 'x,y'");
      header = true;
      continue;
    }
    ++row;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument(line);
      x.push_back(std::stod(line.substr(0, comma)));
      y.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ValidationError("CSV: malformed row " + std::to_string(row) + ": " + line);
    }
  }
  if (!header) throw ValidationError("CSV: missing header 'x,y'");
}

}  // namespace fracrelax
