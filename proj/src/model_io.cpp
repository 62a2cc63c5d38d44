#include "chiralkit/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chiralkit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ModelError("model file error at '" + where + "': " + what);
}

Poly parse_poly(const json& j, int degree, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of terms");
  Poly p(degree);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const auto& term = j[t];
    std::string here = where + "[" + std::to_string(t) + "]";
    if (!term.is_object() || !term.contains("exps") || !term.contains("coef"))
      fail(here, "term must be {\"exps\":[...],\"coef\":\"...\"}");
    const auto& ex = term["exps"];
    if (!ex.is_array() || ex.size() != kRank) fail(here + ".exps", "expected 5 nonnegative integers");
    Exponents e{};
    for (int i = 0; i < kRank; ++i) {
      if (!ex[static_cast<std::size_t>(i)].is_number_integer()) fail(here + ".exps", "expected integers");
      e[static_cast<std::size_t>(i)] = ex[static_cast<std::size_t>(i)].get<std::int64_t>();
    }
    Rational c;
    try {
      if (term["coef"].is_string())
        c = parse_rational(term["coef"].get<std::string>());
      else if (term["coef"].is_number_integer())
        c = Rational(term["coef"].get<std::int64_t>());
      else
        fail(here + ".coef", "expected a rational string");
    } catch (const std::invalid_argument& e2) {
      fail(here + ".coef", e2.what());
    }
    try {
      p.add_term(e, c);
    } catch (const std::invalid_argument& e2) {
      fail(here, e2.what());
    }
  }
  return p;
}

json poly_to_json(const Poly& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) {
    json term;
    term["exps"] = e;
    term["coef"] = rational_to_string(c);
    out.push_back(std::move(term));
  }
  return out;
}

const char* g_key(const NPoint& n) {
  const auto& env = lattice_env();
  static const char* names[kRank] = {"v0", "v1", "v2", "v3", "v4"};
  for (int i = 0; i < kRank; ++i)
    if (n == env.vertex(i)) return names[i];
  return "degv";
}

GParams parse_g(const json& j) {
  if (!j.is_object()) fail("g", "expected an object with keys v0..v4, degv");
  const auto& env = lattice_env();
  std::map<NPoint, Rational> values;
  auto take = [&](const char* key, const NPoint& pt) {
    if (!j.contains(key)) fail(std::string("g.") + key, "missing");
    const auto& v = j[key];
    try {
      if (v.is_string())
        values.emplace(pt, parse_rational(v.get<std::string>()));
      else if (v.is_number_integer())
        values.emplace(pt, Rational(v.get<std::int64_t>()));
      else
        fail(std::string("g.") + key, "expected a rational string");
    } catch (const std::invalid_argument& e) {
      fail(std::string("g.") + key, e.what());
    }
  };
  take("v0", env.vertex(0));
  take("v1", env.vertex(1));
  take("v2", env.vertex(2));
  take("v3", env.vertex(3));
  take("v4", env.vertex(4));
  take("degv", env.degv());
  return GParams(std::move(values));
}

}  // namespace

Model parse_model(const std::string& json_text, const LoadOptions& opts) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("$", "expected a JSON object");
  if (!j.contains("format") || j["format"] != model_schema_version())
    fail("format", "expected \"" + model_schema_version() + "\"");
  if (!j.contains("presentation") || !j["presentation"].is_string())
    fail("presentation", "expected \"F\", \"witten\" or \"potential\"");
  std::string pres = j["presentation"].get<std::string>();

  Model model;
  if (pres == "F") {
    if (!j.contains("F") || !j["F"].is_array() || j["F"].size() != kRank)
      fail("F", "expected an array of 5 polynomials");
    std::array<Poly, kRank> F{Poly(5), Poly(5), Poly(5), Poly(5), Poly(5)};
    for (int i = 0; i < kRank; ++i)
      F[static_cast<std::size_t>(i)] =
          parse_poly(j["F"][static_cast<std::size_t>(i)], 5, "F[" + std::to_string(i) + "]");
    try {
      model.F = FivePolys::from_terms(std::move(F));
    } catch (const std::invalid_argument& e) {
      fail("F", e.what());
    }
  } else if (pres == "witten") {
    if (!j.contains("G")) fail("G", "missing");
    Poly G = parse_poly(j["G"], 5, "G");
    std::array<Poly, kRank> xG{Poly(5), Poly(5), Poly(5), Poly(5), Poly(5)};
    if (j.contains("xG")) {
      if (!j["xG"].is_array() || j["xG"].size() != kRank) fail("xG", "expected an array of 5 polynomials");
      for (int i = 0; i < kRank; ++i)
        xG[static_cast<std::size_t>(i)] =
            parse_poly(j["xG"][static_cast<std::size_t>(i)], 5, "xG[" + std::to_string(i) + "]");
    } else if (j.contains("G4")) {
      // Alternate raw degree-4 form of Witten's G^i; multiplied by x_i here.
      if (!j["G4"].is_array() || j["G4"].size() != kRank) fail("G4", "expected an array of 5 polynomials");
      for (int i = 0; i < kRank; ++i)
        xG[static_cast<std::size_t>(i)] =
            parse_poly(j["G4"][static_cast<std::size_t>(i)], 4, "G4[" + std::to_string(i) + "]")
                .multiply_by_variable(i);
    } else {
      fail("xG", "witten presentation needs \"xG\" (or raw \"G4\")");
    }
    try {
      model.F = from_witten(G, xG);
    } catch (const std::invalid_argument& e) {
      fail("xG", e.what());
    }
  } else if (pres == "potential") {
    if (!j.contains("f")) fail("f", "missing");
    try {
      model.F = from_potential(parse_poly(j["f"], 5, "f"));
    } catch (const std::invalid_argument& e) {
      fail("f", e.what());
    }
  } else {
    fail("presentation", "unknown value '" + pres + "'");
  }

  if (!j.contains("g")) fail("g", "missing");
  try {
    model.g = parse_g(j["g"]);
  } catch (const std::invalid_argument& e) {
    fail("g", e.what());
  }

  if (opts.enforce_support) {
    if (auto bad = model.F.support_violation()) {
      fail("F[" + std::to_string(bad->first) + "]",
           "monomial not divisible by x_" + std::to_string(bad->first) +
               " (F^i|_{x_i=0}=0 violated)");
    }
  }
  return model;
}

Model load_model(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), opts);
}

void save_model(const Model& model, const std::string& path) {
  json j;
  j["format"] = model_schema_version();
  j["presentation"] = "F";
  json F = json::array();
  for (int i = 0; i < kRank; ++i) F.push_back(poly_to_json(model.F[i]));
  j["F"] = std::move(F);
  json g;
  for (const auto& [n, c] : model.g.values()) g[g_key(n)] = rational_to_string(c);
  j["g"] = std::move(g);
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write model file '" + path + "'");
  out << j.dump(2) << "\n";
}

std::string model_schema_version() { return "chiralkit-model-v1"; }

}  // namespace chiralkit
