#include <fstream>
#include <set>

#include "flatscan/cli/cli.hpp"
#include "flatscan/errors.hpp"
#include "flatscan/symexpr/expr.hpp"

namespace flatscan::cli {

namespace {

std::vector<std::string> strings(const Json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) throw ValidationError(std::string("model is missing '") + key + "'");
    return {};
  }
  const Json& v = j.at(key);
  if (!v.is_array()) throw ValidationError(std::string("'") + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ValidationError(std::string("'") + key + "' must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::array<std::string, 2> pair_of(const Json& j, const char* key) {
  auto v = strings(j, key, true);
  if (v.size() != 2) throw ValidationError(std::string("'") + key + "' must hold exactly two entries");
  return {v[0], v[1]};
}

std::vector<std::string> components(const diffgeo::VectorField& v) {
  std::vector<std::string> out;
  for (const auto& c : v.components()) out.push_back(symexpr::format(c));
  return out;
}

}  // namespace

ModelFile model_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("model must be a JSON object");
  ModelFile m;
  m.name = j.value("name", std::string("model"));
  m.states = strings(j, "states", true);
  m.inputs = pair_of(j, "inputs");
  m.parameters = strings(j, "parameters", false);
  m.drift = strings(j, "drift", true);
  m.g1 = strings(j, "g1", true);
  m.g2 = strings(j, "g2", true);
  if (j.contains("flat_output")) m.flat_output = pair_of(j, "flat_output");
  m.constraints = strings(j, "constraints", false);
  const std::size_t n = m.states.size();
  if (m.drift.size() != n || m.g1.size() != n || m.g2.size() != n)
    throw ValidationError("drift, g1 and g2 need one component per state");
  std::set<std::string> seen;
  for (const auto& s : m.states) {
    if (!seen.insert(s).second) throw ValidationError("duplicate state '" + s + "'");
  }
  return m;
}

Json model_to_json(const ModelFile& m) {
  Json j;
  j["name"] = m.name;
  j["states"] = m.states;
  j["inputs"] = m.inputs;
  j["parameters"] = m.parameters;
  j["drift"] = m.drift;
  j["g1"] = m.g1;
  j["g2"] = m.g2;
  if (m.flat_output) j["flat_output"] = *m.flat_output;
  if (!m.constraints.empty()) j["constraints"] = m.constraints;
  return j;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read model '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

void save_model(const ModelFile& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << model_to_json(m).dump(2) << "\n";
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

system::ControlAffineSystem to_system(const ModelFile& m) {
  symexpr::Chart chart(m.states, m.parameters);
  std::vector<symexpr::RatFunc> constraints;
  for (const auto& c : m.constraints) constraints.push_back(symexpr::parse_ratfunc(c, chart));
  auto sys = system::ControlAffineSystem(m.name, chart, m.inputs, diffgeo::VectorField::parse(chart, m.drift),
                                         diffgeo::VectorField::parse(chart, m.g1),
                                         diffgeo::VectorField::parse(chart, m.g2), constraints);
  if (m.flat_output) {
    for (const auto& e : *m.flat_output) symexpr::parse_ratfunc(e, chart);
  }
  return sys;
}

ModelFile from_system(const system::ControlAffineSystem& sys,
                      const std::optional<std::array<std::string, 2>>& flat_output) {
  ModelFile m;
  m.name = sys.name();
  m.states = sys.chart().coordinates();
  m.inputs = sys.inputs();
  m.parameters = sys.chart().parameters();
  m.drift = components(sys.f());
  m.g1 = components(sys.g1());
  m.g2 = components(sys.g2());
  m.flat_output = flat_output;
  for (const auto& c : sys.constraints()) m.constraints.push_back(symexpr::format(c));
  return m;
}

}  // namespace flatscan::cli
