#include "xychain/spec_io.hpp"

#include <fstream>

#include "xychain/errors.hpp"

namespace xychain {

namespace {

std::vector<double> number_array(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("missing key '") + key + "'");
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ValidationError(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

int integer_field(const nlohmann::json& doc, const char* key, int fallback, bool required) {
  if (!doc.contains(key)) {
    if (required) throw ValidationError(std::string("missing key '") + key + "'");
    return fallback;
  }
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

PeriodicChainSpec spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("chain spec must be a JSON object");
  PeriodicChainSpec spec;
  const std::string form_text = doc.value("form", std::string("kn_minus_1"));
  const auto form = parse_residue_form(form_text);
  if (!form) throw ValidationError("unknown form '" + form_text + "'");
  spec.form = *form;

  const bool periodic = spec.form != ResidueForm::explicit_sites;
  spec.k = integer_field(doc, "k", 0, periodic);
  spec.n = integer_field(doc, "n", 0, periodic);
  spec.omega = number_array(doc, "omega");
  spec.couplings = number_array(doc, "couplings");
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) throw ValidationError("'label' must be a string");
    spec.label = doc.at("label").get<std::string>();
  }
  return spec;
}

nlohmann::json spec_to_json(const PeriodicChainSpec& spec) {
  nlohmann::json doc;
  doc["k"] = spec.k;
  doc["n"] = spec.n;
  doc["form"] = to_string(spec.form);
  doc["omega"] = spec.omega;
  doc["couplings"] = spec.couplings;
  if (spec.label) doc["label"] = *spec.label;
  return doc;
}

PeriodicChainSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spec file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed spec JSON: " + std::string(e.what()));
  }
  return spec_from_json(doc);
}

}  // namespace xychain
