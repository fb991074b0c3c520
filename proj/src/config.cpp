#include "delgame/config.hpp"

#include <json.hpp>

namespace delgame {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known)
      fail(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + where);
  }
}

double number_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key))
    fail(ErrorCode::InvalidConfig, std::string("missing key '") + key + "' in " + where);
  if (!obj.at(key).is_number())
    fail(ErrorCode::InvalidConfig, std::string("key '") + key + "' must be a number");
  return obj.at(key).get<double>();
}

DeltaLaw delta_from_json(const json& obj) {
  if (!obj.is_object())
    fail(ErrorCode::InvalidConfig, "'delta_law' must be an object");
  if (!obj.contains("type") || !obj.at("type").is_string())
    fail(ErrorCode::InvalidConfig, "'delta_law.type' must be a string");
  const std::string type = obj.at("type").get<std::string>();
  if (type == "exponential") {
    reject_unknown_keys(obj, {"type", "rate"}, "delta_law");
    return DeltaLaw::exponential(number_at(obj, "rate", "delta_law"));
  }
  if (type == "deterministic") {
    reject_unknown_keys(obj, {"type", "d"}, "delta_law");
    return DeltaLaw::deterministic(number_at(obj, "d", "delta_law"));
  }
  if (type == "erlang") {
    reject_unknown_keys(obj, {"type", "shape", "rate"}, "delta_law");
    if (!obj.contains("shape") || !obj.at("shape").is_number_integer())
      fail(ErrorCode::InvalidConfig, "'delta_law.shape' must be an integer");
    return DeltaLaw::erlang(obj.at("shape").get<int>(),
                            number_at(obj, "rate", "delta_law"));
  }
  fail(ErrorCode::InvalidConfig, "unknown delta_law type '" + type + "'");
}

}  // namespace

GameParams params_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    fail(ErrorCode::InvalidConfig, "config root must be an object");
  reject_unknown_keys(doc, {"lambda", "mu", "delta_law", "M", "N"}, "config");
  if (!doc.contains("delta_law"))
    fail(ErrorCode::InvalidConfig, "missing key 'delta_law' in config");

  RawParams raw;
  raw.lambda = number_at(doc, "lambda", "config");
  raw.mu = number_at(doc, "mu", "config");
  raw.delta = delta_from_json(doc.at("delta_law"));
  raw.threshold_a = number_at(doc, "M", "config");
  raw.threshold_b = number_at(doc, "N", "config");
  return validate_params(raw);
}

std::string params_to_json_text(const GameParams& p) {
  json doc;
  doc["lambda"] = p.lambda;
  doc["mu"] = p.mu;
  json law;
  switch (p.delta.kind) {
    case DeltaKind::Exponential:
      law["type"] = "exponential";
      law["rate"] = p.delta.rate;
      break;
    case DeltaKind::Deterministic:
      law["type"] = "deterministic";
      law["d"] = p.delta.spacing;
      break;
    case DeltaKind::Erlang:
      law["type"] = "erlang";
      law["shape"] = p.delta.shape;
      law["rate"] = p.delta.rate;
      break;
  }
  doc["delta_law"] = law;
  doc["M"] = p.threshold_a;
  doc["N"] = p.threshold_b;
  return doc.dump();
}

}  // namespace delgame
