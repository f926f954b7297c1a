#pragma once

#include <json.hpp>

#include <string>

#include "tmx/radial_profile.hpp"

namespace tmx {

inline const char* extension_name(Extension e) {
  return e == Extension::Constant ? "constant" : "zero";
}

inline Extension extension_from_name(const std::string& s) {
  if (s == "constant") return Extension::Constant;
  if (s == "zero") return Extension::Zero;
  throw Error(ErrorCode::InvalidArgument, "unknown extension '" + s + "'");
}

inline nlohmann::json profile_to_json(const RadialProfile& p) {
  return nlohmann::json{{"knots", p.knots},
                        {"values", p.values},
                        {"left", extension_name(p.left)},
                        {"right", extension_name(p.right)}};
}

inline RadialProfile profile_from_json(const nlohmann::json& j) {
  for (const auto& [key, _] : j.items()) {
    if (key != "knots" && key != "values" && key != "left" && key != "right")
      throw Error(ErrorCode::InvalidArgument, "unknown profile key '" + key + "'");
  }
  return RadialProfile::create(j.at("knots").get<std::vector<double>>(),
                               j.at("values").get<std::vector<double>>(),
                               extension_from_name(j.at("left").get<std::string>()),
                               extension_from_name(j.at("right").get<std::string>()));
}

}  // namespace tmx
