#include "hh3/report.hpp"

namespace hh3 {

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["mode"] = mode;
  j["status"] = status;
  if (value) j["value"] = *value;
  if (residual_form) j["residual_form"] = *residual_form;
  if (message) j["message"] = *message;
  if (!witnesses.is_null()) j["witnesses"] = witnesses;
  j["runtime_ms"] = runtime_ms;
  return j;
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.check = j.at("check").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.status = j.at("status").get<std::string>();
  if (j.contains("value")) r.value = j.at("value").get<std::string>();
  if (j.contains("residual_form")) r.residual_form = j.at("residual_form").get<std::string>();
  if (j.contains("message")) r.message = j.at("message").get<std::string>();
  if (j.contains("witnesses")) r.witnesses = j.at("witnesses");
  r.runtime_ms = j.at("runtime_ms").get<double>();
  return r;
}

}  // namespace hh3
