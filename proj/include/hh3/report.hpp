#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "json.hpp"

namespace hh3 {

/// Structured outcome of a verification step.
///
/// status values:
///   "proved-zero"      - symbolic normal form is exactly zero
///   "residual"         - nonzero canonical normal form returned for inspection
///   "failed"           - an identity that must hold symbolically did not
///   "numerically-zero" - all sampled evaluations below tolerance
///   "nonzero-witness"  - a sampled or exact nonzero value certifies non-vanishing
///   "ok"               - a structural equality check succeeded
struct VerificationReport {
  std::string check;
  std::string mode;
  std::string status;
  std::optional<std::string> value;
  std::optional<std::string> residual_form;
  std::optional<std::string> message;
  nlohmann::json witnesses;  // null unless populated
  double runtime_ms = 0.0;

  nlohmann::json to_json() const;
  static VerificationReport from_json(const nlohmann::json& j);
};

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace hh3
