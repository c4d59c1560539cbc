#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace openq {

enum class ErrorCode {
  invalid_argument,
  non_positive_mass,
  non_positive_hbar,
  negative_rate,
  positivity_violation,
  zero_friction,
  domain_escape,
  stability_violation,
  boundary_leak,
  grid_mismatch,
  zero_decoherence,
  zero_norm,
  fit_failure,
  invalid_label,
  shape_mismatch,
  ill_posed,
  config_parse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Thrown when the strict Lindblad positivity bound m^2(nu^2 + 4 xi^2) <= 2 d0 d2 fails.
class PositivityViolation : public Error {
 public:
  PositivityViolation(double lhs, double rhs);

  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  double lhs_;
  double rhs_;
};

}  // namespace openq
