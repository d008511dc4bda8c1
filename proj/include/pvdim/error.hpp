#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvdim {

enum class Errc {
  not_monic,
  not_pisot,
  indeterminate,
  reducible,
  precision_exhausted,
  precision_cap_exceeded,
  state_budget_exceeded,
  cap_exceeded,
  budget_exceeded,
  domain_error,
  degenerate_input,
  empty_ball,
  unknown_preset,
  io_error,
  invalid_argument,
};

constexpr std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::not_monic: return "NotMonic";
    case Errc::not_pisot: return "NotPisot";
    case Errc::indeterminate: return "Indeterminate";
    case Errc::reducible: return "Reducible";
    case Errc::precision_exhausted: return "PrecisionExhausted";
    case Errc::precision_cap_exceeded: return "PrecisionCapExceeded";
    case Errc::state_budget_exceeded: return "StateBudgetExceeded";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::domain_error: return "DomainError";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::empty_ball: return "EmptyBall";
    case Errc::unknown_preset: return "UnknownPreset";
    case Errc::io_error: return "IoError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pvdim
