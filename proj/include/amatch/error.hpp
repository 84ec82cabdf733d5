#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace amatch {

enum class ErrorCode {
  invalid_carrier,
  carrier_mismatch,
  not_enumerable,
  invalid_argument,
  malformed_map,
  not_a_matching,
  not_invertible_in_place,
  invalid_pair,
  budget_exceeded,
  invalid_restriction,
  construction_unavailable,
  invalid_order,
  invalid_window,
  invalid_modulus,
  division_by_zero,
  unsupported_field,
  invalid_basis,
  invalid_tower,
  degree_overflow,
  malformed_certificate,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_carrier: return "invalid-carrier";
    case ErrorCode::carrier_mismatch: return "carrier-mismatch";
    case ErrorCode::not_enumerable: return "not-enumerable";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::malformed_map: return "malformed-map";
    case ErrorCode::not_a_matching: return "not-a-matching";
    case ErrorCode::not_invertible_in_place: return "not-invertible-in-place";
    case ErrorCode::invalid_pair: return "invalid-pair";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::invalid_restriction: return "invalid-restriction";
    case ErrorCode::construction_unavailable: return "construction-unavailable";
    case ErrorCode::invalid_order: return "invalid-order";
    case ErrorCode::invalid_window: return "invalid-window";
    case ErrorCode::invalid_modulus: return "invalid-modulus";
    case ErrorCode::division_by_zero: return "division-by-zero";
    case ErrorCode::unsupported_field: return "unsupported-field";
    case ErrorCode::invalid_basis: return "invalid-basis";
    case ErrorCode::invalid_tower: return "invalid-tower";
    case ErrorCode::degree_overflow: return "degree-overflow";
    case ErrorCode::malformed_certificate: return "malformed-certificate";
  }
  return "unknown-error";
}

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Outcome of a budgeted decision procedure.
enum class Decision { yes, no, unknown };

/// Outcome of a budgeted search.
enum class SearchStatus { found, absent, unknown };

constexpr std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::absent: return "absent";
    case SearchStatus::unknown: return "unknown";
  }
  return "unknown";
}

/// Node-count limit shared by the backtracking searches. Exhaustion never
/// produces a wrong answer, only an unknown one.
class Budget {
 public:
  static constexpr unsigned long long unlimited = ~0ULL;

  explicit Budget(unsigned long long nodes = unlimited) : remaining_(nodes) {}

  /// Consumes one node; returns false once the limit is reached.
  bool spend() noexcept {
    if (remaining_ == 0) {
      exhausted_ = true;
      return false;
    }
    if (remaining_ != unlimited) --remaining_;
    ++spent_;
    return true;
  }

  bool exhausted() const noexcept { return exhausted_; }
  unsigned long long spent() const noexcept { return spent_; }

 private:
  unsigned long long remaining_;
  unsigned long long spent_ = 0;
  bool exhausted_ = false;
};

}  // namespace amatch
