#pragma once

#include <stdexcept>
#include <string>

namespace dkit {

/// Error categories used across the library. Every throwing code path names
/// one of these so callers (and the CLI exit-code mapping) can dispatch on it.
enum class errc {
  zero_division,
  not_invertible,
  not_separable,
  ambient_mismatch,
  field_mismatch,
  not_automorphism,
  unknown_name,
  dimodule_mismatch,
  missing_k_structure,
  inner_not_contained,
  r_structure_invalid,
  not_perfect,
  missing_root_of_unity,
  not_order_m,
  window_too_small,
  cocycle_invalid,
  not_a_form,
  not_r_linear,
  precondition_failed,
  parse_error,
  validation_failed,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::zero_division: return "ZeroDivision";
    case errc::not_invertible: return "NotInvertible";
    case errc::not_separable: return "NotSeparable";
    case errc::ambient_mismatch: return "AmbientMismatch";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::not_automorphism: return "NotAutomorphism";
    case errc::unknown_name: return "UnknownName";
    case errc::dimodule_mismatch: return "DimoduleMismatch";
    case errc::missing_k_structure: return "MissingKStructure";
    case errc::inner_not_contained: return "InnerNotContained";
    case errc::r_structure_invalid: return "RStructureInvalid";
    case errc::not_perfect: return "NotPerfect";
    case errc::missing_root_of_unity: return "MissingRootOfUnity";
    case errc::not_order_m: return "NotOrderM";
    case errc::window_too_small: return "WindowTooSmall";
    case errc::cocycle_invalid: return "CocycleInvalid";
    case errc::not_a_form: return "NotAForm";
    case errc::not_r_linear: return "NotRLinear";
    case errc::precondition_failed: return "PreconditionFailed";
    case errc::parse_error: return "ParseError";
    case errc::validation_failed: return "ValidationFailed";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace dkit
