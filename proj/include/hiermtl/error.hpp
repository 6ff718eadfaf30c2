#pragma once

#include <stdexcept>
#include <string>

namespace hiermtl {

enum class ErrorCode {
  DimensionMismatch,
  ShapeMismatch,
  TooFewSamples,
  ParseError,
  UnknownTaskKind,
  InvalidConfig,
  NonFiniteValue,
  NegativeLambda,
  NegativeTau,
  BacktrackOverflow,
  MultiplierBelowOne,
  NonPositiveKappa,
  SingularSystem,
  ConstantTruth,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hiermtl
