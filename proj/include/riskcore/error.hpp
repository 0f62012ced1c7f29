// Copyright 2026 The riskcore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISKCORE_ERROR_HPP_
#define RISKCORE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace riskcore {

enum class ErrorCode {
  kNonFiniteInput,
  kEmptyInput,
  kAlphaOutOfRange,
  kKOutOfRange,
  kDomainError,
  kNotInSimplex,
  kNotMonotone,
  kLengthMismatch,
  kEmptySet,
  kInvalidSpectrum,
  kInvalidDistribution,
  kQuadratureFailure,
  kNotMonotoneRecovered,
  kNotNormalised,
  kOracleFailure,
  kDegenerateVariance,
  kNonFiniteVariance,
  kDegenerateFit,
  kNotApplicable,
  kInvalidArgument,
  kParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kAlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::kKOutOfRange: return "KOutOfRange";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kNotInSimplex: return "NotInSimplex";
    case ErrorCode::kNotMonotone: return "NotMonotone";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kInvalidSpectrum: return "InvalidSpectrum";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kQuadratureFailure: return "QuadratureFailure";
    case ErrorCode::kNotMonotoneRecovered: return "NotMonotoneRecovered";
    case ErrorCode::kNotNormalised: return "NotNormalised";
    case ErrorCode::kOracleFailure: return "OracleFailure";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kNonFiniteVariance: return "NonFiniteVariance";
    case ErrorCode::kDegenerateFit: return "DegenerateFit";
    case ErrorCode::kNotApplicable: return "NotApplicable";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace riskcore

#endif  // RISKCORE_ERROR_HPP_
