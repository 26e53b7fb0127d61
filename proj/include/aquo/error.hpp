// Copyright 2026 The aquo Authors
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

#ifndef AQUO_ERROR_HPP
#define AQUO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace aquo {

enum class ErrorKind {
  // linear algebra
  NotSquare,
  NotHermitian,
  NoConvergence,
  NegativeEigenvalue,
  Singular,
  NotIsometry,
  NotDensityMatrix,
  NonFinite,
  // channels
  DimensionMismatch,
  IncompleteChannel,
  NotUnitary,
  StepTooLarge,
  InvalidChannel,
  // dilation
  NotContraction,
  SupportMismatch,
  NotProjector,
  // trees
  RankOverflow,
  BadParameter,
  InvalidPlan,
  // trajectories
  DegenerateState,
  InvalidProtocol,
  TruncationTooSmall,
  FitFailed,
  // tomography
  UnsupportedDim,
  NotPSD,
  SingularDesign,
  BasisMismatch,
  OutOfRange,
  SingularFrame,
  InvalidState,
  // io / cli
  ParseError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure in the library is reported as an aquo::Error carrying a kind
/// the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace aquo

#endif  // AQUO_ERROR_HPP
