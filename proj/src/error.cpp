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

#include "aquo/error.hpp"

namespace aquo {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IncompleteChannel: return "IncompleteChannel";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::InvalidChannel: return "InvalidChannel";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::NotProjector: return "NotProjector";
    case ErrorKind::RankOverflow: return "RankOverflow";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::InvalidPlan: return "InvalidPlan";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::InvalidProtocol: return "InvalidProtocol";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::FitFailed: return "FitFailed";
    case ErrorKind::UnsupportedDim: return "UnsupportedDim";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SingularFrame: return "SingularFrame";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace aquo
