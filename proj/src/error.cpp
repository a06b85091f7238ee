/*
 * Copyright (C) 2026 The randpivot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "randpivot/error.hpp"

namespace randpivot {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::DegenerateWeights: return "DegenerateWeights";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::MissingMu: return "MissingMu";
    case ErrorCode::MissingF: return "MissingF";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::ContinuityViolated: return "ContinuityViolated";
    case ErrorCode::BadMoments: return "BadMoments";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DatasetTooSmall: return "DatasetTooSmall";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::BadParams: return "BadParams";
  }
  return "Unknown";
}

}  // namespace randpivot
