// Copyright 2026 The fog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fog {

enum class ErrorCode {
  // Parsing and validation of input text.
  Parse,
  DuplicateSymbol,
  BadArity,
  UnknownSymbol,
  ArityMismatch,
  UnbalancedParens,
  ElementOutsideDomain,
  PartialFunction,
  MissingInterpretation,
  EmptyDomain,
  // Semantic preconditions.
  FreeVariable,
  UnassignedVariable,
  NonAtomic,
  NotClosed,
  EmptySubset,
  NonGameNormal,
  NotPrenex,
  ArenaTooLarge,
  UnknownNode,
  // Strategies and closures.
  StrategyNotWinning,
  UnverifiedStrategy,
  EmptyResult,
  TheoryNotSatisfied,
  CertificateFailure,
  // Game sessions.
  IllegalMove,
  NotYourTurn,
  SessionNotFound,
  BadRequest,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorCode::BadArity: return "BadArity";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnbalancedParens: return "UnbalancedParens";
    case ErrorCode::ElementOutsideDomain: return "ElementOutsideDomain";
    case ErrorCode::PartialFunction: return "PartialFunction";
    case ErrorCode::MissingInterpretation: return "MissingInterpretation";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::FreeVariable: return "FreeVariable";
    case ErrorCode::UnassignedVariable: return "UnassignedVariable";
    case ErrorCode::NonAtomic: return "NonAtomic";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::NonGameNormal: return "NonGameNormal";
    case ErrorCode::NotPrenex: return "NotPrenex";
    case ErrorCode::ArenaTooLarge: return "ArenaTooLarge";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::StrategyNotWinning: return "StrategyNotWinning";
    case ErrorCode::UnverifiedStrategy: return "UnverifiedStrategy";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::TheoryNotSatisfied: return "TheoryNotSatisfied";
    case ErrorCode::CertificateFailure: return "CertificateFailure";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::NotYourTurn: return "NotYourTurn";
    case ErrorCode::SessionNotFound: return "SessionNotFound";
    case ErrorCode::BadRequest: return "BadRequest";
  }
  return "Unknown";
}

// Every failure the library reports. `line` is 1-based for errors raised
// while reading line-oriented input and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " + message),
        code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

  // True for errors caused by malformed or ill-formed input text.
  bool is_input_error() const noexcept {
    switch (code_) {
      case ErrorCode::Parse:
      case ErrorCode::DuplicateSymbol:
      case ErrorCode::BadArity:
      case ErrorCode::UnknownSymbol:
      case ErrorCode::ArityMismatch:
      case ErrorCode::UnbalancedParens:
      case ErrorCode::ElementOutsideDomain:
      case ErrorCode::PartialFunction:
      case ErrorCode::MissingInterpretation:
      case ErrorCode::EmptyDomain:
      case ErrorCode::FreeVariable:
      case ErrorCode::NonGameNormal:
      case ErrorCode::BadRequest:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace fog
