// Copyright 2026 The Facetalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "facetalk/error.h"

namespace facetalk {
namespace {

std::string JoinFindings(const std::vector<std::string>& findings) {
  std::string out = "validation failed:";
  for (const auto& f : findings) {
    out += "\n  - ";
    out += f;
  }
  return out;
}

}  // namespace

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kInapplicable: return "inapplicable_operator";
    case ErrorCode::kCycle: return "preference_cycle";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kGeneration: return "generation_error";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

ValidationError::ValidationError(std::vector<std::string> findings)
    : Error(ErrorCode::kValidation, JoinFindings(findings)),
      findings_(std::move(findings)) {}

}  // namespace facetalk
