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

#ifndef FACETALK_ERROR_H_
#define FACETALK_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace facetalk {

enum class ErrorCode {
  kParse,
  kValidation,
  kNotFound,
  kInapplicable,
  kCycle,
  kConflict,
  kInvalidArgument,
  kGeneration,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Base exception for every recoverable failure in the library. The code maps
// onto the HTTP status used by the service layer.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Syntax error with a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, size_t position)
      : Error(ErrorCode::kParse,
              message + " at position " + std::to_string(position)),
        position_(position) {}

  size_t position() const { return position_; }

 private:
  size_t position_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> findings);

  const std::vector<std::string>& findings() const { return findings_; }

 private:
  std::vector<std::string> findings_;
};

}  // namespace facetalk

#endif  // FACETALK_ERROR_H_
