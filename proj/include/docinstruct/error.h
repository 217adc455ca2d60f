// Copyright 2026 The DocInstruct Authors. All Rights Reserved.
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

#ifndef DOCINSTRUCT_ERROR_H_
#define DOCINSTRUCT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace docinstruct {

enum class ErrorCode {
  kInvalidArgument,
  kMalformedPrompt,
  kSchema,
  kIo,
  kMissingGroup,
  kEmptyGroup,
  kUnresolvedRecordId,
  kEmptyGoldSet,
  kIdMismatch,
  kEmptyReference,
  kUnknownRecordId,
  kMissingMetricBinding,
  kInsufficientSamples,
  kMissingInstruction,
  kUnknownSlotId,
  kUnknownModel,
  kUnknownItem,
  kUnknownRater,
  kInvalidGrade,
  kUnknownSlot,
  kPersistence,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above. Schema
// errors additionally remember where in the input they were found.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string source, std::size_t line, std::string field,
              const std::string& what);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string field_;
};

}  // namespace docinstruct

#endif  // DOCINSTRUCT_ERROR_H_
