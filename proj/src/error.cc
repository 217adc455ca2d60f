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

#include "docinstruct/error.h"

#include <sstream>

namespace docinstruct {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedPrompt: return "MalformedPrompt";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMissingGroup: return "MissingGroup";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kUnresolvedRecordId: return "UnresolvedRecordId";
    case ErrorCode::kEmptyGoldSet: return "EmptyGoldSet";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kUnknownRecordId: return "UnknownRecordId";
    case ErrorCode::kMissingMetricBinding: return "MissingMetricBinding";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kMissingInstruction: return "MissingInstruction";
    case ErrorCode::kUnknownSlotId: return "UnknownSlotId";
    case ErrorCode::kUnknownModel: return "UnknownModel";
    case ErrorCode::kUnknownItem: return "UnknownItem";
    case ErrorCode::kUnknownRater: return "UnknownRater";
    case ErrorCode::kInvalidGrade: return "InvalidGrade";
    case ErrorCode::kUnknownSlot: return "UnknownSlot";
    case ErrorCode::kPersistence: return "PersistenceError";
  }
  return "Unknown";
}

namespace {

std::string format_schema_message(const std::string& source, std::size_t line,
                                  const std::string& field,
                                  const std::string& what) {
  std::ostringstream out;
  out << source << ":" << line << ": ";
  if (!field.empty()) out << "field '" << field << "': ";
  out << what;
  return out.str();
}

}  // namespace

SchemaError::SchemaError(std::string source, std::size_t line,
                         std::string field, const std::string& what)
    : Error(ErrorCode::kSchema,
            format_schema_message(source, line, field, what)),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

}  // namespace docinstruct
