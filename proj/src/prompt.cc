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

#include "docinstruct/prompt.h"

#include "docinstruct/error.h"

namespace docinstruct {

std::string render_prompt(std::string_view question, std::string_view answer,
                          bool has_image) {
  std::string out;
  out.reserve(kImageToken.size() + kHumanMarker.size() + question.size() +
              kAiMarker.size() + answer.size());
  if (has_image) out += kImageToken;
  out += kHumanMarker;
  out += question;
  out += kAiMarker;
  out += answer;
  return out;
}

std::string render_prompt(const InstructionRecord& record) {
  return render_prompt(record.question, record.answer, record.has_image());
}

PromptParts parse_prompt(std::string_view rendered) {
  PromptParts parts;
  std::string_view rest = rendered;
  if (rest.starts_with(kImageToken)) {
    parts.has_image = true;
    rest.remove_prefix(kImageToken.size());
  }
  if (!rest.starts_with(kHumanMarker))
    throw Error(ErrorCode::kMalformedPrompt, "prompt lacks a leading 'Human:'");
  rest.remove_prefix(kHumanMarker.size());

  // The separator cannot overlap itself, so any second occurrence lies
  // wholly inside the question or the answer.
  std::size_t sep = rest.find(kAiMarker);
  if (sep == std::string_view::npos)
    throw Error(ErrorCode::kMalformedPrompt, "prompt lacks the ' AI:' marker");
  if (rest.find(kAiMarker, sep + kAiMarker.size()) != std::string_view::npos)
    throw Error(ErrorCode::kMalformedPrompt,
                "prompt contains more than one ' AI:' marker");

  parts.question = std::string(rest.substr(0, sep));
  parts.answer = std::string(rest.substr(sep + kAiMarker.size()));
  return parts;
}

bool contains_prompt_separator(std::string_view text) {
  return text.find(kAiMarker) != std::string_view::npos;
}

}  // namespace docinstruct
