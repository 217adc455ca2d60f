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

#ifndef DOCINSTRUCT_PROMPT_H_
#define DOCINSTRUCT_PROMPT_H_

#include <string>
#include <string_view>

#include "docinstruct/types.h"

namespace docinstruct {

inline constexpr std::string_view kImageToken = "<image>";
inline constexpr std::string_view kHumanMarker = "Human:";
inline constexpr std::string_view kAiMarker = " AI:";

// <image>Human:{question} AI:{answer}
// The image token is dropped for records without an image. Nothing follows
// the AI marker except the answer itself.
std::string render_prompt(const InstructionRecord& record);
std::string render_prompt(std::string_view question, std::string_view answer,
                          bool has_image);

struct PromptParts {
  std::string question;
  std::string answer;
  bool has_image = false;

  bool operator==(const PromptParts&) const = default;
};

// Inverse of render_prompt. Throws Error(kMalformedPrompt) when the string
// does not start with a Human marker or the AI separator is missing or
// appears more than once.
PromptParts parse_prompt(std::string_view rendered);

// True when `text` could not be placed in a prompt without breaking the
// render/parse bijection.
bool contains_prompt_separator(std::string_view text);

}  // namespace docinstruct

#endif  // DOCINSTRUCT_PROMPT_H_
