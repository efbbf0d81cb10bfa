/* Copyright 2026 The decode-lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace decode_lab {

enum class Answer { kYes, kNo, kOther };

std::string_view to_string(Answer answer);

// Accepts "yes", "no", and "other".
Answer parse_answer(std::string_view text);

// Maps a decoded token to an answer: the yes/no tokens, anything else → other.
Answer answer_for_token(std::string_view token, std::string_view yes_token = "yes",
                        std::string_view no_token = "no");

struct PredictionRecord {
  std::string id;
  Answer label = Answer::kNo;
  Answer predicted = Answer::kNo;
  std::string token;
  double p_yes = 0.0;
  std::size_t survivor_count = 0;
  std::string pipeline_name;

  bool correct() const { return predicted == label; }

  bool operator==(const PredictionRecord&) const = default;
};

}  // namespace decode_lab
