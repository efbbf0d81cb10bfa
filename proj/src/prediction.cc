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

#include "decode_lab/prediction.h"

#include <string>

#include "decode_lab/error.h"

namespace decode_lab {

std::string_view to_string(Answer answer) {
  switch (answer) {
    case Answer::kYes: return "yes";
    case Answer::kNo: return "no";
    case Answer::kOther: return "other";
  }
  return "other";
}

Answer parse_answer(std::string_view text) {
  if (text == "yes") return Answer::kYes;
  if (text == "no") return Answer::kNo;
  if (text == "other") return Answer::kOther;
  throw Error(ErrorCode::kInvalidArgument, "unknown answer '" + std::string(text) + "'");
}

Answer answer_for_token(std::string_view token, std::string_view yes_token,
                        std::string_view no_token) {
  if (token == yes_token) return Answer::kYes;
  if (token == no_token) return Answer::kNo;
  return Answer::kOther;
}

}  // namespace decode_lab
