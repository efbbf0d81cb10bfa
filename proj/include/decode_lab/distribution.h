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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace decode_lab {

// Candidate tokens with log-domain scores. Tokens absent from the map have
// probability zero; they are never stored as -inf.
//
// A raw distribution (model logits) holds at least two tokens. A normalized
// distribution holds log-probabilities whose exp-sum is 1 within 1e-9; it may
// hold a single token after plausibility truncation.
class TokenDistribution {
 public:
  using Entries = std::map<std::string, double, std::less<>>;

  // Raw, unnormalized scores. Throws EmptyDistribution (<2 tokens), NonFinite,
  // or InvalidArgument (empty token string).
  static TokenDistribution from_logits(Entries logits);

  // Already-normalized log-probabilities; checks the exp-sum invariant.
  static TokenDistribution from_log_probs(Entries log_probs);

  // Convenience for tests and fixtures: probabilities in (0, 1], converted to
  // log-probabilities. Checks the sum invariant.
  static TokenDistribution from_probs(const std::map<std::string, double, std::less<>>& probs);

  const Entries& entries() const noexcept { return entries_; }
  bool normalized() const noexcept { return normalized_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(std::string_view token) const;

  std::optional<double> log_score(std::string_view token) const;

  // Probability of `token`; 0 when absent. Requires a normalized distribution.
  double prob(std::string_view token) const;

  bool operator==(const TokenDistribution&) const = default;

 private:
  TokenDistribution(Entries entries, bool normalized)
      : entries_(std::move(entries)), normalized_(normalized) {}

  friend TokenDistribution normalize(const TokenDistribution& d);
  friend TokenDistribution restrict_to(const TokenDistribution& d,
                                       const std::vector<std::string>& tokens);

  Entries entries_;
  bool normalized_ = false;
};

struct ApcParams {
  double beta = 0.5;

  // Throws InvalidArgument unless 0 < beta <= 1.
  void validate() const;
};

struct SelectionOutcome {
  std::string token;
  double prob_mass = 0.0;
};

// Log-sum-exp with max subtraction; argmax and pairwise differences are kept.
TokenDistribution normalize(const TokenDistribution& d);

// Renormalizes `d` over the listed tokens (those present in `d`). Throws
// MismatchedCandidates when none of them are present.
TokenDistribution restrict_to(const TokenDistribution& d, const std::vector<std::string>& tokens);

// Tokens with p >= beta * max p, ascending token order. The argmax always
// survives. Normalizes first when `d` is raw.
std::vector<std::string> apc_survivors(const TokenDistribution& d, const ApcParams& params);

TokenDistribution apply_apc(const TokenDistribution& d, const ApcParams& params);

// Highest probability; ties go to the lexicographically smallest token.
SelectionOutcome select_greedy(const TokenDistribution& d);

// One uniform draw u from Xoshiro256(seed), then inverse CDF over tokens
// ordered by descending probability (ties: ascending token).
SelectionOutcome select_sample(const TokenDistribution& d, std::uint64_t seed);

// Tokens in the order walked by select_sample's inverse CDF.
std::vector<std::string> sampling_order(const TokenDistribution& d);

}  // namespace decode_lab
