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

#include "decode_lab/distribution.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "decode_lab/error.h"
#include "decode_lab/rng.h"

namespace decode_lab {

namespace {

constexpr double kSumTolerance = 1e-9;

void check_entries(const TokenDistribution::Entries& entries, std::size_t min_size) {
  if (entries.size() < min_size) {
    throw Error(ErrorCode::kEmptyDistribution,
                "distribution needs at least " + std::to_string(min_size) + " tokens, got " +
                    std::to_string(entries.size()));
  }
  for (const auto& [token, score] : entries) {
    if (token.empty()) throw Error(ErrorCode::kInvalidArgument, "empty token string");
    if (!std::isfinite(score)) {
      throw Error(ErrorCode::kNonFinite, "token '" + token + "' has non-finite score");
    }
  }
}

double exp_sum(const TokenDistribution::Entries& entries) {
  double sum = 0.0;
  for (const auto& [token, lp] : entries) sum += std::exp(lp);
  return sum;
}

double max_score(const TokenDistribution::Entries& entries) {
  double m = -INFINITY;
  for (const auto& [token, score] : entries) m = std::max(m, score);
  return m;
}

TokenDistribution::Entries normalized_entries(const TokenDistribution::Entries& entries) {
  const double m = max_score(entries);
  double acc = 0.0;
  for (const auto& [token, score] : entries) acc += std::exp(score - m);
  const double lse = m + std::log(acc);
  TokenDistribution::Entries out;
  for (const auto& [token, score] : entries) out.emplace_hint(out.end(), token, score - lse);
  return out;
}

const TokenDistribution& as_normalized(const TokenDistribution& d,
                                       std::optional<TokenDistribution>& storage) {
  if (d.normalized()) return d;
  storage = normalize(d);
  return *storage;
}

}  // namespace

TokenDistribution TokenDistribution::from_logits(Entries logits) {
  check_entries(logits, 2);
  return TokenDistribution(std::move(logits), false);
}

TokenDistribution TokenDistribution::from_log_probs(Entries log_probs) {
  check_entries(log_probs, 1);
  const double sum = exp_sum(log_probs);
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "log-probabilities do not sum to one (sum " + std::to_string(sum) + ")");
  }
  return TokenDistribution(std::move(log_probs), true);
}

TokenDistribution TokenDistribution::from_probs(
    const std::map<std::string, double, std::less<>>& probs) {
  Entries lp;
  for (const auto& [token, p] : probs) {
    if (!(p > 0.0) || p > 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "probability of '" + token + "' outside (0, 1]");
    }
    lp.emplace(token, std::log(p));
  }
  return from_log_probs(std::move(lp));
}

bool TokenDistribution::contains(std::string_view token) const {
  return entries_.find(token) != entries_.end();
}

std::optional<double> TokenDistribution::log_score(std::string_view token) const {
  auto it = entries_.find(token);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double TokenDistribution::prob(std::string_view token) const {
  if (!normalized_) {
    throw Error(ErrorCode::kInvalidArgument, "prob() requires a normalized distribution");
  }
  auto it = entries_.find(token);
  return it == entries_.end() ? 0.0 : std::exp(it->second);
}

void ApcParams::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "beta must lie in (0, 1], got " + std::to_string(beta));
  }
}

TokenDistribution normalize(const TokenDistribution& d) {
  check_entries(d.entries(), 2);
  return TokenDistribution(normalized_entries(d.entries()), true);
}

TokenDistribution restrict_to(const TokenDistribution& d, const std::vector<std::string>& tokens) {
  TokenDistribution::Entries kept;
  for (const auto& token : tokens) {
    if (auto it = d.entries().find(token); it != d.entries().end()) kept.emplace(*it);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kMismatchedCandidates, "mask removes every candidate token");
  }
  return TokenDistribution(normalized_entries(kept), true);
}

std::vector<std::string> apc_survivors(const TokenDistribution& d, const ApcParams& params) {
  params.validate();
  std::optional<TokenDistribution> storage;
  const TokenDistribution& n = as_normalized(d, storage);
  const double threshold = params.beta * std::exp(max_score(n.entries()));
  std::vector<std::string> survivors;
  for (const auto& [token, lp] : n.entries()) {
    if (std::exp(lp) >= threshold) survivors.push_back(token);
  }
  return survivors;
}

TokenDistribution apply_apc(const TokenDistribution& d, const ApcParams& params) {
  std::optional<TokenDistribution> storage;
  const TokenDistribution& n = as_normalized(d, storage);
  return restrict_to(n, apc_survivors(n, params));
}

SelectionOutcome select_greedy(const TokenDistribution& d) {
  std::optional<TokenDistribution> storage;
  const TokenDistribution& n = as_normalized(d, storage);
  // Map iteration is ascending, so strict '>' keeps the smallest tied token.
  auto best = n.entries().begin();
  for (auto it = n.entries().begin(); it != n.entries().end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return {best->first, std::exp(best->second)};
}

std::vector<std::string> sampling_order(const TokenDistribution& d) {
  std::vector<std::pair<std::string, double>> items(d.entries().begin(), d.entries().end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> order;
  order.reserve(items.size());
  for (auto& item : items) order.push_back(std::move(item.first));
  return order;
}

SelectionOutcome select_sample(const TokenDistribution& d, std::uint64_t seed) {
  std::optional<TokenDistribution> storage;
  const TokenDistribution& n = as_normalized(d, storage);
  Xoshiro256 rng(seed);
  const double u = rng.uniform01();
  double cumulative = 0.0;
  const auto order = sampling_order(n);
  for (const auto& token : order) {
    const double p = n.prob(token);
    cumulative += p;
    if (u < cumulative) return {token, p};
  }
  // Rounding left the total slightly below u; the tail token absorbs it.
  return {order.back(), n.prob(order.back())};
}

}  // namespace decode_lab
