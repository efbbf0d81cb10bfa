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

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#if DECODE_LAB_HAVE_MP
#include <boost/multiprecision/cpp_dec_float.hpp>
#endif

#include "decode_lab/distribution.h"
#include "decode_lab/error.h"
#include "decode_lab/rng.h"
#include "test_util.h"

using namespace decode_lab;
using decode_lab::testing::binary_logits;

namespace {

// The worked example: yes 8.8%, no 91.2%.
TokenDistribution fig_record() {
  return binary_logits(std::log(0.088), std::log(0.912));
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

// Random distribution over `k` tokens t0..t{k-1} with logits in [-scale, scale].
TokenDistribution random_logits(Xoshiro256& rng, int k, double scale) {
  TokenDistribution::Entries e;
  for (int i = 0; i < k; ++i) e.emplace("t" + std::to_string(i), scale * (2 * rng.uniform01() - 1));
  return TokenDistribution::from_logits(std::move(e));
}

double prob_sum(const TokenDistribution& d) {
  double s = 0;
  for (const auto& [t, lp] : d.entries()) s += std::exp(lp);
  return s;
}

}  // namespace

TEST_CASE("rng matches reference vectors") {
  CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(mix64(1) == 0x910A2DEC89025CC1ULL);
  Xoshiro256 a(0);
  CHECK(a.next() == 0x99EC5F36CB75F2B4ULL);
  CHECK(a.next() == 0xBF6E1F784956452AULL);
  CHECK(a.next() == 0x1A5F849D4933E6E0ULL);
  Xoshiro256 b(42);
  CHECK(b.next() == 0x15780B2E0C2EC716ULL);
  CHECK(b.next() == 0x6104D9866D113A7EULL);
  CHECK(b.next() == 0xAE17533239E499A1ULL);
  CHECK(fnv1a64("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a64("a") == 0xAF63DC4C8601EC8CULL);
  CHECK(fnv1a64("syn-000000") == 0x4EB3568DE471EB50ULL);
  CHECK(derive_seed(7, 3) == 0xE880A903BCFF6547ULL);
}

TEST_CASE("uniform and normal draws look right") {
  Xoshiro256 rng(123);
  double sum = 0, sum_sq = 0, nsum = 0, nsum_sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    REQUIRE(std::isfinite(z));
    nsum += z;
    nsum_sq += z * z;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(sum_sq / n == doctest::Approx(1.0 / 3).epsilon(0.005));
  CHECK(std::abs(nsum / n) < 0.01);
  CHECK(nsum_sq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("construction rejects bad input") {
  CHECK(code_of([] { TokenDistribution::from_logits({{"yes", 0.0}}); }) ==
        ErrorCode::kEmptyDistribution);
  CHECK(code_of([] { TokenDistribution::from_logits({}); }) == ErrorCode::kEmptyDistribution);
  CHECK(code_of([] { TokenDistribution::from_logits({{"yes", NAN}, {"no", 0.0}}); }) ==
        ErrorCode::kNonFinite);
  CHECK(code_of([] { TokenDistribution::from_logits({{"yes", INFINITY}, {"no", 0.0}}); }) ==
        ErrorCode::kNonFinite);
  CHECK(code_of([] { TokenDistribution::from_logits({{"yes", -INFINITY}, {"no", 0.0}}); }) ==
        ErrorCode::kNonFinite);
  CHECK(code_of([] { TokenDistribution::from_logits({{"", 0.0}, {"no", 0.0}}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { TokenDistribution::from_log_probs({{"a", std::log(0.5)}, {"b", std::log(0.4)}}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("normalize symmetric pair") {
  const auto n = normalize(binary_logits(0.0, 0.0));
  CHECK(n.normalized());
  CHECK(*n.log_score("yes") == doctest::Approx(std::log(0.5)));
  CHECK(*n.log_score("no") == doctest::Approx(std::log(0.5)));
}

TEST_CASE("normalize worked example probabilities") {
  // Logits shifted by an arbitrary constant: only differences matter.
  const auto d = binary_logits(std::log(0.088) + 3.7, std::log(0.912) + 3.7);
  const auto n = normalize(d);
  CHECK(n.prob("yes") == doctest::Approx(0.088).epsilon(1e-12));
  CHECK(n.prob("no") == doctest::Approx(0.912).epsilon(1e-12));
}

#if DECODE_LAB_HAVE_MP
TEST_CASE("normalize agrees with a 50-digit softmax") {
  using boost::multiprecision::cpp_dec_float_50;
  const std::vector<std::map<std::string, double, std::less<>>> cases = {
      {{"a", 1.0}, {"b", 2.0}, {"c", 3.0}},
      {{"a", -700.0}, {"b", 699.5}, {"c", 700.0}},
      {{"x", 1e-3}, {"y", -1e-3}},
      {{"p", 12.25}, {"q", -3.5}, {"r", 0.0}, {"s", 12.0}},
  };
  for (const auto& logits : cases) {
    const auto n = normalize(TokenDistribution::from_logits(logits));
    cpp_dec_float_50 z = 0;
    for (const auto& [t, v] : logits) z += exp(cpp_dec_float_50(v));
    for (const auto& [t, v] : logits) {
      const cpp_dec_float_50 exact = exp(cpp_dec_float_50(v)) / z;
      const double expected = exact.convert_to<double>();
      const double got = n.prob(t);
      if (expected > 1e-300) {
        CHECK(got == doctest::Approx(expected).epsilon(1e-14));
      }
      const double exact_log = log(exact).convert_to<double>();
      CHECK(*n.log_score(t) == doctest::Approx(exact_log).epsilon(1e-14));
    }
  }
}
#endif

TEST_CASE("normalize preserves argmax and differences, survives large logits") {
  Xoshiro256 rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = random_logits(rng, 2 + trial % 9, trial % 2 ? 700.0 : 5.0);
    const auto n = normalize(d);
    CHECK(std::abs(prob_sum(n) - 1.0) <= 1e-9);
    CHECK(select_greedy(n).token == select_greedy(d).token);
    const auto& raw = d.entries();
    for (auto i = raw.begin(); i != raw.end(); ++i) {
      for (auto j = std::next(i); j != raw.end(); ++j) {
        const double want = i->second - j->second;
        const double got = *n.log_score(i->first) - *n.log_score(j->first);
        // absolute 1e-12 relative to the logit scale
        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(i->second) + std::abs(j->second)));
      }
    }
  }
}

TEST_CASE("normalize is idempotent and deterministic") {
  const auto d = TokenDistribution::from_logits({{"a", 0.3}, {"b", -1.2}, {"c", 2.0}});
  CHECK(normalize(d) == normalize(d));
  const auto n = normalize(d);
  const auto nn = normalize(n);
  for (const auto& [t, lp] : n.entries()) CHECK(*nn.log_score(t) == doctest::Approx(lp).epsilon(1e-15));
}

TEST_CASE("apc on the worked example keeps only no") {
  const auto out = apply_apc(normalize(fig_record()), ApcParams{0.5});
  CHECK(out.size() == 1);
  CHECK(out.prob("no") == 1.0);
  CHECK(apc_survivors(fig_record(), ApcParams{0.5}) == std::vector<std::string>{"no"});
}

TEST_CASE("apc with tiny beta keeps everything") {
  Xoshiro256 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = normalize(random_logits(rng, 2 + trial % 6, 5.0));
    const auto out = apply_apc(n, ApcParams{1e-12});
    REQUIRE(out.size() == n.size());
    for (const auto& [t, lp] : n.entries()) CHECK(out.prob(t) == doctest::Approx(n.prob(t)).epsilon(1e-12));
  }
}

TEST_CASE("apc three-token example matches filter-and-renormalize") {
  const auto d = TokenDistribution::from_probs({{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  const auto out = apply_apc(d, ApcParams{0.5});
  CHECK(out.size() == 2);
  CHECK(out.prob("a") == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(out.prob("b") == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(out.prob("c") == 0.0);

  // brute-force oracle over random distributions
  Xoshiro256 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = normalize(random_logits(rng, 2 + trial % 8, 3.0));
    const double beta = 0.05 + 0.95 * rng.uniform01();
    double max_p = 0;
    for (const auto& [t, lp] : n.entries()) max_p = std::max(max_p, std::exp(lp));
    std::map<std::string, double> kept;
    double z = 0;
    for (const auto& [t, lp] : n.entries()) {
      if (std::exp(lp) >= beta * max_p) {
        kept[t] = std::exp(lp);
        z += std::exp(lp);
      }
    }
    const auto got = apply_apc(n, ApcParams{beta});
    REQUIRE(got.size() == kept.size());
    for (const auto& [t, p] : kept) CHECK(got.prob(t) == doctest::Approx(p / z).epsilon(1e-12));
  }
}

TEST_CASE("apc threshold is inclusive") {
  // Equal probabilities sit exactly on the threshold at beta = 1.
  const auto d = TokenDistribution::from_logits({{"a", 0.7}, {"b", 0.7}, {"c", -2.0}});
  CHECK(apc_survivors(d, ApcParams{1.0}) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("apc rejects beta outside (0, 1]") {
  const auto d = normalize(fig_record());
  CHECK(code_of([&] { apply_apc(d, ApcParams{0.0}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { apply_apc(d, ApcParams{1.5}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { apply_apc(d, ApcParams{-0.1}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { apply_apc(d, ApcParams{NAN}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("apc survivors shrink as beta grows and always hold the argmax") {
  Xoshiro256 rng(2024);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto n = normalize(random_logits(rng, 2 + trial % 10, 4.0));
    double b1 = 1e-6 + rng.uniform01() * (1 - 1e-6);
    double b2 = 1e-6 + rng.uniform01() * (1 - 1e-6);
    if (b1 > b2) std::swap(b1, b2);
    const auto s1 = apc_survivors(n, ApcParams{b1});
    const auto s2 = apc_survivors(n, ApcParams{b2});
    CHECK(std::includes(s1.begin(), s1.end(), s2.begin(), s2.end()));
    const std::string top = select_greedy(n).token;
    CHECK(select_greedy(apply_apc(n, ApcParams{b1})).token == top);
    CHECK(select_greedy(apply_apc(n, ApcParams{b2})).token == top);
    CHECK(std::abs(prob_sum(apply_apc(n, ApcParams{b2})) - 1.0) <= 1e-9);
  }
}

TEST_CASE("beta one keeps the argmax set only") {
  Xoshiro256 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = normalize(random_logits(rng, 2 + trial % 5, 3.0));
    const auto out = apply_apc(n, ApcParams{1.0});
    CHECK(out.size() == 1);
    const std::string top = select_greedy(n).token;
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(select_sample(out, derive_seed(trial, s)).token == top);
  }
  // exact tie survives as a pair
  const auto tied = apply_apc(normalize(binary_logits(0.4, 0.4)), ApcParams{1.0});
  CHECK(tied.size() == 2);
}

TEST_CASE("greedy picks the argmax, ties go to the smaller token") {
  CHECK(select_greedy(normalize(fig_record())).token == "no");
  CHECK(select_greedy(normalize(fig_record())).prob_mass == doctest::Approx(0.912));
  CHECK(select_greedy(normalize(binary_logits(0.0, 0.0))).token == "no");
  CHECK(select_greedy(TokenDistribution::from_probs({{"a", 0.2}, {"b", 0.7}, {"c", 0.1}})).token == "b");
  CHECK(select_greedy(TokenDistribution::from_logits({{"z", 1.0}, {"m", 1.0}, {"q", 0.5}})).token == "m");
}

TEST_CASE("sampling degenerate, deterministic, and ordered by descending probability") {
  const auto single = TokenDistribution::from_log_probs({{"no", 0.0}});
  for (std::uint64_t s = 0; s < 1000; ++s) CHECK(select_sample(single, s * 7919).token == "no");
  CHECK(select_sample(single, 3).prob_mass == 1.0);

  const auto d = TokenDistribution::from_probs({{"a", 0.2}, {"b", 0.5}, {"c", 0.3}});
  CHECK(sampling_order(d) == std::vector<std::string>{"b", "c", "a"});
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto x = select_sample(d, s);
    const auto y = select_sample(d, s);
    CHECK(x.token == y.token);
    CHECK(x.prob_mass == y.prob_mass);
    // inverse CDF oracle with the same uniform
    const double u = Xoshiro256(s).uniform01();
    const std::string want = u < 0.5 ? "b" : (u < 0.8 ? "c" : "a");
    CHECK(x.token == want);
  }
}

TEST_CASE("sampling frequencies on the worked example") {
  const auto d = normalize(fig_record());
  const int n = 100000;
  int yes = 0;
  for (int i = 0; i < n; ++i) yes += select_sample(d, derive_seed(0, i)).token == "yes";
  CHECK(std::abs(static_cast<double>(yes) / n - 0.088) <= 0.003);
}

TEST_CASE("sampling frequencies on a uniform triple") {
  const auto d = normalize(TokenDistribution::from_logits({{"a", 0.0}, {"b", 0.0}, {"c", 0.0}}));
  const int n = 90000;
  std::map<std::string, int> counts;
  for (int i = 0; i < n; ++i) ++counts[select_sample(d, derive_seed(17, i)).token];
  for (const char* t : {"a", "b", "c"}) {
    CHECK(std::abs(static_cast<double>(counts[t]) / n - 1.0 / 3) <= 0.006);
  }
}

TEST_CASE("sampling total variation on ten-token distributions") {
  Xoshiro256 gen(5);
  for (int trial = 0; trial < 3; ++trial) {
    const auto d = normalize(random_logits(gen, 10, 2.0));
    const int n = 100000;
    std::map<std::string, int> counts;
    for (int i = 0; i < n; ++i) ++counts[select_sample(d, derive_seed(1000 + trial, i)).token];
    double tv = 0;
    for (const auto& [t, lp] : d.entries()) tv += std::abs(static_cast<double>(counts[t]) / n - std::exp(lp));
    CHECK(tv / 2 < 0.01);
  }
}

TEST_CASE("binary degradation: below the ratio, apc sampling is greedy on every seed") {
  Xoshiro256 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = normalize(random_logits(rng, 2, 6.0));
    const double p_top = select_greedy(n).prob_mass;
    const double ratio = (1 - p_top) / p_top;
    const double beta = 1e-3 + rng.uniform01() * (1 - 1e-3);
    if (!(ratio < beta)) continue;
    ++checked;
    const auto truncated = apply_apc(n, ApcParams{beta});
    for (std::uint64_t s = 0; s < 50; ++s) {
      CHECK(select_sample(truncated, derive_seed(trial, s)).token == select_greedy(n).token);
    }
  }
  CHECK(checked > 500);
}
