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
#include <string>

#include "doctest.h"

#include "decode_lab/contrastive.h"
#include "decode_lab/error.h"
#include "decode_lab/rng.h"
#include "test_util.h"

using namespace decode_lab;
using decode_lab::testing::binary_logits;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ContrastParams vcd(double alpha) { return {ContrastMethod::kVcd, alpha, 1.0}; }
ContrastParams sid(double alpha) { return {ContrastMethod::kSid, alpha, 1.0}; }
ContrastParams icd(double lambda) { return {ContrastMethod::kIcd, 1.0, lambda}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("vcd hand example") {
  const auto out = contrastive_combine(binary_logits(0, 0), binary_logits(-2, 0), vcd(1.0));
  CHECK(out.normalized());
  // new logits {yes: 2, no: 0}
  CHECK(out.prob("yes") == doctest::Approx(sigmoid(2.0)).epsilon(1e-14));
  CHECK(out.prob("yes") == doctest::Approx(0.881).epsilon(1e-3));
  const auto raw = combine_logits(binary_logits(0, 0), binary_logits(-2, 0), vcd(1.0));
  CHECK(*raw.log_score("yes") == 2.0);
  CHECK(*raw.log_score("no") == 0.0);
}

TEST_CASE("per-token formulas") {
  const auto o = TokenDistribution::from_logits({{"a", 1.5}, {"b", -0.5}, {"c", 0.25}});
  const auto c = TokenDistribution::from_logits({{"a", 0.5}, {"b", 2.0}, {"c", -1.0}});
  for (double s : {0.0, 0.5, 1.0, 3.0}) {
    const auto v = combine_logits(o, c, vcd(s));
    const auto i = combine_logits(o, c, icd(s));
    const auto si = combine_logits(o, c, sid(s));
    for (const auto& [t, x] : o.entries()) {
      const double y = *c.log_score(t);
      CHECK(*v.log_score(t) == doctest::Approx((1 + s) * x - s * y));
      CHECK(*si.log_score(t) == doctest::Approx((1 + s) * x - s * y));
      CHECK(*i.log_score(t) == doctest::Approx(x - s * y));
    }
  }
}

TEST_CASE("zero strength and self-contrast give softmax(original)") {
  Xoshiro256 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto o = binary_logits(6 * rng.uniform01() - 3, 6 * rng.uniform01() - 3);
    const auto c = binary_logits(6 * rng.uniform01() - 3, 6 * rng.uniform01() - 3);
    const auto base = normalize(o);
    for (const auto& params : {vcd(0.0), sid(0.0), icd(0.0)}) {
      CHECK(contrastive_combine(o, c, params).prob("yes") ==
            doctest::Approx(base.prob("yes")).epsilon(1e-12));
    }
    const double alpha = 5 * rng.uniform01();
    CHECK(contrastive_combine(o, o, vcd(alpha)).prob("yes") ==
          doctest::Approx(base.prob("yes")).epsilon(1e-12));
    CHECK(contrastive_combine(o, o, sid(alpha)).prob("yes") ==
          doctest::Approx(base.prob("yes")).epsilon(1e-12));
  }
}

TEST_CASE("combination uses the shared candidate set") {
  const auto o = TokenDistribution::from_logits({{"yes", 1.0}, {"no", 0.0}, {"maybe", 3.0}});
  const auto c = TokenDistribution::from_logits({{"yes", 0.0}, {"no", 0.5}, {"other", 9.0}});
  const auto out = combine_logits(o, c, vcd(1.0));
  CHECK(out.size() == 2);
  CHECK(out.contains("yes"));
  CHECK(out.contains("no"));
  CHECK(!out.contains("maybe"));
  CHECK(!out.contains("other"));

  const auto disjoint = TokenDistribution::from_logits({{"yes", 0.0}, {"x", 0.5}});
  CHECK(code_of([&] { combine_logits(o, disjoint, vcd(1.0)); }) == ErrorCode::kMismatchedCandidates);
}

TEST_CASE("params validation") {
  CHECK(code_of([] { vcd(-0.1).validate(); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { icd(-1.0).validate(); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { OlmParams{-0.5}.validate(); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { OlmParams{NAN}.validate(); }) == ErrorCode::kInvalidArgument);
  // both strengths must be non-negative whichever method consults them
  CHECK(code_of([] { ContrastParams{ContrastMethod::kIcd, -3.0, 1.0}.validate(); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(parse_contrast_method("vcd") == ContrastMethod::kVcd);
  CHECK(parse_contrast_method("ICD") == ContrastMethod::kIcd);
  CHECK(to_string(ContrastMethod::kSid) == "SID");
  CHECK(code_of([] { parse_contrast_method("xcd"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("logit gap requires both tokens") {
  CHECK(logit_gap(binary_logits(1.25, -0.5)) == 1.75);
  const auto d = TokenDistribution::from_logits({{"yes", 1.0}, {"maybe", 0.0}});
  CHECK(code_of([&] { logit_gap(d); }) == ErrorCode::kMissingToken);
}

TEST_CASE("shift identity for vcd and sid") {
  Xoshiro256 rng(11);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto o = binary_logits(20 * rng.uniform01() - 10, 20 * rng.uniform01() - 10);
    const auto c = binary_logits(20 * rng.uniform01() - 10, 20 * rng.uniform01() - 10);
    const double alpha = 4 * rng.uniform01();
    for (const auto& params : {vcd(alpha), sid(alpha)}) {
      const double delta = logit_gap(combine_logits(o, c, params)) - logit_gap(o);
      CHECK(std::abs(delta - alpha * (logit_gap(o) - logit_gap(c))) <= 1e-9);
      // also after normalization (log-prob gap equals logit gap)
      const double norm_delta = logit_gap(contrastive_combine(o, c, params)) - logit_gap(o);
      CHECK(std::abs(norm_delta - alpha * (logit_gap(o) - logit_gap(c))) <= 1e-9);
    }
  }
}

TEST_CASE("p(yes) rises strictly with alpha when the contrast is more no-biased") {
  Xoshiro256 rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const double go = 4 * rng.uniform01() - 2;
    const double gc = go - 0.05 - 3 * rng.uniform01();
    const auto o = binary_logits(go / 2, -go / 2);
    const auto c = binary_logits(gc / 2, -gc / 2);
    double previous = normalize(o).prob("yes");
    for (double alpha : {0.25, 0.5, 1.0, 1.5, 2.0}) {
      const double p = contrastive_combine(o, c, vcd(alpha)).prob("yes");
      CHECK(p > previous);
      previous = p;
    }
  }
}

TEST_CASE("icd gap identity and monotonicity in lambda") {
  Xoshiro256 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto o = binary_logits(4 * rng.uniform01() - 2, 4 * rng.uniform01() - 2);
    const double gc = -0.1 - 3 * rng.uniform01();
    const auto c = binary_logits(gc / 2, -gc / 2);
    const double lambda = 3 * rng.uniform01();
    CHECK(std::abs(logit_gap(combine_logits(o, c, icd(lambda))) -
                   (logit_gap(o) - lambda * logit_gap(c))) <= 1e-9);
    CHECK(contrastive_combine(o, c, icd(lambda + 0.5)).prob("yes") >
          contrastive_combine(o, c, icd(lambda)).prob("yes"));
  }
}

TEST_CASE("olm examples") {
  const auto close = TokenDistribution::from_probs({{"yes", 0.45}, {"no", 0.55}});
  CHECK(olm_adjust(close, OlmParams{0.2}) == Answer::kYes);
  CHECK(olm_triggers(close, OlmParams{0.2}));
  const auto fig = TokenDistribution::from_probs({{"yes", 0.088}, {"no", 0.912}});
  CHECK(olm_adjust(fig, OlmParams{0.2}) == Answer::kNo);
  CHECK(!olm_triggers(fig, OlmParams{0.2}));
  // tau = 0 never triggers, even on an exact tie
  const auto tie = normalize(binary_logits(0.3, 0.3));
  CHECK(!olm_triggers(tie, OlmParams{0.0}));
  CHECK(olm_adjust(tie, OlmParams{0.0}) == Answer::kNo);
  CHECK(olm_adjust(close, OlmParams{0.0}) == Answer::kNo);
  const auto missing = TokenDistribution::from_logits({{"yes", 0.0}, {"maybe", 0.0}});
  CHECK(code_of([&] { olm_adjust(missing, OlmParams{0.2}); }) == ErrorCode::kMissingToken);
}

TEST_CASE("olm never turns yes into no") {
  Xoshiro256 rng(14);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto d = normalize(binary_logits(6 * rng.uniform01() - 3, 6 * rng.uniform01() - 3));
    const double tau = rng.uniform01();
    const Answer argmax = d.prob("yes") > d.prob("no") ? Answer::kYes : Answer::kNo;
    const Answer adjusted = olm_adjust(d, OlmParams{tau});
    if (argmax == Answer::kYes) CHECK(adjusted == Answer::kYes);
    if (adjusted == Answer::kNo) {
      CHECK(argmax == Answer::kNo);
      CHECK(std::abs(d.prob("yes") - d.prob("no")) >= tau);
    }
  }
}
