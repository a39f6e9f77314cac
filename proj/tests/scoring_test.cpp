/*
 * Copyright 2026 The uqroute Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "uqroute/error.hpp"
#include "uqroute/probe.hpp"
#include "uqroute/random.hpp"
#include "uqroute/scoring.hpp"

using namespace uqroute;
using uqroute::testing::basic_trace;

namespace {

InferenceTrace with_probs(std::vector<double> probs) {
  auto t = basic_trace("t");
  for (double p : probs) t.token_logprobs.push_back(std::log(p));
  return t;
}

InferenceTrace with_samples(std::vector<std::string> samples) {
  auto t = basic_trace("t");
  t.samples = std::move(samples);
  return t;
}

InferenceTrace with_verbal(const std::string& text, const std::string& id = "t") {
  auto t = basic_trace(id);
  t.verbal_confidence_text = text;
  return t;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("method names and taxonomy") {
  for (Method m : kAllMethods) {
    CHECK(method_from_string(to_string(m)) == m);
    CHECK(method_info(m).method == m);
  }
  CHECK(method_from_string("ood-probe") == Method::kOodProbe);
  CHECK_FALSE(method_from_string("entropy").has_value());
  CHECK(method_info(Method::kJaccardDegree).access == ModelAccess::kBlackBox);
  CHECK(method_info(Method::kPTrue).access == ModelAccess::kWhiteBox);
  CHECK(method_info(Method::kOodProbe).requires_training);
  CHECK_FALSE(method_info(Method::kVerbalization2s).requires_training);
}

TEST_CASE("average token probability") {
  CHECK(score_avg_token_prob(with_probs({0.5, 0.25})).value == doctest::Approx(0.375).epsilon(1e-15));
  // (0.9 + 0.9 + 0.1) / 3
  CHECK(score_avg_token_prob(with_probs({0.9, 0.9, 0.1})).value ==
        doctest::Approx(1.9 / 3.0).epsilon(1e-14));

  auto mc = basic_trace("mc");
  mc.answer_kind = AnswerKind::kMultipleChoice;
  mc.chosen_option_logprob = 0.0;
  CHECK(score_avg_token_prob(mc).value == 1.0);

  auto missing = basic_trace("mc");
  missing.answer_kind = AnswerKind::kMultipleChoice;
  missing.token_logprobs = {-0.1};
  CHECK(code_of([&] { score_avg_token_prob(missing); }) == ErrorCode::kMissingField);
  CHECK(code_of([&] { score_avg_token_prob(basic_trace("e")); }) == ErrorCode::kMissingField);
}

TEST_CASE("perplexity confidence is the geometric-mean token probability") {
  CHECK(score_perplexity(with_probs({0.5, 0.5})).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(score_perplexity(with_probs({1.0, 1.0, 1.0})).value == 1.0);
  CHECK(score_perplexity(with_probs({0.8, 0.2})).value == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(code_of([&] { score_perplexity(basic_trace("e")); }) == ErrorCode::kMissingField);
}

TEST_CASE("extreme log-probs are clamped, not underflowed") {
  auto t = basic_trace("x");
  t.token_logprobs = {-1e6, -1e6};
  const double v = score_perplexity(t).value;
  CHECK(v >= 0.0);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(std::exp(kLogprobFloor)));
}

TEST_CASE("p(True) normalisation") {
  auto t = basic_trace("pt");
  t.true_false_logprobs = TrueFalseLogprobs{-0.7, -0.7};
  CHECK(score_p_true(t).value == 0.5);
  t.true_false_logprobs = TrueFalseLogprobs{-0.1, -2.3};
  const double expected = std::exp(-0.1) / (std::exp(-0.1) + std::exp(-2.3));
  CHECK(score_p_true(t).value == doctest::Approx(expected).epsilon(1e-14));
  CHECK(score_p_true(t).value == doctest::Approx(0.9002).epsilon(1e-4));
  t.true_false_logprobs = TrueFalseLogprobs{-1000.0, 0.0};
  const double v = score_p_true(t).value;
  CHECK(std::isfinite(v));
  CHECK(v >= 0.0);
  CHECK(v < 1e-300);
  CHECK(code_of([&] { score_p_true(basic_trace("e")); }) == ErrorCode::kMissingField);
}

TEST_CASE("jaccard degree analytic cases") {
  const auto same = score_jaccard_degree(with_samples({"The answer is 4.", "the answer is 4"}));
  CHECK(same.value == 1.0);

  const std::vector<std::string> disjoint{"alpha beta", "gamma", "delta epsilon"};
  const auto d = jaccard_degree(disjoint);
  CHECK(d.uncertainty == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(d.confidence == 1.0 / 3.0);

  const std::vector<std::string> overlap{"a b", "b c"};
  const auto o = jaccard_degree(overlap);
  CHECK(o.uncertainty == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(o.confidence == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const std::vector<std::string> empty{"", "  ..."};
  CHECK(jaccard_degree(empty).confidence == 1.0);

  CHECK(code_of([&] { score_jaccard_degree(basic_trace("e")); }) == ErrorCode::kMissingField);
  const std::vector<std::string> one{"x"};
  CHECK(code_of([&] { jaccard_degree(one); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("jaccard tokenisation") {
  CHECK(jaccard_tokens("  Hello, WORLD!  (x)  ") ==
        std::vector<std::string>{"hello", "world", "x"});
  CHECK(jaccard_tokens("3.14 e.g.") == std::vector<std::string>{"3.14", "e.g"});
  CHECK(jaccard_tokens("!!! ...").empty());
}

TEST_CASE("verbalised confidence parsing") {
  CHECK(parse_verbal_confidence("Answer: B. Confidence: 85") == doctest::Approx(0.85));
  CHECK(parse_verbal_confidence("confidence: 0.9") == doctest::Approx(0.9));
  CHECK_FALSE(parse_verbal_confidence("I am not sure.").has_value());
  CHECK(parse_verbal_confidence("My CONFIDENCE is 70%") == doctest::Approx(0.7));
  CHECK(parse_verbal_confidence("60") == doctest::Approx(0.6));
  CHECK(parse_verbal_confidence("Confidence: 250") == 1.0);
  CHECK(parse_verbal_confidence("Answer 12. Confidence 1") == 1.0);
  // Two bare numbers and no cue is ambiguous.
  CHECK_FALSE(parse_verbal_confidence("between 10 and 20").has_value());
  // Numbers before the cue are not confidences.
  CHECK_FALSE(parse_verbal_confidence("Answer: 42. Confidence: high").has_value());

  const auto one = parse_verbalized(with_verbal("Confidence: 40"), VerbalVariant::kOneStep);
  CHECK(one.method == Method::kVerbalization1s);
  const auto two = parse_verbalized(with_verbal("Confidence: 40"), VerbalVariant::kTwoStep);
  CHECK(two.method == Method::kVerbalization2s);
  CHECK(one.value == two.value);

  CHECK(code_of([&] { parse_verbalized(with_verbal("nope"), VerbalVariant::kOneStep); }) ==
        ErrorCode::kNonCompliant);
  CHECK(code_of([&] { parse_verbalized(basic_trace("e"), VerbalVariant::kOneStep); }) ==
        ErrorCode::kMissingField);
}

TEST_CASE("score_batch partitions scored and discarded records") {
  TraceSet set;
  set.records = {with_verbal("Confidence: 80", "a"), with_verbal("I am not sure.", "b"),
                 with_verbal("confidence 0.3", "c")};
  const auto batch = score_batch(set, Method::kVerbalization1s);
  REQUIRE(batch.scores.size() == 2);
  CHECK(batch.scores[0].trace_id == "a");
  CHECK(batch.scores[1].trace_id == "c");
  REQUIRE(batch.discarded.size() == 1);
  CHECK(batch.discarded[0].id == "b");

  const auto empty = score_batch(TraceSet{}, Method::kPerplexity);
  CHECK(empty.scores.empty());
  CHECK(empty.discarded.empty());
}

TEST_CASE("score_batch enforces the probe/method pairing") {
  const ProbeModel probe({16, 4, 1});
  const TraceSet set = synth_traces(3, 1, 1.0);
  CHECK(code_of([&] { score_batch(set, Method::kTrainedProbe); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { score_batch(set, Method::kPerplexity, &probe); }) ==
        ErrorCode::kInvalidArgument);
  const auto batch = score_batch(set, Method::kOodProbe, &probe);
  REQUIRE(batch.scores.size() == 3);
  CHECK(batch.scores[0].method == Method::kOodProbe);
  CHECK(batch.scores[0].value == 0.5);
}

TEST_CASE("perplexity batch over synthetic traces recovers the latent ease") {
  const auto set = synth_traces(100, 50, 1.0);
  const auto ease = synth_latent_ease(100, 50);
  const auto batch = score_batch(set, Method::kPerplexity);
  REQUIRE(batch.scores.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(std::abs(batch.scores[i].value - ease[i]) < 1e-9);
  }
}

TEST_CASE("every scorer stays inside [0, 1] on random inputs") {
  Rng rng(2024);
  const ProbeModel probe = ProbeModel::random({16, 8, 1}, 4);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = basic_trace("r" + std::to_string(trial));
    const auto n = 1 + rng.below(20);
    for (std::uint64_t i = 0; i < n; ++i) t.token_logprobs.push_back(-rng.uniform() * 50.0);
    t.true_false_logprobs = TrueFalseLogprobs{-rng.uniform() * 900.0, -rng.uniform() * 900.0};
    std::vector<std::string> samples;
    for (std::uint64_t s = 0, m = 2 + rng.below(6); s < m; ++s) {
      std::string text;
      for (std::uint64_t w = 0, k = rng.below(6); w < k; ++w) {
        text += "w" + std::to_string(rng.below(8)) + " ";
      }
      samples.push_back(text);
    }
    t.samples = samples;
    t.verbal_confidence_text = "Confidence: " + std::to_string(rng.uniform() * 150.0);
    std::vector<double> h(16);
    for (auto& x : h) x = rng.normal() * 10.0;
    t.hidden_state = h;
    for (Method m : kAllMethods) {
      const double v = score_trace(t, m, &probe).value;
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("perplexity is invariant under permutation of the log-probs") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = basic_trace("p");
    for (int i = 0; i < 12; ++i) t.token_logprobs.push_back(-rng.uniform() * 5.0);
    const double before = score_perplexity(t).value;
    rng.shuffle(t.token_logprobs);
    CHECK(score_perplexity(t).value == before);
  }
}

TEST_CASE("jaccard degree: sample-order invariance and strict decrease") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> samples;
    for (int s = 0; s < 5; ++s) {
      std::string text;
      for (int w = 0; w < 4; ++w) text += "t" + std::to_string(rng.below(6)) + " ";
      samples.push_back(text);
    }
    samples[4] = samples[3];  // a duplicate pair
    const double before = jaccard_degree(samples).confidence;
    auto shuffled = samples;
    rng.shuffle(shuffled);
    CHECK(jaccard_degree(shuffled).confidence == before);

    auto replaced = samples;
    replaced[4] = "zz" + std::to_string(trial) + " qq";  // disjoint from everything
    CHECK(jaccard_degree(replaced).confidence < before);
  }
}

TEST_CASE("p(True) of swapped pair sums to one") {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = -rng.uniform() * 40.0;
    const double b = -rng.uniform() * 40.0;
    CHECK(std::abs(p_true_from_logprobs(a, b) + p_true_from_logprobs(b, a) - 1.0) <= 1e-12);
  }
}
