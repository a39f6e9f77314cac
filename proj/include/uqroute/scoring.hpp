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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uqroute/exec.hpp"
#include "uqroute/trace.hpp"

namespace uqroute {

class ProbeModel;

enum class Method {
  kAvgTokenProb,
  kPerplexity,
  kPTrue,
  kJaccardDegree,
  kVerbalization1s,
  kVerbalization2s,
  kTrainedProbe,
  kOodProbe,
};

inline constexpr Method kAllMethods[] = {
    Method::kAvgTokenProb,    Method::kPerplexity,      Method::kPTrue,
    Method::kJaccardDegree,   Method::kVerbalization1s, Method::kVerbalization2s,
    Method::kTrainedProbe,    Method::kOodProbe,
};

enum class ModelAccess { kWhiteBox, kBlackBox };

// Taxonomy row for one method: what it looks at and whether it needs a
// trained component.
struct MethodInfo {
  Method method;
  std::string_view name;
  std::string_view family;
  ModelAccess access;
  bool requires_training;
  std::string_view required_fields;
};

const MethodInfo& method_info(Method m);
std::string_view to_string(Method m);
std::optional<Method> method_from_string(std::string_view s);
inline bool is_probe_method(Method m) {
  return m == Method::kTrainedProbe || m == Method::kOodProbe;
}

// Higher value = more confident. Always finite and inside [0, 1].
struct ConfidenceScore {
  Method method = Method::kPerplexity;
  double value = 0.0;
  std::string trace_id;

  bool operator==(const ConfidenceScore&) const = default;
};

// Log-probs below this are clamped before exponentiation.
inline constexpr double kLogprobFloor = -700.0;

ConfidenceScore score_avg_token_prob(const InferenceTrace& trace);
ConfidenceScore score_perplexity(const InferenceTrace& trace);
ConfidenceScore score_p_true(const InferenceTrace& trace);
ConfidenceScore score_jaccard_degree(const InferenceTrace& trace);

// Normalised p("True") from the two follow-up token log-probs.
double p_true_from_logprobs(double true_logprob, double false_logprob);

// Degree-matrix consistency over m resamples. `uncertainty` is
// trace(mI - D) / m^2; `confidence` is 1 - uncertainty.
struct JaccardDegree {
  double uncertainty = 0.0;
  double confidence = 1.0;
};
JaccardDegree jaccard_degree(std::span<const std::string> samples);

// Lowercased whitespace tokens with surrounding punctuation stripped.
std::vector<std::string> jaccard_tokens(std::string_view text);

enum class VerbalVariant { kOneStep, kTwoStep };

// Returns nullopt when the text has no usable number (the query is then
// discarded, never scored as 0).
std::optional<double> parse_verbal_confidence(std::string_view text);
ConfidenceScore parse_verbalized(const InferenceTrace& trace, VerbalVariant variant);

// Dispatches to the per-method scorer. Probe methods need `probe`.
ConfidenceScore score_trace(const InferenceTrace& trace, Method method,
                            const ProbeModel* probe = nullptr);

struct DiscardedTrace {
  std::string id;
  std::string reason;
};

struct BatchScores {
  std::vector<ConfidenceScore> scores;  // input order, discarded removed
  std::vector<DiscardedTrace> discarded;
};

// Records failing with NonCompliant or MissingField are discarded; other
// errors propagate. Output is identical for both execution modes.
BatchScores score_batch(const TraceSet& traces, Method method,
                        const ProbeModel* probe = nullptr,
                        Exec exec = Exec::kParallel);

}  // namespace uqroute
