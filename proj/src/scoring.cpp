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

#include "uqroute/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <set>

#include "uqroute/error.hpp"
#include "uqroute/probe.hpp"

namespace uqroute {

namespace {

constexpr MethodInfo kMethodTable[] = {
    {Method::kAvgTokenProb, "avg_token_prob", "token/sequence probabilities",
     ModelAccess::kWhiteBox, false, "token_logprobs | chosen_option_logprob"},
    {Method::kPerplexity, "perplexity", "token/sequence probabilities",
     ModelAccess::kWhiteBox, false, "token_logprobs"},
    {Method::kPTrue, "p_true", "token/sequence probabilities",
     ModelAccess::kWhiteBox, false, "true_false_logprobs"},
    {Method::kJaccardDegree, "jaccard_degree", "output consistency",
     ModelAccess::kBlackBox, false, "samples"},
    {Method::kVerbalization1s, "verbalization_1s", "verbalized uncertainty",
     ModelAccess::kBlackBox, false, "verbal_confidence_text"},
    {Method::kVerbalization2s, "verbalization_2s", "verbalized uncertainty",
     ModelAccess::kBlackBox, false, "verbal_confidence_text"},
    {Method::kTrainedProbe, "trained_probe", "uncertainty probe",
     ModelAccess::kWhiteBox, true, "hidden_state"},
    {Method::kOodProbe, "ood_probe", "uncertainty probe", ModelAccess::kWhiteBox,
     true, "hidden_state"},
};

double clamp_logprob(double lp) { return std::max(lp, kLogprobFloor); }

double unit_interval(double v) { return std::clamp(v, 0.0, 1.0); }

// Order-independent sum: summing a sorted copy makes the result a function
// of the multiset only.
double stable_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

ConfidenceScore make(Method m, double value, const InferenceTrace& t) {
  return ConfidenceScore{m, unit_interval(value), t.id};
}

}  // namespace

const MethodInfo& method_info(Method m) {
  return kMethodTable[static_cast<std::size_t>(m)];
}

std::string_view to_string(Method m) { return method_info(m).name; }

std::optional<Method> method_from_string(std::string_view s) {
  for (const auto& info : kMethodTable) {
    if (info.name == s) return info.method;
  }
  // Hyphenated spellings are accepted on input.
  std::string alt(s);
  std::replace(alt.begin(), alt.end(), '-', '_');
  for (const auto& info : kMethodTable) {
    if (info.name == alt) return info.method;
  }
  return std::nullopt;
}

ConfidenceScore score_avg_token_prob(const InferenceTrace& t) {
  if (t.answer_kind == AnswerKind::kFreeForm) {
    if (t.token_logprobs.empty()) {
      throw Error(ErrorCode::kMissingField, "token_logprobs");
    }
    std::vector<double> probs;
    probs.reserve(t.token_logprobs.size());
    for (double lp : t.token_logprobs) probs.push_back(std::exp(clamp_logprob(lp)));
    const double n = static_cast<double>(probs.size());
    return make(Method::kAvgTokenProb, stable_sum(std::move(probs)) / n, t);
  }
  if (!t.chosen_option_logprob) {
    throw Error(ErrorCode::kMissingField, "chosen_option_logprob");
  }
  return make(Method::kAvgTokenProb,
              std::exp(clamp_logprob(*t.chosen_option_logprob)), t);
}

ConfidenceScore score_perplexity(const InferenceTrace& t) {
  if (t.token_logprobs.empty()) {
    throw Error(ErrorCode::kMissingField, "token_logprobs");
  }
  std::vector<double> lp;
  lp.reserve(t.token_logprobs.size());
  for (double x : t.token_logprobs) lp.push_back(clamp_logprob(x));
  const double n = static_cast<double>(lp.size());
  // exp(mean ln p): the geometric-mean token probability, i.e. the
  // reciprocal of exp(-mean ln p).
  return make(Method::kPerplexity, std::exp(stable_sum(std::move(lp)) / n), t);
}

double p_true_from_logprobs(double true_logprob, double false_logprob) {
  const double lt = clamp_logprob(true_logprob);
  const double lf = clamp_logprob(false_logprob);
  const double top = std::max(lt, lf);
  const double a = std::exp(lt - top);
  const double b = std::exp(lf - top);
  return a / (a + b);
}

ConfidenceScore score_p_true(const InferenceTrace& t) {
  if (!t.true_false_logprobs) {
    throw Error(ErrorCode::kMissingField, "true_false_logprobs");
  }
  return make(Method::kPTrue,
              p_true_from_logprobs(t.true_false_logprobs->true_logprob,
                                   t.true_false_logprobs->false_logprob),
              t);
}

std::vector<std::string> jaccard_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t lo = i, hi = j;
    while (lo < hi && std::ispunct(static_cast<unsigned char>(text[lo]))) ++lo;
    while (hi > lo && std::ispunct(static_cast<unsigned char>(text[hi - 1]))) --hi;
    if (lo < hi) {
      std::string tok(text.substr(lo, hi - lo));
      for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

JaccardDegree jaccard_degree(std::span<const std::string> samples) {
  const std::size_t m = samples.size();
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "jaccard_degree needs m >= 2");
  std::vector<std::set<std::string>> sets;
  sets.reserve(m);
  for (const auto& s : samples) {
    auto toks = jaccard_tokens(s);
    sets.emplace_back(toks.begin(), toks.end());
  }
  std::vector<double> off_diagonal;
  off_diagonal.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto& a = sets[i];
      const auto& b = sets[j];
      std::size_t inter = 0;
      for (const auto& tok : a) inter += b.count(tok);
      const std::size_t uni = a.size() + b.size() - inter;
      off_diagonal.push_back(uni == 0 ? 1.0
                                      : static_cast<double>(inter) /
                                            static_cast<double>(uni));
    }
  }
  // trace(D) = sum of all W entries = m (diagonal) + 2 * upper triangle.
  const double md = static_cast<double>(m);
  const double degree_sum = md + 2.0 * stable_sum(std::move(off_diagonal));
  JaccardDegree out;
  out.uncertainty = (md * md - degree_sum) / (md * md);
  out.confidence = degree_sum / (md * md);
  return out;
}

ConfidenceScore score_jaccard_degree(const InferenceTrace& t) {
  if (!t.samples) throw Error(ErrorCode::kMissingField, "samples");
  return make(Method::kJaccardDegree, jaccard_degree(*t.samples).confidence, t);
}

namespace {

struct NumberSpan {
  std::size_t pos;
  double value;
};

std::vector<NumberSpan> numeric_literals(std::string_view text) {
  std::vector<NumberSpan> out;
  std::size_t i = 0;
  auto digit = [&](std::size_t k) {
    return k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]));
  };
  while (i < text.size()) {
    if (digit(i) || (text[i] == '.' && digit(i + 1))) {
      const std::size_t start = i;
      while (digit(i)) ++i;
      if (i < text.size() && text[i] == '.' && digit(i + 1)) {
        ++i;
        while (digit(i)) ++i;
      }
      out.push_back({start, std::stod(std::string(text.substr(start, i - start)))});
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace

std::optional<double> parse_verbal_confidence(std::string_view text) {
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto numbers = numeric_literals(text);
  const std::size_t cue = lower.find("confidence");

  std::optional<double> raw;
  if (cue != std::string::npos) {
    for (const auto& n : numbers) {
      if (n.pos > cue) raw = n.value;
    }
  } else if (numbers.size() == 1) {
    raw = numbers.front().value;
  }
  if (!raw || !std::isfinite(*raw)) return std::nullopt;
  double v = *raw;
  if (v > 1.0 && v <= 100.0) v /= 100.0;
  return unit_interval(v);
}

ConfidenceScore parse_verbalized(const InferenceTrace& t, VerbalVariant variant) {
  if (!t.verbal_confidence_text) {
    throw Error(ErrorCode::kMissingField, "verbal_confidence_text");
  }
  const auto v = parse_verbal_confidence(*t.verbal_confidence_text);
  if (!v) throw Error(ErrorCode::kNonCompliant, t.id);
  const Method m = variant == VerbalVariant::kOneStep ? Method::kVerbalization1s
                                                      : Method::kVerbalization2s;
  return make(m, *v, t);
}

ConfidenceScore score_trace(const InferenceTrace& t, Method method,
                            const ProbeModel* probe) {
  switch (method) {
    case Method::kAvgTokenProb: return score_avg_token_prob(t);
    case Method::kPerplexity: return score_perplexity(t);
    case Method::kPTrue: return score_p_true(t);
    case Method::kJaccardDegree: return score_jaccard_degree(t);
    case Method::kVerbalization1s: return parse_verbalized(t, VerbalVariant::kOneStep);
    case Method::kVerbalization2s: return parse_verbalized(t, VerbalVariant::kTwoStep);
    case Method::kTrainedProbe:
    case Method::kOodProbe: {
      if (probe == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "probe method without a probe model");
      }
      ConfidenceScore s = probe_confidence(*probe, t);
      s.method = method;
      return s;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

namespace {

struct Slot {
  std::optional<ConfidenceScore> score;
  std::optional<DiscardedTrace> discarded;
  std::exception_ptr error;
};

void score_one(const InferenceTrace& t, Method method, const ProbeModel* probe,
               Slot& slot) {
  try {
    slot.score = score_trace(t, method, probe);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNonCompliant || e.code() == ErrorCode::kMissingField) {
      slot.discarded = DiscardedTrace{t.id, e.what()};
    } else {
      slot.error = std::current_exception();
    }
  } catch (...) {
    slot.error = std::current_exception();
  }
}

}  // namespace

BatchScores score_batch(const TraceSet& traces, Method method,
                        const ProbeModel* probe, Exec exec) {
  if (is_probe_method(method) != (probe != nullptr)) {
    throw Error(ErrorCode::kInvalidArgument,
                "a probe model is required for, and only for, probe methods");
  }
  const auto n = static_cast<std::ptrdiff_t>(traces.records.size());
  std::vector<Slot> slots(traces.records.size());
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      score_one(traces.records[i], method, probe, slots[i]);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      score_one(traces.records[i], method, probe, slots[i]);
    }
  }

  BatchScores out;
  out.scores.reserve(slots.size());
  for (auto& s : slots) {
    if (s.error) std::rethrow_exception(s.error);
    if (s.score) out.scores.push_back(std::move(*s.score));
    if (s.discarded) out.discarded.push_back(std::move(*s.discarded));
  }
  return out;
}

}  // namespace uqroute
