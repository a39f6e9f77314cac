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

#include "uqroute/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "uqroute/error.hpp"
#include "uqroute/random.hpp"

namespace uqroute {

using json = nlohmann::json;

std::string_view to_string(AnswerKind kind) {
  switch (kind) {
    case AnswerKind::kFreeForm: return "free_form";
    case AnswerKind::kMultipleChoice: return "multiple_choice";
    case AnswerKind::kTrueFalse: return "true_false";
  }
  return "free_form";
}

std::optional<AnswerKind> answer_kind_from_string(std::string_view s) {
  if (s == "free_form") return AnswerKind::kFreeForm;
  if (s == "multiple_choice") return AnswerKind::kMultipleChoice;
  if (s == "true_false") return AnswerKind::kTrueFalse;
  return std::nullopt;
}

namespace {

std::string string_field(const json& j, const char* key, std::size_t line,
                         bool required) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) throw MalformedRecord(line, std::string("missing ") + key);
    return {};
  }
  if (!it->is_string()) {
    throw MalformedRecord(line, std::string(key) + " is not a string");
  }
  return it->get<std::string>();
}

double logprob_value(const json& v, std::size_t line, const char* key) {
  if (!v.is_number()) {
    throw MalformedRecord(line, std::string(key) + " is not a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw MalformedRecord(line, "logprob not finite");
  if (x > 0.0) throw MalformedRecord(line, "logprob > 0");
  return x;
}

}  // namespace

InferenceTrace trace_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) throw MalformedRecord(line, "record is not an object");

  if (auto it = j.find("schema"); it != j.end()) {
    if (!it->is_number_integer() || it->get<int>() != kTraceSchemaVersion) {
      throw MalformedRecord(line, "unsupported schema version");
    }
  }

  InferenceTrace t;
  t.id = string_field(j, "id", line, true);
  if (t.id.empty()) throw MalformedRecord(line, "empty id");
  t.dataset = string_field(j, "dataset", line, false);
  t.prompt = string_field(j, "prompt", line, false);
  t.response = string_field(j, "response", line, false);

  if (auto it = j.find("answer_kind"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw MalformedRecord(line, "answer_kind is not a string");
    auto kind = answer_kind_from_string(it->get<std::string>());
    if (!kind) throw MalformedRecord(line, "unknown answer_kind");
    t.answer_kind = *kind;
  }

  if (auto it = j.find("token_logprobs"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw MalformedRecord(line, "token_logprobs is not an array");
    t.token_logprobs.reserve(it->size());
    for (const auto& v : *it) {
      t.token_logprobs.push_back(logprob_value(v, line, "token_logprobs"));
    }
  }

  if (auto it = j.find("chosen_option_logprob"); it != j.end() && !it->is_null()) {
    t.chosen_option_logprob = logprob_value(*it, line, "chosen_option_logprob");
  }

  if (auto it = j.find("true_false_logprobs"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2) {
      throw MalformedRecord(line, "true_false_logprobs must be a pair");
    }
    t.true_false_logprobs = TrueFalseLogprobs{
        logprob_value((*it)[0], line, "true_false_logprobs"),
        logprob_value((*it)[1], line, "true_false_logprobs")};
  }

  if (auto it = j.find("hidden_state"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw MalformedRecord(line, "hidden_state is not an array");
    if (it->size() > kMaxHiddenDim) {
      throw MalformedRecord(line, "hidden_state exceeds " +
                                      std::to_string(kMaxHiddenDim) + " dims");
    }
    std::vector<double> h;
    h.reserve(it->size());
    for (const auto& v : *it) {
      if (!v.is_number()) throw MalformedRecord(line, "hidden_state is not numeric");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw MalformedRecord(line, "hidden_state not finite");
      h.push_back(x);
    }
    t.hidden_state = std::move(h);
  }

  if (auto it = j.find("samples"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw MalformedRecord(line, "samples is not an array");
    if (it->size() < 2) throw MalformedRecord(line, "fewer than 2 samples");
    std::vector<std::string> s;
    for (const auto& v : *it) {
      if (!v.is_string()) throw MalformedRecord(line, "sample is not a string");
      s.push_back(v.get<std::string>());
    }
    t.samples = std::move(s);
  }

  if (auto it = j.find("verbal_confidence_text"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw MalformedRecord(line, "verbal_confidence_text is not a string");
    }
    t.verbal_confidence_text = it->get<std::string>();
  }

  if (auto it = j.find("correct"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean()) throw MalformedRecord(line, "correct is not a boolean");
    t.correct = it->get<bool>();
  }
  return t;
}

json trace_to_json(const InferenceTrace& t) {
  json j;
  j["schema"] = kTraceSchemaVersion;
  j["id"] = t.id;
  j["dataset"] = t.dataset;
  j["prompt"] = t.prompt;
  j["response"] = t.response;
  j["answer_kind"] = std::string(to_string(t.answer_kind));
  j["token_logprobs"] = t.token_logprobs;
  if (t.chosen_option_logprob) j["chosen_option_logprob"] = *t.chosen_option_logprob;
  if (t.true_false_logprobs) {
    j["true_false_logprobs"] = {t.true_false_logprobs->true_logprob,
                                t.true_false_logprobs->false_logprob};
  }
  if (t.hidden_state) j["hidden_state"] = *t.hidden_state;
  if (t.samples) j["samples"] = *t.samples;
  if (t.verbal_confidence_text) j["verbal_confidence_text"] = *t.verbal_confidence_text;
  if (t.correct) j["correct"] = *t.correct;
  return j;
}

std::string serialize_trace(const InferenceTrace& trace) {
  return trace_to_json(trace).dump();
}

TraceSet parse_traces(std::istream& in, bool require_labels, std::string source) {
  TraceSet set;
  set.source = std::move(source);
  std::unordered_set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (std::all_of(text.begin(), text.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line, std::string("invalid record syntax: ") + e.what());
    }
    if (j.is_object() && j.contains("header")) {
      if (!set.records.empty()) throw MalformedRecord(line, "header after records");
      set.header = j["header"];
      continue;
    }
    InferenceTrace t = trace_from_json(j, line);
    if (!seen.insert(t.id).second) throw Error(ErrorCode::kDuplicateId, t.id);
    if (require_labels && !t.correct) throw Error(ErrorCode::kMissingLabel, t.id);
    set.records.push_back(std::move(t));
  }
  return set;
}

TraceSet load_traces(const std::filesystem::path& path, bool require_labels) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_traces(in, require_labels, path.string());
}

void write_traces(std::ostream& out, const TraceSet& set) {
  if (!set.header.empty()) {
    out << json{{"schema", kTraceSchemaVersion}, {"header", set.header}}.dump() << '\n';
  }
  for (const auto& t : set.records) out << serialize_trace(t) << '\n';
}

void save_traces(const std::filesystem::path& path, const TraceSet& set) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_traces(out, set);
}

namespace {

std::vector<double> draw_ease(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "ease"));
  std::vector<double> ease(n);
  // 1 - U[0,1) lies in (0, 1]; the floor keeps ln(e) well inside the
  // scorers' clamping range.
  for (auto& e : ease) e = std::max(1.0 - rng.uniform(), 1e-6);
  return ease;
}

// Log-probs of `count` tokens whose arithmetic mean is ln(ease) and which
// are all <= 0.
std::vector<double> token_logprobs_for(double ease, std::size_t count, Rng& rng) {
  const double log_e = std::log(ease);
  std::vector<double> u(count);
  for (auto& x : u) x = rng.uniform();
  double mean = 0.0;
  for (double x : u) mean += x;
  mean /= static_cast<double>(count);
  double top = 0.0;
  for (double x : u) top = std::max(top, x - mean);
  double scale = 0.5;
  if (top > 0.0) scale = std::min(scale, -log_e / top);
  std::vector<double> lp(count);
  for (std::size_t i = 0; i < count; ++i) {
    lp[i] = std::min(0.0, log_e + scale * (u[i] - mean));
  }
  // Push the residual of the floating-point sum into the most negative
  // entry so the mean is ln(ease) to rounding.
  double sum = 0.0;
  for (double x : lp) sum += x;
  const double residual = log_e * static_cast<double>(count) - sum;
  auto lowest = std::min_element(lp.begin(), lp.end());
  *lowest = std::min(0.0, *lowest + residual);
  return lp;
}

}  // namespace

std::vector<double> synth_latent_ease(std::size_t n, std::uint64_t seed) {
  return draw_ease(n, seed);
}

TraceSet synth_traces(std::size_t n, std::uint64_t seed, double difficulty_link,
                      std::string_view dataset) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (!(difficulty_link >= 0.0 && difficulty_link <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "difficulty_link must be in [0,1]");
  }
  const std::vector<double> ease = draw_ease(n, seed);
  Rng labels(derive_seed(seed, "label"));
  Rng evidence(derive_seed(seed, "evidence"));

  TraceSet set;
  set.source = "synthetic";
  set.records.reserve(n);
  const int width = static_cast<int>(std::to_string(n - 1).size());
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ease[i];
    InferenceTrace t;
    std::string index = std::to_string(i);
    index.insert(0, static_cast<std::size_t>(width) - index.size(), '0');
    t.id = std::string(dataset) + "-" + index;
    t.dataset = std::string(dataset);
    t.prompt = "synthetic query " + std::to_string(i);
    t.response = "answer " + std::to_string(i);
    t.answer_kind = AnswerKind::kFreeForm;
    const double p_correct = (1.0 - difficulty_link) * 0.5 + difficulty_link * e;
    const bool correct = labels.bernoulli(p_correct);
    t.correct = correct;

    t.token_logprobs = token_logprobs_for(e, 3 + evidence.below(10), evidence);
    t.chosen_option_logprob = t.token_logprobs.front();

    const double q = std::clamp(e + 0.15 * evidence.normal(), 0.01, 0.99);
    t.true_false_logprobs = TrueFalseLogprobs{std::log(q), std::log1p(-q)};

    std::vector<std::string> samples;
    for (int s = 0; s < 5; ++s) {
      if (evidence.bernoulli(e)) {
        samples.push_back("the answer is " + std::to_string(i));
      } else {
        samples.push_back("maybe option " + std::to_string(evidence.below(1000)));
      }
    }
    t.samples = std::move(samples);

    if (evidence.bernoulli(0.05)) {
      t.verbal_confidence_text = "I am not sure.";
    } else {
      const double v = std::clamp(e + 0.1 * evidence.normal(), 0.0, 1.0);
      t.verbal_confidence_text =
          "Answer: " + t.response + ". Confidence: " +
          std::to_string(static_cast<int>(std::lround(100.0 * v)));
    }

    std::vector<double> h(16);
    for (auto& x : h) x = 0.6 * evidence.normal();
    h[0] += correct ? 0.8 : -0.8;
    h[1] += e;
    t.hidden_state = std::move(h);

    set.records.push_back(std::move(t));
  }
  return set;
}

}  // namespace uqroute
