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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace uqroute {

inline constexpr int kTraceSchemaVersion = 1;
inline constexpr std::size_t kMaxHiddenDim = 8192;

enum class AnswerKind { kFreeForm, kMultipleChoice, kTrueFalse };

std::string_view to_string(AnswerKind kind);
std::optional<AnswerKind> answer_kind_from_string(std::string_view s);

struct TrueFalseLogprobs {
  double true_logprob = 0.0;
  double false_logprob = 0.0;
  bool operator==(const TrueFalseLogprobs&) const = default;
};

// One query's logged evidence. Optional members are legal at load time; each
// scorer checks for the fields it needs.
struct InferenceTrace {
  std::string id;
  std::string dataset;
  std::string prompt;
  std::string response;
  AnswerKind answer_kind = AnswerKind::kFreeForm;
  std::vector<double> token_logprobs;  // natural log, all <= 0
  std::optional<double> chosen_option_logprob;
  std::optional<TrueFalseLogprobs> true_false_logprobs;
  std::optional<std::vector<double>> hidden_state;
  std::optional<std::vector<std::string>> samples;
  std::optional<std::string> verbal_confidence_text;
  std::optional<bool> correct;

  bool operator==(const InferenceTrace&) const = default;
};

// Immutable after load. `header` holds the optional metadata line a capture
// harness writes ahead of the records (e.g. hidden-state pooling choice).
struct TraceSet {
  std::vector<InferenceTrace> records;
  std::string source;
  nlohmann::json header = nlohmann::json::object();

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Conversion between a record and its one-line wire form. `line` is only
// used for error reporting.
InferenceTrace trace_from_json(const nlohmann::json& j, std::size_t line = 0);
nlohmann::json trace_to_json(const InferenceTrace& trace);
std::string serialize_trace(const InferenceTrace& trace);

TraceSet parse_traces(std::istream& in, bool require_labels,
                      std::string source = "stream");
TraceSet load_traces(const std::filesystem::path& path, bool require_labels);

void write_traces(std::ostream& out, const TraceSet& set);
void save_traces(const std::filesystem::path& path, const TraceSet& set);

// Deterministic labelled traces. Each query has a latent ease e in (0, 1];
// the token log-probs have geometric-mean probability exactly e and the
// label is true with probability (1 - link) * 0.5 + link * e. All other
// evidence fields are filled with noisy functions of e so that every scorer
// can run on the output.
TraceSet synth_traces(std::size_t n, std::uint64_t seed, double difficulty_link,
                      std::string_view dataset = "synthetic");

// The latent ease values used by synth_traces for the same (n, seed).
std::vector<double> synth_latent_ease(std::size_t n, std::uint64_t seed);

}  // namespace uqroute
