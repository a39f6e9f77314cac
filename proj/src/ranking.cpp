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

#include "uqroute/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uqroute/error.hpp"

namespace uqroute {

LabelMap labels_from_traces(const TraceSet& traces) {
  LabelMap labels;
  labels.reserve(traces.size());
  for (const auto& t : traces.records) {
    if (!t.correct) throw Error(ErrorCode::kMissingLabel, t.id);
    labels[t.id] = *t.correct;
  }
  return labels;
}

std::vector<bool> aligned_labels(std::span<const ConfidenceScore> scores,
                                 const LabelMap& labels) {
  std::vector<bool> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    auto it = labels.find(s.trace_id);
    if (it == labels.end()) throw Error(ErrorCode::kMissingLabel, s.trace_id);
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::size_t> confidence_order(std::span<const ConfidenceScore> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a].value != scores[b].value) return scores[a].value < scores[b].value;
    return scores[a].trace_id < scores[b].trace_id;
  });
  return order;
}

std::size_t fraction_count(double fraction, std::size_t n) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fraction must be in [0,1]");
  }
  const double k = std::floor(fraction * static_cast<double>(n) + 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, k)));
}

}  // namespace uqroute
