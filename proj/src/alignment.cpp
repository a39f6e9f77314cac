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

#include "uqroute/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "uqroute/error.hpp"

namespace uqroute {

double roc_auc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(scores.size()) + " scores vs " +
                                                std::to_string(labels.size()) + " labels");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "non-finite score");
  }
  const std::size_t n = scores.size();
  const auto n_pos = static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), true));
  const std::uint64_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorCode::kSingleClassLabels, "need both correct and incorrect answers");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the midrank of each tie group [i, j) is (i + 1) + j, an integer,
  // so the whole statistic stays in exact integer arithmetic.
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    std::uint64_t positives = 0;
    for (std::size_t k = i; k < j; ++k) positives += labels[order[k]] ? 1 : 0;
    twice_rank_sum += positives * (i + 1 + j);
    i = j;
  }
  const std::uint64_t twice_u = twice_rank_sum - n_pos * (n_pos + 1);
  return static_cast<double>(twice_u) / static_cast<double>(2 * n_pos * n_neg);
}

double roc_auc(std::span<const ConfidenceScore> scores, const std::vector<bool>& labels) {
  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(s.value);
  return roc_auc(std::span<const double>(values), labels);
}

AlignmentReport alignment_report(const BatchScores& batch, const LabelMap& labels) {
  AlignmentReport r;
  if (!batch.scores.empty()) r.method = batch.scores.front().method;
  r.auc = roc_auc(std::span<const ConfidenceScore>(batch.scores),
                  aligned_labels(batch.scores, labels));
  r.n_used = batch.scores.size();
  r.n_discarded = batch.discarded.size();
  return r;
}

std::vector<RelAccPoint> relative_accuracy_curve(std::span<const ConfidenceScore> scores,
                                                 const std::vector<bool>& slm_correct,
                                                 const std::vector<bool>& llm_correct,
                                                 std::span<const double> grid) {
  const std::size_t n = scores.size();
  if (slm_correct.size() != n || llm_correct.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "scores and label lists differ in length");
  }
  const auto order = confidence_order(scores);
  // Suffix counts over the ascending order: kept set after dropping k is
  // order[k..n).
  std::vector<std::size_t> slm_suffix(n + 1, 0), llm_suffix(n + 1, 0);
  for (std::size_t k = n; k-- > 0;) {
    slm_suffix[k] = slm_suffix[k + 1] + (slm_correct[order[k]] ? 1 : 0);
    llm_suffix[k] = llm_suffix[k + 1] + (llm_correct[order[k]] ? 1 : 0);
  }

  std::vector<RelAccPoint> out;
  out.reserve(grid.size());
  for (double f : grid) {
    if (!(f >= 0.0 && f < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "excluded fraction must be in [0,1)");
    }
    const std::size_t dropped = fraction_count(f, n);
    if (dropped >= n) throw Error(ErrorCode::kEmptyKeptSet, "fraction leaves no queries");
    RelAccPoint p;
    p.excluded_fraction = f;
    p.n_kept = n - dropped;
    const double kept = static_cast<double>(p.n_kept);
    p.slm_accuracy = static_cast<double>(slm_suffix[dropped]) / kept;
    p.llm_accuracy = static_cast<double>(llm_suffix[dropped]) / kept;
    if (p.llm_accuracy > 0.0) p.relative_accuracy = p.slm_accuracy / p.llm_accuracy;
    out.push_back(p);
  }
  return out;
}

std::vector<RelAccPoint> relative_accuracy_curve(std::span<const ConfidenceScore> scores,
                                                 const LabelMap& slm_correct,
                                                 const LabelMap& llm_correct,
                                                 std::span<const double> grid) {
  return relative_accuracy_curve(scores, aligned_labels(scores, slm_correct),
                                 aligned_labels(scores, llm_correct), grid);
}

std::vector<double> default_exclusion_grid() {
  std::vector<double> g;
  for (int i = 0; i < 10; ++i) g.push_back(i / 10.0);
  return g;
}

}  // namespace uqroute
