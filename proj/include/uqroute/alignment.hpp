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
#include <vector>

#include "uqroute/ranking.hpp"
#include "uqroute/scoring.hpp"

namespace uqroute {

// Probability that a random correct answer outscores a random incorrect one
// (ties count one half). Evaluated by rank sum in O(n log n).
double roc_auc(std::span<const double> scores, const std::vector<bool>& labels);
double roc_auc(std::span<const ConfidenceScore> scores, const std::vector<bool>& labels);

struct AlignmentReport {
  Method method = Method::kPerplexity;
  double auc = 0.5;
  std::size_t n_used = 0;
  std::size_t n_discarded = 0;
};

// AUC over the scored records; discarded ones are counted but not used.
AlignmentReport alignment_report(const BatchScores& batch, const LabelMap& labels);

struct RelAccPoint {
  double excluded_fraction = 0.0;
  double slm_accuracy = 0.0;
  double llm_accuracy = 0.0;
  // slm / llm; empty when the strong model gets nothing right on the kept set.
  std::optional<double> relative_accuracy;
  std::size_t n_kept = 0;
};

// For each fraction f, drops the floor(f * n) least confident queries and
// compares both models' accuracy on what remains.
std::vector<RelAccPoint> relative_accuracy_curve(std::span<const ConfidenceScore> scores,
                                                 const std::vector<bool>& slm_correct,
                                                 const std::vector<bool>& llm_correct,
                                                 std::span<const double> grid);
std::vector<RelAccPoint> relative_accuracy_curve(std::span<const ConfidenceScore> scores,
                                                 const LabelMap& slm_correct,
                                                 const LabelMap& llm_correct,
                                                 std::span<const double> grid);

// 0, 0.1, ..., 0.9
std::vector<double> default_exclusion_grid();

}  // namespace uqroute
