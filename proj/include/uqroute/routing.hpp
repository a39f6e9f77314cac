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

#include <span>
#include <string>
#include <vector>

#include "uqroute/exec.hpp"
#include "uqroute/ranking.hpp"
#include "uqroute/scoring.hpp"

namespace uqroute {

// Which queries go to the strong model at a given routed fraction.
// A query is routed when its confidence is strictly below `threshold`;
// queries tied at the threshold are split by ascending id so the routed
// count is exactly floor(target_ratio * n).
struct RoutingPlan {
  double threshold = 0.0;  // +inf when every query is routed
  double target_ratio = 0.0;
  double achieved_ratio = 0.0;
  std::vector<std::string> routed_ids;  // sorted
  std::vector<std::string> kept_ids;    // sorted

  bool routes(const std::string& id) const;
};

struct CurvePoint {
  double ratio = 0.0;
  double overall_accuracy = 0.0;
  // achieved_ratio * per-call cost weight
  double cost = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

// The routing decision for a single confidence against a fixed threshold.
// The gateway and threshold transfer both use this comparator.
inline bool should_route(double confidence, double threshold) {
  return confidence < threshold;
}

RoutingPlan plan_for_ratio(std::span<const ConfidenceScore> scores, double target_ratio);

// (kept SLM-correct + routed LLM-correct) / n. Throws MissingLabel.
double overall_accuracy(const RoutingPlan& plan, const LabelMap& slm_correct,
                        const LabelMap& llm_correct);

// Accuracy at every grid ratio. The parallel kernel walks prefix counts over
// the confidence order; the serial reference builds a plan per grid point.
// Both give bit-identical output.
std::vector<CurvePoint> routing_curve(std::span<const ConfidenceScore> scores,
                                      const LabelMap& slm_correct,
                                      const LabelMap& llm_correct,
                                      std::span<const double> grid,
                                      Exec exec = Exec::kParallel,
                                      double cost_weight = 1.0);

// Best achievable curve for the label pair: routes SLM-wrong/LLM-right
// queries first, then the ones where routing changes nothing, and the
// SLM-right/LLM-wrong ones last.
std::vector<CurvePoint> oracle_curve(const std::vector<bool>& slm_correct,
                                     const std::vector<bool>& llm_correct,
                                     std::span<const double> grid,
                                     double cost_weight = 1.0);

// 0, 0.05, ..., 1.0
std::vector<double> default_routing_grid();

}  // namespace uqroute
