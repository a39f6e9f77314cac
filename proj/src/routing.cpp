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

#include "uqroute/routing.hpp"

#include <algorithm>
#include <limits>

#include "uqroute/error.hpp"

namespace uqroute {

bool RoutingPlan::routes(const std::string& id) const {
  return std::binary_search(routed_ids.begin(), routed_ids.end(), id);
}

RoutingPlan plan_for_ratio(std::span<const ConfidenceScore> scores, double target_ratio) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no scores to route");
  const std::size_t n = scores.size();
  const std::size_t k = fraction_count(target_ratio, n);
  const auto order = confidence_order(scores);

  RoutingPlan plan;
  plan.target_ratio = target_ratio;
  plan.achieved_ratio = static_cast<double>(k) / static_cast<double>(n);
  plan.threshold = k < n ? scores[order[k]].value
                         : std::numeric_limits<double>::infinity();
  plan.routed_ids.reserve(k);
  plan.kept_ids.reserve(n - k);
  for (std::size_t i = 0; i < n; ++i) {
    (i < k ? plan.routed_ids : plan.kept_ids).push_back(scores[order[i]].trace_id);
  }
  std::sort(plan.routed_ids.begin(), plan.routed_ids.end());
  std::sort(plan.kept_ids.begin(), plan.kept_ids.end());
  return plan;
}

namespace {

bool lookup(const LabelMap& labels, const std::string& id) {
  auto it = labels.find(id);
  if (it == labels.end()) throw Error(ErrorCode::kMissingLabel, id);
  return it->second;
}

}  // namespace

double overall_accuracy(const RoutingPlan& plan, const LabelMap& slm_correct,
                        const LabelMap& llm_correct) {
  const std::size_t n = plan.routed_ids.size() + plan.kept_ids.size();
  if (n == 0) throw Error(ErrorCode::kEmptyScores, "empty plan");
  std::size_t hits = 0;
  for (const auto& id : plan.kept_ids) hits += lookup(slm_correct, id) ? 1 : 0;
  for (const auto& id : plan.routed_ids) hits += lookup(llm_correct, id) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(n);
}

std::vector<CurvePoint> routing_curve(std::span<const ConfidenceScore> scores,
                                      const LabelMap& slm_correct,
                                      const LabelMap& llm_correct,
                                      std::span<const double> grid, Exec exec,
                                      double cost_weight) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no scores to route");
  std::vector<CurvePoint> out(grid.size());

  if (exec == Exec::kSerial) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const RoutingPlan plan = plan_for_ratio(scores, grid[g]);
      out[g] = {grid[g], overall_accuracy(plan, slm_correct, llm_correct),
                plan.achieved_ratio * cost_weight};
    }
    return out;
  }

  const std::size_t n = scores.size();
  const auto order = confidence_order(scores);
  const auto slm = aligned_labels(scores, slm_correct);
  const auto llm = aligned_labels(scores, llm_correct);
  // routed_llm[k]: LLM hits among the k least confident; kept_slm[k]: SLM
  // hits among the rest.
  std::vector<std::size_t> routed_llm(n + 1, 0), kept_slm(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) routed_llm[i + 1] = routed_llm[i] + llm[order[i]];
  for (std::size_t i = n; i-- > 0;) kept_slm[i] = kept_slm[i + 1] + slm[order[i]];
  for (double r : grid) fraction_count(r, n);  // validate before the parallel region

  const auto points = static_cast<std::ptrdiff_t>(grid.size());
  const double dn = static_cast<double>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < points; ++g) {
    const std::size_t k = fraction_count(grid[g], n);
    out[g] = {grid[g], static_cast<double>(kept_slm[k] + routed_llm[k]) / dn,
              static_cast<double>(k) / dn * cost_weight};
  }
  return out;
}

std::vector<CurvePoint> oracle_curve(const std::vector<bool>& slm_correct,
                                     const std::vector<bool>& llm_correct,
                                     std::span<const double> grid, double cost_weight) {
  const std::size_t n = slm_correct.size();
  if (llm_correct.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "label lists differ in length");
  }
  if (n == 0) throw Error(ErrorCode::kEmptyScores, "no labels");
  // Gain from routing each query: +1, 0 or -1. Stable sort keeps the
  // both-wrong (0) group ahead of both-right (0) within the neutral tier.
  auto tier = [&](std::size_t i) {
    if (!slm_correct[i] && llm_correct[i]) return 0;
    if (!slm_correct[i] && !llm_correct[i]) return 1;
    if (slm_correct[i] && llm_correct[i]) return 2;
    return 3;
  };
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tier(a) < tier(b); });

  std::vector<std::size_t> routed_llm(n + 1, 0), kept_slm(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) routed_llm[i + 1] = routed_llm[i] + llm_correct[order[i]];
  for (std::size_t i = n; i-- > 0;) kept_slm[i] = kept_slm[i + 1] + slm_correct[order[i]];

  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  const double dn = static_cast<double>(n);
  for (double r : grid) {
    const std::size_t k = fraction_count(r, n);
    out.push_back({r, static_cast<double>(kept_slm[k] + routed_llm[k]) / dn,
                   static_cast<double>(k) / dn * cost_weight});
  }
  return out;
}

std::vector<double> default_routing_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(i / 20.0);
  return g;
}

}  // namespace uqroute
