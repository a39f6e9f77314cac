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

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "uqroute/scoring.hpp"

namespace uqroute {

// Correctness labels keyed by trace id.
using LabelMap = std::unordered_map<std::string, bool>;

LabelMap labels_from_traces(const TraceSet& traces);

// Labels for `scores`, in the same order. Throws MissingLabel.
std::vector<bool> aligned_labels(std::span<const ConfidenceScore> scores,
                                 const LabelMap& labels);

// Indices of `scores` sorted by ascending confidence, ties by ascending
// trace id. Everything rank-based in the library goes through this order.
std::vector<std::size_t> confidence_order(std::span<const ConfidenceScore> scores);

// floor(fraction * n), clamped to [0, n]. A 1e-9 slack absorbs the
// representation error of grid values like 0.35 so that 0.35 * 20 counts 7.
std::size_t fraction_count(double fraction, std::size_t n);

}  // namespace uqroute
