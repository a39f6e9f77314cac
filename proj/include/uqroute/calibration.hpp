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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uqroute/exec.hpp"
#include "uqroute/ranking.hpp"
#include "uqroute/scoring.hpp"

namespace uqroute {

inline constexpr std::size_t kDefaultBins = 30;
inline constexpr double kDefaultSampleRate = 0.1;
inline constexpr std::uint64_t kDefaultCalibrationSeed = 50;

struct CalibrationEntry {
  std::string id;
  std::string dataset;
  double confidence = 0.0;

  bool operator==(const CalibrationEntry&) const = default;
};

// Uniform-width bins over [0, 1]. Bin b is [edges[b], edges[b+1]) except the
// last, which also holds 1.0.
struct ConfidenceHistogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::vector<std::vector<CalibrationEntry>> members;

  std::size_t bins() const { return counts.size(); }
  std::size_t total() const;
};

std::vector<double> uniform_edges(std::size_t bins);
std::size_t bin_index(double value, std::span<const double> edges);

ConfidenceHistogram build_histogram(std::span<const ConfidenceScore> scores,
                                    std::size_t bins = kDefaultBins,
                                    std::string_view dataset = {},
                                    Exec exec = Exec::kParallel);

// Bin-wise union, members kept in argument order. All inputs must share
// the same bin count.
ConfidenceHistogram pool_histograms(std::span<const ConfidenceHistogram> parts);

// Sampled hold-out set plus the histogram it was drawn from.
struct CalibrationSet {
  std::vector<CalibrationEntry> entries;  // grouped by bin, ascending
  std::vector<double> edges;
  std::vector<std::size_t> pool_counts;     // per-bin size of the source pool
  std::vector<std::size_t> sampled_counts;  // per-bin draws
  double rate = kDefaultSampleRate;
  std::uint64_t seed = kDefaultCalibrationSeed;
  std::string method;

  bool empty() const { return entries.empty(); }
  bool operator==(const CalibrationSet&) const = default;
};

// max(1, floor(rate * n_b)), or 0 for an empty bin.
std::size_t per_bin_quota(std::size_t bin_size, double rate);

// Draws per_bin_quota ids from each bin uniformly without replacement.
CalibrationSet sample_calibration(const ConfidenceHistogram& pooled,
                                  double rate = kDefaultSampleRate,
                                  std::uint64_t seed = kDefaultCalibrationSeed);

using DatasetScores = std::map<std::string, std::vector<ConfidenceScore>>;
using DatasetTraces = std::map<std::string, TraceSet>;

DatasetTraces group_by_dataset(const TraceSet& traces);

struct CalibrationConfig {
  Method method = Method::kPerplexity;
  std::size_t bins = kDefaultBins;
  double rate = kDefaultSampleRate;
  std::uint64_t seed = kDefaultCalibrationSeed;
  const ProbeModel* probe = nullptr;
};

// Builds the calibration set for `target` from every other dataset.
CalibrationSet leave_one_out_calibration(const DatasetScores& scores,
                                         std::string_view target,
                                         const CalibrationConfig& config);
CalibrationSet leave_one_out_calibration(const DatasetTraces& groups,
                                         std::string_view target,
                                         const CalibrationConfig& config);

// Lower empirical quantile: the (floor(ratio * n) + 1)-th smallest
// calibration confidence; +inf at ratio 1. Routing strictly below it sends
// floor(ratio * n) calibration queries to the strong model.
double transfer_threshold(const CalibrationSet& cal, double target_ratio);

struct TransferRow {
  double ratio = 0.0;
  double threshold = 0.0;
  double achieved_ratio = 0.0;
  double transfer_accuracy = 0.0;
  double direct_accuracy = 0.0;
};

struct GeneralizationReport {
  std::vector<TransferRow> rows;
  double max_accuracy_gap = 0.0;
  double mean_accuracy_gap = 0.0;
  double max_ratio_gap = 0.0;
};

GeneralizationReport generalization_report(const CalibrationSet& cal,
                                           std::span<const ConfidenceScore> target,
                                           const LabelMap& slm_correct,
                                           const LabelMap& llm_correct,
                                           std::span<const double> grid);

// Ratio columns only, for targets without strong-model labels.
std::vector<TransferRow> transfer_ratios(const CalibrationSet& cal,
                                         std::span<const ConfidenceScore> target,
                                         std::span<const double> grid);

// Manifest (one row per sampled id) with the histogram in a ".hist" sidecar.
void write_calibration(const std::filesystem::path& manifest, const CalibrationSet& cal);
CalibrationSet read_calibration(const std::filesystem::path& manifest);

}  // namespace uqroute
