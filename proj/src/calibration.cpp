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

#include "uqroute/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "uqroute/error.hpp"
#include "uqroute/random.hpp"
#include "uqroute/routing.hpp"

namespace uqroute {

std::size_t ConfidenceHistogram::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

std::vector<double> uniform_edges(std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "bin count must be >= 1");
  std::vector<double> edges(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  }
  return edges;
}

std::size_t bin_index(double value, std::span<const double> edges) {
  const std::size_t bins = edges.size() - 1;
  if (!(value >= edges.front() && value <= edges.back())) {
    throw Error(ErrorCode::kInvalidArgument, "confidence outside [0,1]");
  }
  const double guess = std::floor(value * static_cast<double>(bins));
  std::size_t b = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, guess)));
  // The product can round across an edge; settle against the edges
  // themselves so membership matches the reported boundaries.
  while (b > 0 && value < edges[b]) --b;
  while (b + 1 < bins && value >= edges[b + 1]) ++b;
  return b;
}

ConfidenceHistogram build_histogram(std::span<const ConfidenceScore> scores,
                                    std::size_t bins, std::string_view dataset,
                                    Exec exec) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no scores to bin");
  ConfidenceHistogram h;
  h.edges = uniform_edges(bins);
  h.counts.assign(bins, 0);
  h.members.assign(bins, {});

  const auto n = static_cast<std::ptrdiff_t>(scores.size());
  std::vector<std::size_t> index(scores.size());
  for (const auto& s : scores) bin_index(s.value, h.edges);  // validate up front
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) index[i] = bin_index(scores[i].value, h.edges);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) index[i] = bin_index(scores[i].value, h.edges);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    h.counts[index[i]] += 1;
    h.members[index[i]].push_back(
        {scores[i].trace_id, std::string(dataset), scores[i].value});
  }
  return h;
}

ConfidenceHistogram pool_histograms(std::span<const ConfidenceHistogram> parts) {
  if (parts.empty()) throw Error(ErrorCode::kEmptyScores, "nothing to pool");
  ConfidenceHistogram pooled;
  pooled.edges = parts.front().edges;
  pooled.counts.assign(parts.front().bins(), 0);
  pooled.members.assign(parts.front().bins(), {});
  for (const auto& h : parts) {
    if (h.bins() != pooled.bins()) {
      throw Error(ErrorCode::kInvalidArgument, "histograms differ in bin count");
    }
    for (std::size_t b = 0; b < h.bins(); ++b) {
      pooled.counts[b] += h.counts[b];
      pooled.members[b].insert(pooled.members[b].end(), h.members[b].begin(),
                               h.members[b].end());
    }
  }
  return pooled;
}

std::size_t per_bin_quota(std::size_t bin_size, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rate must be in (0,1]");
  }
  if (bin_size == 0) return 0;
  return std::max<std::size_t>(1, fraction_count(rate, bin_size));
}

CalibrationSet sample_calibration(const ConfidenceHistogram& pooled, double rate,
                                  std::uint64_t seed) {
  if (pooled.total() == 0) throw Error(ErrorCode::kEmptyScores, "pooled histogram is empty");
  per_bin_quota(1, rate);  // validates rate

  CalibrationSet cal;
  cal.edges = pooled.edges;
  cal.rate = rate;
  cal.seed = seed;
  cal.pool_counts = pooled.counts;
  cal.sampled_counts.assign(pooled.bins(), 0);

  std::unordered_set<std::string> seen;
  Rng rng(seed);
  for (std::size_t b = 0; b < pooled.bins(); ++b) {
    const auto& members = pooled.members[b];
    const std::size_t quota = per_bin_quota(members.size(), rate);
    // Partial Fisher-Yates over positions, then restore bin order.
    std::vector<std::size_t> pos(members.size());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
    for (std::size_t i = 0; i < quota; ++i) {
      std::swap(pos[i], pos[i + rng.below(pos.size() - i)]);
    }
    pos.resize(quota);
    std::sort(pos.begin(), pos.end());
    for (auto p : pos) {
      if (!seen.insert(members[p].id).second) {
        throw Error(ErrorCode::kDuplicateId, members[p].id);
      }
      cal.entries.push_back(members[p]);
    }
    cal.sampled_counts[b] = quota;
  }
  return cal;
}

DatasetTraces group_by_dataset(const TraceSet& traces) {
  DatasetTraces groups;
  for (const auto& t : traces.records) {
    auto& g = groups[t.dataset];
    if (g.source.empty()) g.source = traces.source;
    g.records.push_back(t);
  }
  return groups;
}

CalibrationSet leave_one_out_calibration(const DatasetScores& scores,
                                         std::string_view target,
                                         const CalibrationConfig& config) {
  if (scores.find(std::string(target)) == scores.end()) {
    throw Error(ErrorCode::kUnknownDataset, std::string(target));
  }
  if (scores.size() < 2) {
    throw Error(ErrorCode::kSingleDataset, "need at least one source dataset besides " +
                                               std::string(target));
  }
  std::vector<ConfidenceHistogram> parts;
  for (const auto& [tag, s] : scores) {
    if (tag == target || s.empty()) continue;
    parts.push_back(build_histogram(s, config.bins, tag));
  }
  if (parts.empty()) throw Error(ErrorCode::kEmptyScores, "source datasets have no scores");
  CalibrationSet cal = sample_calibration(pool_histograms(parts), config.rate, config.seed);
  cal.method = std::string(to_string(config.method));
  return cal;
}

CalibrationSet leave_one_out_calibration(const DatasetTraces& groups,
                                         std::string_view target,
                                         const CalibrationConfig& config) {
  if (groups.find(std::string(target)) == groups.end()) {
    throw Error(ErrorCode::kUnknownDataset, std::string(target));
  }
  if (groups.size() < 2) {
    throw Error(ErrorCode::kSingleDataset, "need at least one source dataset besides " +
                                               std::string(target));
  }
  DatasetScores scores;
  for (const auto& [tag, traces] : groups) {
    if (tag == target) {
      scores[tag];  // keeps the target visible for validation, never scored
      continue;
    }
    scores[tag] = score_batch(traces, config.method, config.probe).scores;
  }
  return leave_one_out_calibration(scores, target, config);
}

namespace {

std::vector<double> sorted_confidences(const CalibrationSet& cal) {
  std::vector<double> v;
  v.reserve(cal.entries.size());
  for (const auto& e : cal.entries) v.push_back(e.confidence);
  std::sort(v.begin(), v.end());
  return v;
}

double threshold_from_sorted(const std::vector<double>& sorted, double ratio) {
  const std::size_t k = fraction_count(ratio, sorted.size());
  return k < sorted.size() ? sorted[k] : std::numeric_limits<double>::infinity();
}

}  // namespace

double transfer_threshold(const CalibrationSet& cal, double target_ratio) {
  if (cal.empty()) throw Error(ErrorCode::kEmptyCalibrationSet, "no calibration entries");
  return threshold_from_sorted(sorted_confidences(cal), target_ratio);
}

std::vector<TransferRow> transfer_ratios(const CalibrationSet& cal,
                                         std::span<const ConfidenceScore> target,
                                         std::span<const double> grid) {
  if (cal.empty()) throw Error(ErrorCode::kEmptyCalibrationSet, "no calibration entries");
  if (target.empty()) throw Error(ErrorCode::kEmptyScores, "empty target");
  const auto sorted = sorted_confidences(cal);
  std::vector<TransferRow> rows;
  rows.reserve(grid.size());
  for (double r : grid) {
    TransferRow row;
    row.ratio = r;
    row.threshold = threshold_from_sorted(sorted, r);
    std::size_t routed = 0;
    for (const auto& s : target) routed += should_route(s.value, row.threshold) ? 1 : 0;
    row.achieved_ratio = static_cast<double>(routed) / static_cast<double>(target.size());
    rows.push_back(row);
  }
  return rows;
}

GeneralizationReport generalization_report(const CalibrationSet& cal,
                                           std::span<const ConfidenceScore> target,
                                           const LabelMap& slm_correct,
                                           const LabelMap& llm_correct,
                                           std::span<const double> grid) {
  GeneralizationReport report;
  report.rows = transfer_ratios(cal, target, grid);
  const auto slm = aligned_labels(target, slm_correct);
  const auto llm = aligned_labels(target, llm_correct);
  const double n = static_cast<double>(target.size());
  const auto direct = routing_curve(target, slm_correct, llm_correct, grid);

  double gap_sum = 0.0;
  for (std::size_t g = 0; g < report.rows.size(); ++g) {
    auto& row = report.rows[g];
    std::size_t hits = 0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      hits += should_route(target[i].value, row.threshold) ? llm[i] : slm[i];
    }
    row.transfer_accuracy = static_cast<double>(hits) / n;
    row.direct_accuracy = direct[g].overall_accuracy;
    const double gap = std::abs(row.transfer_accuracy - row.direct_accuracy);
    report.max_accuracy_gap = std::max(report.max_accuracy_gap, gap);
    gap_sum += gap;
    report.max_ratio_gap =
        std::max(report.max_ratio_gap, std::abs(row.achieved_ratio - row.ratio));
  }
  if (!report.rows.empty()) {
    report.mean_accuracy_gap = gap_sum / static_cast<double>(report.rows.size());
  }
  return report;
}

namespace {

std::string exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_exact(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::kMalformedRecord, where + ": bad number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, '\t')) out.push_back(cell);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

std::filesystem::path sidecar(const std::filesystem::path& manifest) {
  return std::filesystem::path(manifest.string() + ".hist");
}

}  // namespace

void write_calibration(const std::filesystem::path& manifest, const CalibrationSet& cal) {
  std::ofstream out(manifest);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + manifest.string());
  out << "# uqroute calibration manifest v1\n";
  out << "# method=" << cal.method << '\n';
  out << "# rate=" << exact(cal.rate) << '\n';
  out << "# seed=" << cal.seed << '\n';
  out << "# bins=" << cal.pool_counts.size() << '\n';
  out << "id\tdataset\tconfidence\tbin\n";
  const std::span<const double> edges(cal.edges);
  for (const auto& e : cal.entries) {
    out << e.id << '\t' << e.dataset << '\t' << exact(e.confidence) << '\t'
        << bin_index(e.confidence, edges) << '\n';
  }

  std::ofstream hist(sidecar(manifest));
  if (!hist) throw Error(ErrorCode::kIoError, "cannot write " + sidecar(manifest).string());
  hist << "bin\tlo\thi\tpool_count\tsampled\n";
  for (std::size_t b = 0; b < cal.pool_counts.size(); ++b) {
    hist << b << '\t' << exact(cal.edges[b]) << '\t' << exact(cal.edges[b + 1]) << '\t'
         << cal.pool_counts[b] << '\t' << cal.sampled_counts[b] << '\n';
  }
}

CalibrationSet read_calibration(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + manifest.string());
  const std::string where = manifest.string();
  CalibrationSet cal;
  std::size_t bins = 0;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "method") cal.method = value;
      if (key == "rate") cal.rate = parse_exact(value, where);
      if (key == "seed") cal.seed = std::stoull(value);
      if (key == "bins") bins = std::stoul(value);
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line != "id\tdataset\tconfidence\tbin") {
        throw Error(ErrorCode::kMalformedRecord, where + ": unexpected header");
      }
      continue;
    }
    const auto cells = split_tabs(line);
    if (cells.size() != 4) throw Error(ErrorCode::kMalformedRecord, where + ": bad row");
    cal.entries.push_back({cells[0], cells[1], parse_exact(cells[2], where)});
  }
  if (bins == 0) throw Error(ErrorCode::kMalformedRecord, where + ": missing bins");
  cal.edges = uniform_edges(bins);
  cal.pool_counts.assign(bins, 0);
  cal.sampled_counts.assign(bins, 0);

  std::ifstream hist(sidecar(manifest));
  if (hist) {
    std::getline(hist, line);
    while (std::getline(hist, line)) {
      if (line.empty()) continue;
      const auto cells = split_tabs(line);
      if (cells.size() != 5) throw Error(ErrorCode::kMalformedRecord, where + ".hist: bad row");
      const std::size_t b = std::stoul(cells[0]);
      if (b >= bins) throw Error(ErrorCode::kMalformedRecord, where + ".hist: bin out of range");
      cal.pool_counts[b] = std::stoul(cells[3]);
      cal.sampled_counts[b] = std::stoul(cells[4]);
    }
  } else {
    const std::span<const double> edges(cal.edges);
    for (const auto& e : cal.entries) cal.sampled_counts[bin_index(e.confidence, edges)] += 1;
  }
  return cal;
}

}  // namespace uqroute
