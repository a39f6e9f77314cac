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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uqroute/alignment.hpp"
#include "uqroute/calibration.hpp"
#include "uqroute/ranking.hpp"
#include "uqroute/routing.hpp"
#include "uqroute/scoring.hpp"

// Tab-separated tables with a header row. These are what the command line
// tool reads and writes, and what external plotters consume.
namespace uqroute::table {

// Shortest text that parses back to the same double; "inf" for infinity.
std::string format_double(double v);

void write_scores(std::ostream& out, std::span<const ConfidenceScore> scores);
std::vector<ConfidenceScore> read_scores(std::istream& in);
std::vector<ConfidenceScore> load_scores(const std::filesystem::path& path);

void write_discarded(std::ostream& out, std::span<const DiscardedTrace> discarded);
std::vector<DiscardedTrace> read_discarded(std::istream& in);

// Either an "id<TAB>correct" table or a trace file (detected by a leading
// '{'), in which case the `correct` field of every record is used.
LabelMap load_labels(const std::filesystem::path& path);

// "0,0.25,1" or "start:step:stop" (inclusive of stop).
std::vector<double> parse_grid(std::string_view text);

void write_alignment(std::ostream& out, const AlignmentReport& report);
void write_relative_accuracy(std::ostream& out, Method method,
                             std::span<const RelAccPoint> points);
void write_curve(std::ostream& out, std::string_view label,
                 std::span<const CurvePoint> points, bool header = true);
void write_transfer(std::ostream& out, const GeneralizationReport& report,
                    bool with_accuracy);

}  // namespace uqroute::table
