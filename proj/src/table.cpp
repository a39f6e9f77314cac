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

#include "uqroute/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uqroute/error.hpp"

namespace uqroute::table {

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s, std::string_view what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string(what) + ": not a number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_scores(std::ostream& out, std::span<const ConfidenceScore> scores) {
  out << "id\tmethod\tconfidence\n";
  for (const auto& s : scores) {
    out << s.trace_id << '\t' << to_string(s.method) << '\t' << format_double(s.value)
        << '\n';
  }
}

std::vector<ConfidenceScore> read_scores(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "id\tmethod\tconfidence") {
    throw Error(ErrorCode::kMalformedRecord, "scores table: missing header");
  }
  std::vector<ConfidenceScore> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, '\t');
    if (cells.size() != 3) {
      throw Error(ErrorCode::kMalformedRecord,
                  "scores table line " + std::to_string(row) + ": expected 3 columns");
    }
    const auto method = method_from_string(cells[1]);
    if (!method) throw Error(ErrorCode::kMalformedRecord, "unknown method " + cells[1]);
    const double v = to_double(cells[2], "confidence");
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kMalformedRecord, "confidence outside [0,1] for " + cells[0]);
    }
    out.push_back({*method, v, cells[0]});
  }
  return out;
}

std::vector<ConfidenceScore> load_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_scores(in);
}

void write_discarded(std::ostream& out, std::span<const DiscardedTrace> discarded) {
  out << "id\treason\n";
  for (const auto& d : discarded) out << d.id << '\t' << d.reason << '\n';
}

std::vector<DiscardedTrace> read_discarded(std::istream& in) {
  std::string line;
  std::getline(in, line);
  std::vector<DiscardedTrace> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    out.push_back({line.substr(0, tab),
                   tab == std::string::npos ? std::string() : line.substr(tab + 1)});
  }
  return out;
}

LabelMap load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  const int first = (in >> std::ws).peek();
  if (first == '{') return labels_from_traces(parse_traces(in, true, path.string()));

  LabelMap labels;
  std::string line;
  std::getline(in, line);
  const auto header = split(trim(line), '\t');
  if (header.size() != 2 || header[0] != "id") {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": expected id<TAB>correct header");
  }
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto cells = split(t, '\t');
    if (cells.size() != 2) throw Error(ErrorCode::kMalformedRecord, "label row: " + t);
    const std::string& v = cells[1];
    bool value;
    if (v == "1" || v == "true" || v == "True") {
      value = true;
    } else if (v == "0" || v == "false" || v == "False") {
      value = false;
    } else {
      throw Error(ErrorCode::kMalformedRecord, "label value '" + v + "'");
    }
    if (!labels.emplace(cells[0], value).second) throw Error(ErrorCode::kDuplicateId, cells[0]);
  }
  return labels;
}

std::vector<double> parse_grid(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw Error(ErrorCode::kInvalidArgument, "empty grid");
  std::vector<double> grid;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw Error(ErrorCode::kInvalidArgument, "grid must be start:step:stop");
    const double start = to_double(trim(parts[0]), "grid");
    const double step = to_double(trim(parts[1]), "grid");
    const double stop = to_double(trim(parts[2]), "grid");
    if (!(step > 0.0) || stop < start) {
      throw Error(ErrorCode::kInvalidArgument, "grid needs step > 0 and stop >= start");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
      // Rounded to 12 places so 0:0.05:1 yields 0.35 rather than 0.35000000000000003.
      const double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
      grid.push_back(std::min(v, stop));
    }
  } else {
    for (const auto& cell : split(s, ',')) grid.push_back(to_double(trim(cell), "grid"));
  }
  for (double g : grid) {
    if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "grid value outside [0,1]");
  }
  return grid;
}

void write_alignment(std::ostream& out, const AlignmentReport& r) {
  out << "method\tauc\tn_used\tn_discarded\n";
  out << to_string(r.method) << '\t' << format_double(r.auc) << '\t' << r.n_used << '\t'
      << r.n_discarded << '\n';
}

void write_relative_accuracy(std::ostream& out, Method method,
                             std::span<const RelAccPoint> points) {
  out << "method\texcluded_fraction\tslm_accuracy\tllm_accuracy\trelative_accuracy\tn_kept\n";
  for (const auto& p : points) {
    out << to_string(method) << '\t' << format_double(p.excluded_fraction) << '\t'
        << format_double(p.slm_accuracy) << '\t' << format_double(p.llm_accuracy) << '\t'
        << (p.relative_accuracy ? format_double(*p.relative_accuracy) : "NA") << '\t'
        << p.n_kept << '\n';
  }
}

void write_curve(std::ostream& out, std::string_view label,
                 std::span<const CurvePoint> points, bool header) {
  if (header) out << "method\tratio\taccuracy\tcost\n";
  for (const auto& p : points) {
    out << label << '\t' << format_double(p.ratio) << '\t'
        << format_double(p.overall_accuracy) << '\t' << format_double(p.cost) << '\n';
  }
}

void write_transfer(std::ostream& out, const GeneralizationReport& report,
                    bool with_accuracy) {
  out << "ratio\tthreshold\tachieved_ratio\ttransfer_accuracy\tdirect_accuracy\n";
  for (const auto& r : report.rows) {
    out << format_double(r.ratio) << '\t' << format_double(r.threshold) << '\t'
        << format_double(r.achieved_ratio) << '\t'
        << (with_accuracy ? format_double(r.transfer_accuracy) : "NA") << '\t'
        << (with_accuracy ? format_double(r.direct_accuracy) : "NA") << '\n';
  }
  out << "# max_ratio_gap\t" << format_double(report.max_ratio_gap) << '\n';
  if (with_accuracy) {
    out << "# max_accuracy_gap\t" << format_double(report.max_accuracy_gap) << '\n';
    out << "# mean_accuracy_gap\t" << format_double(report.mean_accuracy_gap) << '\n';
  }
}

}  // namespace uqroute::table
