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

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "uqroute/alignment.hpp"
#include "uqroute/calibration.hpp"
#include "uqroute/error.hpp"
#include "uqroute/gateway.hpp"
#include "uqroute/probe.hpp"
#include "uqroute/routing.hpp"
#include "uqroute/scoring.hpp"
#include "uqroute/table.hpp"
#include "uqroute/trace.hpp"

namespace fs = std::filesystem;
using namespace uqroute;

namespace {

Method parse_method(const std::string& name) {
  const auto m = method_from_string(name);
  if (!m) throw Error(ErrorCode::kInvalidArgument, "unknown method '" + name + "'");
  return *m;
}

std::optional<ProbeModel> probe_for(Method method, const std::string& probe_path) {
  if (!is_probe_method(method)) return std::nullopt;
  if (probe_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("--probe is required for ") + std::string(to_string(method)));
  }
  return load_probe(probe_path);
}

// Writes through `fn` to `path`, or to stdout when the path is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  fn(out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

// Trace files named directly, or every *.jsonl file inside a directory.
std::vector<fs::path> trace_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "no trace files given");
  return out;
}

TraceSet load_all(const std::vector<std::string>& inputs, bool require_labels) {
  TraceSet all;
  for (const auto& p : trace_files(inputs)) {
    auto part = load_traces(p, require_labels);
    all.records.insert(all.records.end(), std::make_move_iterator(part.records.begin()),
                       std::make_move_iterator(part.records.end()));
  }
  return all;
}

struct ScoreOpts {
  std::vector<std::string> traces;
  std::string method = "perplexity";
  std::string probe;
  std::string out;
};

int cmd_score(const ScoreOpts& o) {
  const Method method = parse_method(o.method);
  const auto probe = probe_for(method, o.probe);
  const auto set = load_all(o.traces, false);
  const auto batch = score_batch(set, method, probe ? &*probe : nullptr);
  emit(o.out, [&](std::ostream& s) { table::write_scores(s, batch.scores); });
  if (!o.out.empty()) {
    emit(o.out + ".discarded", [&](std::ostream& s) { table::write_discarded(s, batch.discarded); });
  }
  std::cerr << "scored " << batch.scores.size() << ", discarded " << batch.discarded.size()
            << '\n';
  return 0;
}

struct EvalOpts {
  std::string scores;
  std::vector<std::string> traces;
  std::string method = "perplexity";
  std::string probe;
  std::string labels;
  std::string llm_labels;
  std::string grid = "0:0.1:0.9";
  std::string out;
  std::string relacc_out;
};

int cmd_eval(const EvalOpts& o) {
  BatchScores batch;
  if (!o.scores.empty()) {
    batch.scores = table::load_scores(o.scores);
    const fs::path sidecar = o.scores + ".discarded";
    if (fs::exists(sidecar)) {
      std::ifstream in(sidecar);
      batch.discarded = table::read_discarded(in);
    }
  } else if (!o.traces.empty()) {
    const Method method = parse_method(o.method);
    const auto probe = probe_for(method, o.probe);
    batch = score_batch(load_all(o.traces, false), method, probe ? &*probe : nullptr);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "give --scores or --traces");
  }
  if (batch.scores.empty()) throw Error(ErrorCode::kEmptyScores, "nothing to evaluate");
  const LabelMap labels = o.labels.empty() && !o.traces.empty()
                              ? labels_from_traces(load_all(o.traces, true))
                              : table::load_labels(o.labels);
  const auto report = alignment_report(batch, labels);
  const LabelMap llm = o.llm_labels.empty() ? labels : table::load_labels(o.llm_labels);
  const auto grid = table::parse_grid(o.grid);
  const auto rel = relative_accuracy_curve(batch.scores, labels, llm, grid);

  const std::string relacc = !o.relacc_out.empty() ? o.relacc_out
                             : o.out.empty()        ? std::string()
                                                    : o.out + ".relacc";
  if (relacc.empty()) {
    emit("", [&](std::ostream& s) {
      table::write_alignment(s, report);
      s << '\n';
      table::write_relative_accuracy(s, report.method, rel);
    });
  } else {
    emit(o.out, [&](std::ostream& s) { table::write_alignment(s, report); });
    emit(relacc, [&](std::ostream& s) { table::write_relative_accuracy(s, report.method, rel); });
  }
  return 0;
}

struct SweepOpts {
  std::vector<std::string> scores;
  std::string slm_labels;
  std::string llm_labels;
  std::string grid = "0:0.05:1";
  double cost_weight = 1.0;
  bool no_oracle = false;
  std::string out;
};

int cmd_sweep(const SweepOpts& o) {
  const auto slm = table::load_labels(o.slm_labels);
  const auto llm = table::load_labels(o.llm_labels);
  const auto grid = table::parse_grid(o.grid);
  std::ostringstream text;
  bool header = true;
  std::vector<ConfidenceScore> first;
  for (const auto& path : o.scores) {
    const auto scores = table::load_scores(path);
    if (scores.empty()) throw Error(ErrorCode::kEmptyScores, path);
    const auto curve = routing_curve(scores, slm, llm, grid, Exec::kParallel, o.cost_weight);
    table::write_curve(text, to_string(scores.front().method), curve, header);
    header = false;
    if (first.empty()) first = scores;
  }
  if (!o.no_oracle) {
    const auto oracle = oracle_curve(aligned_labels(first, slm), aligned_labels(first, llm), grid,
                                     o.cost_weight);
    table::write_curve(text, "oracle", oracle, header);
  }
  emit(o.out, [&](std::ostream& s) { s << text.str(); });
  return 0;
}

struct CalibrateOpts {
  std::vector<std::string> traces;
  std::string target;
  std::string method = "perplexity";
  std::string probe;
  std::size_t bins = kDefaultBins;
  double rate = kDefaultSampleRate;
  std::uint64_t seed = kDefaultCalibrationSeed;
  std::string grid = "0:0.1:1";
  std::string llm_labels;
  std::string out;
  std::string report_out;
};

int cmd_calibrate(const CalibrateOpts& o) {
  if (o.out.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required");
  const Method method = parse_method(o.method);
  const auto probe = probe_for(method, o.probe);
  const auto groups = group_by_dataset(load_all(o.traces, false));
  CalibrationConfig cfg{method, o.bins, o.rate, o.seed, probe ? &*probe : nullptr};
  const auto cal = leave_one_out_calibration(groups, o.target, cfg);
  write_calibration(o.out, cal);

  const auto& target = groups.at(o.target);
  const auto scores = score_batch(target, method, probe ? &*probe : nullptr).scores;
  const auto grid = table::parse_grid(o.grid);
  GeneralizationReport report;
  bool with_accuracy = false;
  if (!o.llm_labels.empty()) {
    report = generalization_report(cal, scores, labels_from_traces(target),
                                   table::load_labels(o.llm_labels), grid);
    with_accuracy = true;
  } else {
    report.rows = transfer_ratios(cal, scores, grid);
    for (const auto& r : report.rows) {
      report.max_ratio_gap = std::max(report.max_ratio_gap, std::abs(r.achieved_ratio - r.ratio));
    }
  }
  const std::string report_path = o.report_out.empty() ? o.out + ".transfer" : o.report_out;
  emit(report_path, [&](std::ostream& s) { table::write_transfer(s, report, with_accuracy); });
  std::cerr << "calibration set: " << cal.entries.size() << " entries from "
            << groups.size() - 1 << " datasets\n";
  return 0;
}

struct TrainOpts {
  std::vector<std::string> traces;
  std::string out;
  bool ood = false;
  std::optional<double> lr;
  std::size_t epochs = 20;
  std::size_t batch = 64;
  std::uint64_t seed = 50;
  std::size_t subsample = 0;
  std::vector<std::size_t> hidden{256, 128, 64};
};

int cmd_train_probe(const TrainOpts& o) {
  if (o.out.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required");
  auto cfg = o.ood ? ProbeTrainConfig::out_of_domain() : ProbeTrainConfig::in_domain();
  if (o.lr) cfg.learning_rate = *o.lr;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch;
  cfg.seed = o.seed;
  cfg.subsample = o.subsample;
  cfg.hidden = o.hidden;
  const auto examples = probe_examples(load_all(o.traces, true));
  const auto trained = train_probe(examples, cfg);
  save_probe(o.out, trained.model);
  std::size_t right = 0;
  for (const auto& e : examples) right += (trained.model.predict(e.features) >= 0.5) == e.label;
  std::cout << "epoch\tloss\n";
  for (std::size_t i = 0; i < trained.epoch_loss.size(); ++i) {
    std::cout << i + 1 << '\t' << table::format_double(trained.epoch_loss[i]) << '\n';
  }
  std::cerr << "training accuracy "
            << table::format_double(static_cast<double>(right) /
                                    static_cast<double>(examples.size()))
            << '\n';
  return 0;
}

struct SynthOpts {
  std::size_t n = 1000;
  std::uint64_t seed = 50;
  double link = 1.0;
  std::string dataset = "synthetic";
  std::string out;
};

int cmd_synth(const SynthOpts& o) {
  const auto set = synth_traces(o.n, o.seed, o.link, o.dataset);
  emit(o.out, [&](std::ostream& s) { write_traces(s, set); });
  return 0;
}

struct ServeOpts {
  std::string config;
  std::string host;
  int port = -1;
};

GatewayServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int cmd_serve(const ServeOpts& o) {
  auto cfg = load_gateway_config(o.config);
  if (!o.host.empty()) cfg.listen_host = o.host;
  if (o.port >= 0) cfg.listen_port = o.port;
  Gateway gateway(cfg);
  GatewayServer server(gateway);
  const int port = server.bind(cfg.listen_host, cfg.listen_port);
  if (port <= 0) {
    throw Error(ErrorCode::kConfigError,
                "cannot listen on " + cfg.listen_host + ":" + std::to_string(cfg.listen_port));
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on " << cfg.listen_host << ':' << port << " (method "
            << to_string(cfg.method) << ")\n";
  server.listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-based routing between a small and a large language model"};
  app.require_subcommand(1);

  ScoreOpts score;
  auto* s = app.add_subcommand("score", "Score traces with one uncertainty method");
  s->add_option("--traces", score.traces, "Trace files or directories")->required();
  s->add_option("--method", score.method, "Scoring method")->capture_default_str();
  s->add_option("--probe", score.probe, "Probe file for probe methods");
  s->add_option("--out", score.out, "Scores table (stdout if omitted)");

  EvalOpts eval;
  auto* e = app.add_subcommand("eval", "AUC alignment and relative accuracy");
  e->add_option("--scores", eval.scores, "Scores table");
  e->add_option("--traces", eval.traces, "Score these traces instead of reading --scores");
  e->add_option("--method", eval.method, "Scoring method with --traces")->capture_default_str();
  e->add_option("--probe", eval.probe, "Probe file for probe methods");
  e->add_option("--labels", eval.labels, "Weak-model correctness (table or traces)");
  e->add_option("--llm-labels", eval.llm_labels, "Strong-model correctness");
  e->add_option("--grid", eval.grid, "Excluded fractions")->capture_default_str();
  e->add_option("--out", eval.out, "Alignment table");
  e->add_option("--relacc-out", eval.relacc_out, "Relative accuracy table");

  SweepOpts sweep;
  auto* w = app.add_subcommand("sweep", "Accuracy against routing ratio");
  w->add_option("--scores", sweep.scores, "One or more scores tables")->required();
  w->add_option("--slm-labels", sweep.slm_labels, "Weak-model correctness")->required();
  w->add_option("--llm-labels", sweep.llm_labels, "Strong-model correctness")->required();
  w->add_option("--grid", sweep.grid, "Routing ratios")->capture_default_str();
  w->add_option("--cost-weight", sweep.cost_weight, "Cost per routed query")
      ->capture_default_str();
  w->add_flag("--no-oracle", sweep.no_oracle, "Omit the oracle curve");
  w->add_option("--out", sweep.out, "Curve table (stdout if omitted)");

  CalibrateOpts cal;
  auto* c = app.add_subcommand("calibrate", "Leave-one-out calibration set and threshold transfer");
  c->add_option("--traces", cal.traces, "Trace files or directories, any datasets")->required();
  c->add_option("--target", cal.target, "Held-out dataset tag")->required();
  c->add_option("--method", cal.method, "Scoring method")->capture_default_str();
  c->add_option("--probe", cal.probe, "Probe file for probe methods");
  c->add_option("--bins", cal.bins, "Histogram bins")->capture_default_str();
  c->add_option("--rate", cal.rate, "Per-bin sampling rate")->capture_default_str();
  c->add_option("--seed", cal.seed, "Sampling seed")->capture_default_str();
  c->add_option("--grid", cal.grid, "Routing ratios for the report")->capture_default_str();
  c->add_option("--llm-labels", cal.llm_labels, "Strong-model correctness on the target");
  c->add_option("--out", cal.out, "Calibration manifest")->required();
  c->add_option("--report-out", cal.report_out, "Transfer report (default <out>.transfer)");

  TrainOpts train;
  auto* t = app.add_subcommand("train-probe", "Train a hidden-state probe");
  t->add_option("--traces", train.traces, "Labelled traces with hidden states")->required();
  t->add_option("--out", train.out, "Probe file")->required();
  t->add_flag("--ood", train.ood, "Out-of-domain learning rate");
  t->add_option("--lr", train.lr, "Learning rate override");
  t->add_option("--epochs", train.epochs)->capture_default_str();
  t->add_option("--batch", train.batch)->capture_default_str();
  t->add_option("--seed", train.seed)->capture_default_str();
  t->add_option("--subsample", train.subsample, "Train on this many examples (0 = all)")
      ->capture_default_str();
  t->add_option("--hidden", train.hidden, "Hidden layer widths")->delimiter(',');

  SynthOpts synth;
  auto* y = app.add_subcommand("synth", "Write synthetic traces");
  y->add_option("--n", synth.n)->capture_default_str();
  y->add_option("--seed", synth.seed)->capture_default_str();
  y->add_option("--link", synth.link, "Difficulty link in [0,1]")->capture_default_str();
  y->add_option("--dataset", synth.dataset)->capture_default_str();
  y->add_option("--out", synth.out, "Trace file (stdout if omitted)");

  ServeOpts serve;
  auto* v = app.add_subcommand("serve", "Run the routing gateway");
  v->add_option("--config", serve.config, "Gateway config file")->required();
  v->add_option("--host", serve.host, "Listen address override");
  v->add_option("--port", serve.port, "Listen port override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    std::cerr << "InvalidArgument: " << err.what() << '\n';
    return 2;
  }

  try {
    if (*s) return cmd_score(score);
    if (*e) return cmd_eval(eval);
    if (*w) return cmd_sweep(sweep);
    if (*c) return cmd_calibrate(cal);
    if (*t) return cmd_train_probe(train);
    if (*y) return cmd_synth(synth);
    if (*v) return cmd_serve(serve);
  } catch (const Error& err) {
    std::cerr << err.what() << '\n';
    return err.code() == ErrorCode::kInvalidArgument ? 2 : 1;
  } catch (const std::exception& err) {
    std::cerr << "Internal: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
