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

#include <doctest.h>
#include <omp.h>

#include "support/oracles.hpp"
#include "uqroute/calibration.hpp"
#include "uqroute/probe.hpp"
#include "uqroute/routing.hpp"

// Every OpenMP kernel must agree bit for bit with its serial reference,
// whatever the thread count.

using namespace uqroute;

namespace {

struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

bool same(const BatchScores& a, const BatchScores& b) {
  if (a.scores.size() != b.scores.size() || a.discarded.size() != b.discarded.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    if (a.scores[i].trace_id != b.scores[i].trace_id || a.scores[i].value != b.scores[i].value) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.discarded.size(); ++i) {
    if (a.discarded[i].id != b.discarded[i].id) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("score_batch") {
  const auto set = synth_traces(3000, 11, 1.0);
  const auto probe = ProbeModel::random({16, 8, 1}, 3);
  for (int threads : {1, 3, 8}) {
    Threads guard(threads);
    for (Method m : kAllMethods) {
      const ProbeModel* p = is_probe_method(m) ? &probe : nullptr;
      CHECK(same(score_batch(set, m, p, Exec::kSerial), score_batch(set, m, p, Exec::kParallel)));
    }
  }
}

TEST_CASE("routing_curve") {
  const auto set = synth_traces(5000, 12, 1.0);
  const auto scores = score_batch(set, Method::kJaccardDegree).scores;
  const auto slm = labels_from_traces(set);
  LabelMap llm;
  Rng rng(5);
  for (const auto& t : set.records) llm[t.id] = rng.bernoulli(0.85);
  std::vector<double> fine;
  for (int i = 0; i <= 200; ++i) fine.push_back(i / 200.0);
  for (int threads : {1, 4}) {
    Threads guard(threads);
    CHECK(routing_curve(scores, slm, llm, fine, Exec::kSerial) ==
          routing_curve(scores, slm, llm, fine, Exec::kParallel));
  }
}

TEST_CASE("build_histogram") {
  const auto set = synth_traces(4000, 13, 1.0);
  const auto scores = score_batch(set, Method::kAvgTokenProb).scores;
  for (int threads : {1, 5}) {
    Threads guard(threads);
    const auto a = build_histogram(scores, 30, "x", Exec::kSerial);
    const auto b = build_histogram(scores, 30, "x", Exec::kParallel);
    CHECK(a.counts == b.counts);
    CHECK(a.members == b.members);
  }
}

TEST_CASE("predict_batch and gradient_check") {
  const auto model = ProbeModel::random({8, 24, 16, 1}, 21);
  Rng rng(22);
  std::vector<std::vector<double>> xs(500, std::vector<double>(8));
  std::vector<ProbeExample> batch;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (auto& v : xs[i]) v = rng.normal();
    if (i < 6) batch.push_back({std::to_string(i), xs[i], rng.bernoulli(0.5)});
  }
  for (int threads : {1, 4}) {
    Threads guard(threads);
    CHECK(model.predict_batch(xs, Exec::kSerial) == model.predict_batch(xs, Exec::kParallel));
    CHECK(gradient_check(model, batch, Exec::kSerial) ==
          gradient_check(model, batch, Exec::kParallel));
  }
}
