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
#include <span>
#include <string>
#include <vector>

#include "uqroute/exec.hpp"
#include "uqroute/scoring.hpp"
#include "uqroute/trace.hpp"

namespace uqroute {

inline constexpr double kLeakySlope = 0.01;
inline constexpr int kProbeFileVersion = 1;

// Fully connected layer, weights stored row-major as [out][in].
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double w(std::size_t o, std::size_t i) const { return weights[o * in + i]; }

  bool operator==(const DenseLayer&) const = default;
};

// Feed-forward correctness probe: leaky-rectifier hidden layers and a single
// logistic output unit.
class ProbeModel {
 public:
  ProbeModel() = default;

  // All-zero parameters. dims = {d_in, h1, ..., 1}.
  explicit ProbeModel(std::vector<std::size_t> dims);

  // Parameters drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static ProbeModel random(std::vector<std::size_t> dims, std::uint64_t seed);

  std::size_t input_dim() const { return dims_.empty() ? 0 : dims_.front(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  // Flat view over every weight then bias, layer by layer.
  std::size_t parameter_count() const;
  double& parameter(std::size_t k);
  double parameter(std::size_t k) const;

  // Pre-sigmoid output. Throws DimensionMismatch.
  double logit(std::span<const double> x) const;
  // Probability of a correct answer, strictly inside (0, 1).
  double predict(std::span<const double> x) const;

  std::vector<double> predict_batch(std::span<const std::vector<double>> xs,
                                    Exec exec = Exec::kParallel) const;

  bool operator==(const ProbeModel&) const = default;

 private:
  void check_input(std::span<const double> x) const;

  std::vector<std::size_t> dims_;
  std::vector<DenseLayer> layers_;
};

struct ProbeTrainConfig {
  int epochs = 20;
  double learning_rate = 5e-4;
  std::size_t batch_size = 64;
  std::uint64_t seed = 50;
  std::vector<std::size_t> hidden = {256, 128, 64};
  // Cap on the number of training records, 0 = use all. Selection is by
  // seeded id hash, so it does not depend on file order.
  std::size_t subsample = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static ProbeTrainConfig in_domain() { return {}; }
  static ProbeTrainConfig out_of_domain() {
    ProbeTrainConfig c;
    c.learning_rate = 1e-4;
    return c;
  }
};

struct ProbeExample {
  std::string id;
  std::vector<double> features;
  bool label = false;
};

struct TrainedProbe {
  ProbeModel model;
  // Mean training-set loss measured after each epoch.
  std::vector<double> epoch_loss;
};

TrainedProbe train_probe(std::span<const ProbeExample> examples,
                         const ProbeTrainConfig& config);
TrainedProbe train_probe(const TraceSet& train, const ProbeTrainConfig& config);

// Builds training examples from labelled traces with hidden states.
std::vector<ProbeExample> probe_examples(const TraceSet& traces);

ConfidenceScore probe_confidence(const ProbeModel& model, const InferenceTrace& trace);

// Mean binary cross-entropy over the batch.
double probe_loss(const ProbeModel& model, std::span<const ProbeExample> batch);

// Gradient of probe_loss with respect to parameter(k), in flat order.
std::vector<double> probe_gradient(const ProbeModel& model,
                                   std::span<const ProbeExample> batch);

// Analytic gradient against central differences (step 1e-5) on every
// parameter. Relative error is |a - n| / max(|a| + |n|, 1e-6).
double gradient_check(const ProbeModel& model, std::span<const ProbeExample> batch,
                      Exec exec = Exec::kParallel);

void write_probe(std::ostream& out, const ProbeModel& model);
ProbeModel read_probe(std::istream& in);
void save_probe(const std::filesystem::path& path, const ProbeModel& model);
ProbeModel load_probe(const std::filesystem::path& path);

}  // namespace uqroute
