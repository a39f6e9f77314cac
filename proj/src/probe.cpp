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

#include "uqroute/probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "uqroute/error.hpp"
#include "uqroute/random.hpp"

namespace uqroute {

namespace {

double leaky(double z) { return z > 0.0 ? z : kLeakySlope * z; }
double leaky_grad(double z) { return z > 0.0 ? 1.0 : kLeakySlope; }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log s(z) + (1-y) log(1 - s(z))] written in terms of the logit.
double bce_from_logit(double z, bool y) {
  const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
  return softplus - (y ? z : 0.0);
}

void validate_dims(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) throw Error(ErrorCode::kInvalidArgument, "probe needs >= 2 dims");
  if (dims.back() != 1) throw Error(ErrorCode::kInvalidArgument, "probe output dim must be 1");
  for (auto d : dims) {
    if (d == 0) throw Error(ErrorCode::kInvalidArgument, "probe dims must be positive");
  }
}

// Forward pass keeping every layer's pre-activation; activations of the last
// layer are not rectified.
struct Activations {
  std::vector<std::vector<double>> pre;   // z_l, one per layer
  std::vector<std::vector<double>> post;  // a_l, post[0] is the input
};

void forward(const ProbeModel& model, std::span<const double> x, Activations& act) {
  const auto& layers = model.layers();
  act.pre.resize(layers.size());
  act.post.resize(layers.size() + 1);
  act.post[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& L = layers[l];
    const auto& in = act.post[l];
    auto& z = act.pre[l];
    z.assign(L.out, 0.0);
    for (std::size_t o = 0; o < L.out; ++o) {
      const double* row = &L.weights[o * L.in];
      double s = L.bias[o];
      for (std::size_t i = 0; i < L.in; ++i) s += row[i] * in[i];
      z[o] = s;
    }
    auto& a = act.post[l + 1];
    a.resize(L.out);
    const bool last = l + 1 == layers.size();
    for (std::size_t o = 0; o < L.out; ++o) a[o] = last ? z[o] : leaky(z[o]);
  }
}

}  // namespace

ProbeModel::ProbeModel(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  validate_dims(dims_);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    DenseLayer L;
    L.in = dims_[l];
    L.out = dims_[l + 1];
    L.weights.assign(L.in * L.out, 0.0);
    L.bias.assign(L.out, 0.0);
    layers_.push_back(std::move(L));
  }
}

ProbeModel ProbeModel::random(std::vector<std::size_t> dims, std::uint64_t seed) {
  ProbeModel m(std::move(dims));
  Rng rng(derive_seed(seed, "probe-init"));
  for (auto& L : m.layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(L.in));
    for (auto& w : L.weights) w = rng.uniform(-bound, bound);
    for (auto& b : L.bias) b = rng.uniform(-bound, bound);
  }
  return m;
}

std::size_t ProbeModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& L : layers_) n += L.weights.size() + L.bias.size();
  return n;
}

double& ProbeModel::parameter(std::size_t k) {
  for (auto& L : layers_) {
    if (k < L.weights.size()) return L.weights[k];
    k -= L.weights.size();
    if (k < L.bias.size()) return L.bias[k];
    k -= L.bias.size();
  }
  throw Error(ErrorCode::kInvalidArgument, "parameter index out of range");
}

double ProbeModel::parameter(std::size_t k) const {
  return const_cast<ProbeModel*>(this)->parameter(k);
}

void ProbeModel::check_input(std::span<const double> x) const {
  if (layers_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty probe model");
  if (x.size() != input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(input_dim()) + " features, got " +
                    std::to_string(x.size()));
  }
}

double ProbeModel::logit(std::span<const double> x) const {
  check_input(x);
  Activations act;
  forward(*this, x, act);
  return act.pre.back()[0];
}

double ProbeModel::predict(std::span<const double> x) const {
  constexpr double kLow = std::numeric_limits<double>::min();
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(sigmoid(logit(x)), kLow, kHigh);
}

std::vector<double> ProbeModel::predict_batch(std::span<const std::vector<double>> xs,
                                              Exec exec) const {
  for (const auto& x : xs) check_input(x);
  std::vector<double> out(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = predict(xs[i]);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = predict(xs[i]);
  }
  return out;
}

double probe_loss(const ProbeModel& model, std::span<const ProbeExample> batch) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : batch) total += bce_from_logit(model.logit(ex.features), ex.label);
  return total / static_cast<double>(batch.size());
}

namespace {

// Accumulates d(mean loss)/d(param) into `grad` laid out per layer like the
// model's flat parameter order.
void accumulate_gradient(const ProbeModel& model, std::span<const ProbeExample> batch,
                         std::vector<double>& grad) {
  const auto& layers = model.layers();
  grad.assign(model.parameter_count(), 0.0);
  std::vector<std::size_t> offset(layers.size());
  std::size_t k = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    offset[l] = k;
    k += layers[l].weights.size() + layers[l].bias.size();
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  Activations act;
  std::vector<double> delta, prev_delta;
  for (const auto& ex : batch) {
    if (ex.features.size() != model.input_dim()) {
      throw Error(ErrorCode::kDimensionMismatch, ex.id + " has a different feature dim");
    }
    forward(model, ex.features, act);
    const double z = act.pre.back()[0];
    delta.assign(1, (sigmoid(z) - (ex.label ? 1.0 : 0.0)) * scale);
    for (std::size_t l = layers.size(); l-- > 0;) {
      const DenseLayer& L = layers[l];
      const auto& in = act.post[l];
      double* gw = &grad[offset[l]];
      double* gb = gw + L.weights.size();
      for (std::size_t o = 0; o < L.out; ++o) {
        const double d = delta[o];
        gb[o] += d;
        double* row = gw + o * L.in;
        for (std::size_t i = 0; i < L.in; ++i) row[i] += d * in[i];
      }
      if (l == 0) break;
      prev_delta.assign(L.in, 0.0);
      for (std::size_t o = 0; o < L.out; ++o) {
        const double d = delta[o];
        const double* row = &L.weights[o * L.in];
        for (std::size_t i = 0; i < L.in; ++i) prev_delta[i] += row[i] * d;
      }
      const auto& zprev = act.pre[l - 1];
      for (std::size_t i = 0; i < L.in; ++i) prev_delta[i] *= leaky_grad(zprev[i]);
      delta.swap(prev_delta);
    }
  }
}

}  // namespace

std::vector<double> probe_gradient(const ProbeModel& model,
                                   std::span<const ProbeExample> batch) {
  std::vector<double> grad;
  if (batch.empty()) {
    grad.assign(model.parameter_count(), 0.0);
    return grad;
  }
  accumulate_gradient(model, batch, grad);
  return grad;
}

double gradient_check(const ProbeModel& model, std::span<const ProbeExample> batch,
                      Exec exec) {
  constexpr double kStep = 1e-5;
  constexpr double kFloor = 1e-6;
  const std::vector<double> analytic = probe_gradient(model, batch);
  const auto count = static_cast<std::ptrdiff_t>(analytic.size());
  double worst = 0.0;

  auto check_range = [&](ProbeModel& local, std::ptrdiff_t k) {
    const double saved = local.parameter(k);
    local.parameter(k) = saved + kStep;
    const double up = probe_loss(local, batch);
    local.parameter(k) = saved - kStep;
    const double down = probe_loss(local, batch);
    local.parameter(k) = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    const double a = analytic[k];
    return std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), kFloor);
  };

  if (exec == Exec::kParallel) {
#pragma omp parallel
    {
      ProbeModel local = model;
      double local_worst = 0.0;
#pragma omp for schedule(static)
      for (std::ptrdiff_t k = 0; k < count; ++k) {
        local_worst = std::max(local_worst, check_range(local, k));
      }
#pragma omp critical
      worst = std::max(worst, local_worst);
    }
  } else {
    ProbeModel local = model;
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      worst = std::max(worst, check_range(local, k));
    }
  }
  return worst;
}

std::vector<ProbeExample> probe_examples(const TraceSet& traces) {
  std::vector<ProbeExample> out;
  out.reserve(traces.size());
  std::size_t dim = 0;
  for (const auto& t : traces.records) {
    if (!t.hidden_state) throw Error(ErrorCode::kMissingField, "hidden_state");
    if (!t.correct) throw Error(ErrorCode::kMissingLabel, t.id);
    if (out.empty()) {
      dim = t.hidden_state->size();
    } else if (t.hidden_state->size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  t.id + " has " + std::to_string(t.hidden_state->size()) +
                      " dims, expected " + std::to_string(dim));
    }
    out.push_back({t.id, *t.hidden_state, *t.correct});
  }
  return out;
}

TrainedProbe train_probe(std::span<const ProbeExample> examples,
                         const ProbeTrainConfig& config) {
  if (config.epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (!(config.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  }
  if (config.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (examples.empty()) throw Error(ErrorCode::kSingleClassTrainingSet, "no training records");

  const std::size_t dim = examples.front().features.size();
  bool any_true = false, any_false = false;
  for (const auto& ex : examples) {
    if (ex.features.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, ex.id + " has a different feature dim");
    }
    (ex.label ? any_true : any_false) = true;
  }
  if (!any_true || !any_false) {
    throw Error(ErrorCode::kSingleClassTrainingSet, "training labels are all one class");
  }

  // Canonical order by id, so the seeded shuffle below does not depend on
  // the order records arrived in.
  std::vector<const ProbeExample*> order;
  order.reserve(examples.size());
  for (const auto& ex : examples) order.push_back(&ex);
  std::sort(order.begin(), order.end(),
            [](const ProbeExample* a, const ProbeExample* b) { return a->id < b->id; });
  if (config.subsample > 0 && config.subsample < order.size()) {
    std::vector<std::pair<std::uint64_t, const ProbeExample*>> keyed;
    for (const auto* ex : order) keyed.emplace_back(derive_seed(config.seed, ex->id), ex);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first < b.first : a.second->id < b.second->id;
    });
    keyed.resize(config.subsample);
    order.clear();
    for (const auto& [key, ex] : keyed) order.push_back(ex);
    std::sort(order.begin(), order.end(),
              [](const ProbeExample* a, const ProbeExample* b) { return a->id < b->id; });
  }

  std::vector<std::size_t> dims{dim};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(1);
  TrainedProbe result{ProbeModel::random(dims, config.seed), {}};
  ProbeModel& model = result.model;

  const std::size_t P = model.parameter_count();
  std::vector<double> m1(P, 0.0), m2(P, 0.0), grad;
  std::vector<ProbeExample> all;
  all.reserve(order.size());
  for (const auto* ex : order) all.push_back(*ex);

  Rng rng(derive_seed(config.seed, "probe-shuffle"));
  std::vector<std::size_t> perm(all.size());
  std::vector<ProbeExample> batch;
  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    for (std::size_t start = 0; start < perm.size(); start += config.batch_size) {
      const std::size_t stop = std::min(perm.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(all[perm[i]]);
      accumulate_gradient(model, batch, grad);
      ++step;
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      for (std::size_t k = 0; k < P; ++k) {
        m1[k] = config.beta1 * m1[k] + (1.0 - config.beta1) * grad[k];
        m2[k] = config.beta2 * m2[k] + (1.0 - config.beta2) * grad[k] * grad[k];
        const double mhat = m1[k] / c1;
        const double vhat = m2[k] / c2;
        model.parameter(k) -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
      }
    }
    result.epoch_loss.push_back(probe_loss(model, all));
  }
  return result;
}

TrainedProbe train_probe(const TraceSet& train, const ProbeTrainConfig& config) {
  const auto examples = probe_examples(train);
  return train_probe(std::span<const ProbeExample>(examples), config);
}

ConfidenceScore probe_confidence(const ProbeModel& model, const InferenceTrace& trace) {
  if (!trace.hidden_state) throw Error(ErrorCode::kMissingField, "hidden_state");
  return ConfidenceScore{Method::kTrainedProbe, model.predict(*trace.hidden_state),
                         trace.id};
}

namespace {

void write_row(std::ostream& out, const double* v, std::size_t n) {
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out << ' ';
    out << buf;
  }
  out << '\n';
}

}  // namespace

void write_probe(std::ostream& out, const ProbeModel& model) {
  out << "uqroute-probe " << kProbeFileVersion << '\n';
  out << "dims";
  for (auto d : model.dims()) out << ' ' << d;
  out << '\n';
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    const auto& L = model.layers()[l];
    out << "layer " << l << ' ' << L.out << ' ' << L.in << '\n';
    for (std::size_t o = 0; o < L.out; ++o) write_row(out, &L.weights[o * L.in], L.in);
    write_row(out, L.bias.data(), L.out);
  }
}

ProbeModel read_probe(std::istream& in) {
  auto fail = [](const std::string& why) {
    return Error(ErrorCode::kMalformedRecord, "probe file: " + why);
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "uqroute-probe") throw fail("bad magic");
  if (version != kProbeFileVersion) throw fail("unsupported version");
  if (!(in >> tag) || tag != "dims") throw fail("missing dims");
  std::string rest;
  std::getline(in, rest);
  std::istringstream ds(rest);
  std::vector<std::size_t> dims;
  for (std::size_t d; ds >> d;) dims.push_back(d);
  ProbeModel model(dims);

  auto read_double = [&](double& v) {
    std::string tok;
    if (!(in >> tok)) throw fail("truncated parameters");
    char* end = nullptr;
    v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v)) {
      throw fail("bad number '" + tok + "'");
    }
  };
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    auto& L = model.layers()[l];
    std::size_t idx = 0, out_dim = 0, in_dim = 0;
    if (!(in >> tag >> idx >> out_dim >> in_dim) || tag != "layer" || idx != l ||
        out_dim != L.out || in_dim != L.in) {
      throw fail("layer header mismatch at layer " + std::to_string(l));
    }
    for (auto& w : L.weights) read_double(w);
    for (auto& b : L.bias) read_double(b);
  }
  return model;
}

void save_probe(const std::filesystem::path& path, const ProbeModel& model) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_probe(out, model);
}

ProbeModel load_probe(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_probe(in);
}

}  // namespace uqroute
