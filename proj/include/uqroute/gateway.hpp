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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "uqroute/probe.hpp"
#include "uqroute/scoring.hpp"
#include "uqroute/trace.hpp"

namespace httplib {
class Server;
}

namespace uqroute {

// An OpenAI-compatible chat/completions server.
struct Endpoint {
  std::string url;  // scheme://host[:port][/base], e.g. http://127.0.0.1:8080/v1
  std::string model;
  std::string api_key;
};

enum class FallbackPolicy { kServeWeak, kError };

// Prompt templates with {question} and {answer} placeholders.
struct PromptTemplates {
  std::string p_true;
  std::string verbalization_1s;
  std::string verbalization_2s;

  static PromptTemplates defaults();
};

struct GatewayConfig {
  Endpoint weak;
  Endpoint strong;
  Method method = Method::kPerplexity;

  // Exactly one of these two is set.
  std::optional<double> threshold;
  std::optional<std::filesystem::path> calibration_manifest;
  double target_ratio = 0.0;

  int samples = 5;                  // consistency resamples
  double sample_temperature = 1.0;  // for the resamples
  double temperature = 0.0;         // primary decode is greedy
  double top_p = 1.0;
  int max_tokens = 512;
  int top_logprobs = 20;  // requested on the p(True) follow-up

  int connect_timeout_ms = 5000;
  int read_timeout_ms = 60000;
  FallbackPolicy fallback = FallbackPolicy::kServeWeak;

  std::filesystem::path trace_log;  // empty = no log
  std::string dataset = "gateway";

  // Probe methods need hidden states; the weak endpoint must return them
  // as choices[0].hidden_state.
  bool weak_hidden_states = false;
  std::optional<std::filesystem::path> probe_path;

  PromptTemplates templates = PromptTemplates::defaults();

  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;

  // Throws ConfigError.
  void validate() const;
};

GatewayConfig gateway_config_from_json(const nlohmann::json& j,
                                       const std::filesystem::path& base_dir = {});
GatewayConfig load_gateway_config(const std::filesystem::path& path);

// UQROUTE_{WEAK,STRONG}_{URL,MODEL,API_KEY} replace the matching fields.
void apply_env_overrides(GatewayConfig& config);

struct ChatRequest {
  std::string prompt;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 512;
  bool logprobs = false;
  int top_logprobs = 0;
};

struct TokenLogprob {
  std::string token;
  double logprob = 0.0;
  std::vector<std::pair<std::string, double>> top;
};

struct ChatResponse {
  std::string content;
  bool has_logprobs = false;
  std::vector<TokenLogprob> tokens;
  std::optional<std::vector<double>> hidden_state;
};

// Thrown by ChatClient on transport failures and non-2xx statuses.
class EndpointFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChatClient {
 public:
  ChatClient(Endpoint endpoint, int connect_timeout_ms, int read_timeout_ms);

  ChatResponse complete(const ChatRequest& request) const;

  const Endpoint& endpoint() const { return endpoint_; }

 private:
  Endpoint endpoint_;
  std::string host_;
  std::string path_;
  int connect_timeout_ms_;
  int read_timeout_ms_;
};

nlohmann::json chat_request_body(const Endpoint& endpoint, const ChatRequest& request);
ChatResponse parse_chat_response(const nlohmann::json& body);

struct RouteRequest {
  std::string query;
  AnswerKind answer_kind = AnswerKind::kFreeForm;
  std::vector<std::string> options;
};

RouteRequest route_request_from_json(const nlohmann::json& j);

enum class AnswerSource { kSlm, kLlm, kSlmFallback };
std::string_view to_string(AnswerSource source);

struct RouteResult {
  std::string answer;
  AnswerSource source = AnswerSource::kSlm;
  double confidence = 0.0;
  Method method = Method::kPerplexity;
  double threshold = 0.0;
  double weak_latency_ms = 0.0;
  std::optional<double> strong_latency_ms;
  std::optional<std::string> warning;
  InferenceTrace trace;
};

struct ScoreResult {
  double confidence = 0.0;
  Method method = Method::kPerplexity;
  InferenceTrace trace;
};

nlohmann::json to_json(const RouteResult& r);
nlohmann::json to_json(const ScoreResult& r);

// Scores the weak model's answer and escalates low-confidence queries.
// Thread-safe: configuration is fixed at construction and trace-log writes
// go through one mutex.
class Gateway {
 public:
  explicit Gateway(GatewayConfig config);

  RouteResult route(const RouteRequest& request);
  ScoreResult score(const RouteRequest& request);

  double threshold() const { return threshold_; }
  const GatewayConfig& config() const { return config_; }

 private:
  struct Evidence {
    InferenceTrace trace;
    double latency_ms = 0.0;
  };

  Evidence gather(const RouteRequest& request);
  double confidence_for(const InferenceTrace& trace) const;
  void append_trace(const InferenceTrace& trace);

  GatewayConfig config_;
  ChatClient weak_;
  ChatClient strong_;
  double threshold_ = 0.0;
  std::optional<ProbeModel> probe_;
  std::string id_prefix_;
  std::atomic<std::uint64_t> sequence_{0};
  std::mutex log_mutex_;
  std::ofstream log_;
};

// HTTP front end: POST /v1/route, POST /v1/score, GET /v1/health.
class GatewayServer {
 public:
  explicit GatewayServer(Gateway& gateway);
  ~GatewayServer();

  // Returns the bound port (an ephemeral one when port == 0).
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();

 private:
  Gateway& gateway_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace uqroute
