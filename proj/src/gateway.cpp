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

#include "uqroute/gateway.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "uqroute/calibration.hpp"
#include "uqroute/error.hpp"
#include "uqroute/routing.hpp"

namespace uqroute {

using json = nlohmann::json;

PromptTemplates PromptTemplates::defaults() {
  PromptTemplates t;
  t.p_true =
      "Question: {question}\n"
      "Proposed answer: {answer}\n"
      "Is the proposed answer correct? Reply with exactly one word, True or False.\n"
      "Answer:";
  t.verbalization_1s =
      "{question}\n\n"
      "Give your answer. Then, on a new line, state how confident you are that it is "
      "correct as a number from 0 to 100, in the form \"Confidence: <number>\".";
  t.verbalization_2s =
      "Question: {question}\n"
      "Your answer: {answer}\n"
      "How confident are you that this answer is correct? Reply with a number from 0 "
      "to 100 in the form \"Confidence: <number>\".";
  return t;
}

void GatewayConfig::validate() const {
  auto fail = [](const std::string& why) { return Error(ErrorCode::kConfigError, why); };
  if (weak.url.empty()) throw fail("weak endpoint url is required");
  if (strong.url.empty()) throw fail("strong endpoint url is required");
  if (threshold.has_value() == calibration_manifest.has_value()) {
    throw fail("configure exactly one of threshold or calibration manifest");
  }
  if (calibration_manifest && !(target_ratio >= 0.0 && target_ratio <= 1.0)) {
    throw fail("target_ratio must be in [0,1]");
  }
  if (method == Method::kJaccardDegree && samples < 2) {
    throw fail("jaccard_degree needs samples >= 2");
  }
  if (is_probe_method(method)) {
    if (!weak_hidden_states) {
      throw fail(std::string(to_string(method)) +
                 " needs hidden states, which the weak endpoint does not provide");
    }
    if (!probe_path) throw fail("probe methods need a probe file");
  }
  if (max_tokens < 1) throw fail("max_tokens must be >= 1");
}

namespace {

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

Endpoint endpoint_from_json(const json& j, const char* name) {
  if (!j.is_object()) throw Error(ErrorCode::kConfigError, std::string(name) + " must be an object");
  Endpoint e;
  e.url = j.value("url", "");
  e.model = j.value("model", "");
  e.api_key = j.value("api_key", "");
  return e;
}

}  // namespace

GatewayConfig gateway_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  try {
    GatewayConfig c;
    if (j.contains("weak")) c.weak = endpoint_from_json(j["weak"], "weak");
    if (j.contains("strong")) c.strong = endpoint_from_json(j["strong"], "strong");
    if (j.contains("method")) {
      auto m = method_from_string(j["method"].get<std::string>());
      if (!m) throw Error(ErrorCode::kConfigError, "unknown method");
      c.method = *m;
    }
    if (j.contains("threshold")) c.threshold = j["threshold"].get<double>();
    if (j.contains("calibration")) {
      const auto& cal = j["calibration"];
      c.calibration_manifest = resolve(base_dir, cal.at("manifest").get<std::string>());
      c.target_ratio = cal.at("target_ratio").get<double>();
    }
    c.samples = j.value("samples", c.samples);
    c.sample_temperature = j.value("sample_temperature", c.sample_temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.top_logprobs = j.value("top_logprobs", c.top_logprobs);
    if (j.contains("timeouts")) {
      c.connect_timeout_ms = j["timeouts"].value("connect_ms", c.connect_timeout_ms);
      c.read_timeout_ms = j["timeouts"].value("read_ms", c.read_timeout_ms);
    }
    if (j.contains("fallback")) {
      const auto f = j["fallback"].get<std::string>();
      if (f == "serve_weak") {
        c.fallback = FallbackPolicy::kServeWeak;
      } else if (f == "error") {
        c.fallback = FallbackPolicy::kError;
      } else {
        throw Error(ErrorCode::kConfigError, "fallback must be serve_weak or error");
      }
    }
    if (j.contains("trace_log")) c.trace_log = resolve(base_dir, j["trace_log"].get<std::string>());
    c.dataset = j.value("dataset", c.dataset);
    c.weak_hidden_states = j.value("weak_hidden_states", false);
    if (j.contains("probe")) c.probe_path = resolve(base_dir, j["probe"].get<std::string>());
    if (j.contains("templates")) {
      const auto& t = j["templates"];
      if (t.contains("p_true")) c.templates.p_true = read_text_file(resolve(base_dir, t["p_true"]));
      if (t.contains("verbalization_1s")) {
        c.templates.verbalization_1s = read_text_file(resolve(base_dir, t["verbalization_1s"]));
      }
      if (t.contains("verbalization_2s")) {
        c.templates.verbalization_2s = read_text_file(resolve(base_dir, t["verbalization_2s"]));
      }
    }
    if (j.contains("listen")) {
      c.listen_host = j["listen"].value("host", c.listen_host);
      c.listen_port = j["listen"].value("port", c.listen_port);
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
}

GatewayConfig load_gateway_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
  GatewayConfig c = gateway_config_from_json(j, path.parent_path());
  apply_env_overrides(c);
  return c;
}

void apply_env_overrides(GatewayConfig& c) {
  auto env = [](const char* name, std::string& field) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') field = v;
  };
  env("UQROUTE_WEAK_URL", c.weak.url);
  env("UQROUTE_WEAK_MODEL", c.weak.model);
  env("UQROUTE_WEAK_API_KEY", c.weak.api_key);
  env("UQROUTE_STRONG_URL", c.strong.url);
  env("UQROUTE_STRONG_MODEL", c.strong.model);
  env("UQROUTE_STRONG_API_KEY", c.strong.api_key);
}

// ---------------------------------------------------------------------------
// Chat client

ChatClient::ChatClient(Endpoint endpoint, int connect_timeout_ms, int read_timeout_ms)
    : endpoint_(std::move(endpoint)),
      connect_timeout_ms_(connect_timeout_ms),
      read_timeout_ms_(read_timeout_ms) {
  const auto scheme = endpoint_.url.find("://");
  const auto path_start =
      endpoint_.url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  host_ = endpoint_.url.substr(0, path_start);
  std::string base = path_start == std::string::npos ? "" : endpoint_.url.substr(path_start);
  while (!base.empty() && base.back() == '/') base.pop_back();
  path_ = (base.empty() ? std::string("/v1") : base) + "/chat/completions";
}

json chat_request_body(const Endpoint& endpoint, const ChatRequest& r) {
  json body = {
      {"messages", json::array({{{"role", "user"}, {"content", r.prompt}}})},
      {"temperature", r.temperature},
      {"top_p", r.top_p},
      {"max_tokens", r.max_tokens},
      {"stream", false},
  };
  if (!endpoint.model.empty()) body["model"] = endpoint.model;
  if (r.logprobs) {
    body["logprobs"] = true;
    if (r.top_logprobs > 0) body["top_logprobs"] = r.top_logprobs;
  }
  return body;
}

ChatResponse parse_chat_response(const json& body) {
  ChatResponse out;
  const auto& choices = body.at("choices");
  if (!choices.is_array() || choices.empty()) throw std::runtime_error("no choices");
  const auto& choice = choices[0];
  if (choice.contains("message") && choice["message"].contains("content") &&
      choice["message"]["content"].is_string()) {
    out.content = choice["message"]["content"].get<std::string>();
  } else if (choice.contains("text") && choice["text"].is_string()) {
    out.content = choice["text"].get<std::string>();
  }
  if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
      choice["logprobs"].contains("content") && choice["logprobs"]["content"].is_array()) {
    out.has_logprobs = true;
    for (const auto& t : choice["logprobs"]["content"]) {
      TokenLogprob tok;
      tok.token = t.value("token", "");
      tok.logprob = t.at("logprob").get<double>();
      if (t.contains("top_logprobs") && t["top_logprobs"].is_array()) {
        for (const auto& alt : t["top_logprobs"]) {
          tok.top.emplace_back(alt.value("token", ""), alt.at("logprob").get<double>());
        }
      }
      out.tokens.push_back(std::move(tok));
    }
  }
  if (choice.contains("hidden_state") && choice["hidden_state"].is_array()) {
    out.hidden_state = choice["hidden_state"].get<std::vector<double>>();
  }
  return out;
}

ChatResponse ChatClient::complete(const ChatRequest& request) const {
  httplib::Client client(host_);
  client.set_connection_timeout(std::chrono::milliseconds(connect_timeout_ms_));
  client.set_read_timeout(std::chrono::milliseconds(read_timeout_ms_));
  httplib::Headers headers;
  if (!endpoint_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint_.api_key);
  }
  const std::string body = chat_request_body(endpoint_, request).dump();
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    throw EndpointFailure(endpoint_.url + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw EndpointFailure(endpoint_.url + ": HTTP " + std::to_string(res->status));
  }
  try {
    return parse_chat_response(json::parse(res->body));
  } catch (const std::exception& e) {
    throw EndpointFailure(endpoint_.url + ": unreadable response: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Requests and results

RouteRequest route_request_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "body must be an object");
  RouteRequest r;
  if (!j.contains("query") || !j["query"].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "query (string) is required");
  }
  r.query = j["query"].get<std::string>();
  if (j.contains("answer_kind")) {
    if (!j["answer_kind"].is_string()) {
      throw Error(ErrorCode::kInvalidArgument, "answer_kind must be a string");
    }
    auto k = answer_kind_from_string(j["answer_kind"].get<std::string>());
    if (!k) throw Error(ErrorCode::kInvalidArgument, "unknown answer_kind");
    r.answer_kind = *k;
  }
  if (j.contains("options")) {
    if (!j["options"].is_array()) throw Error(ErrorCode::kInvalidArgument, "options must be an array");
    for (const auto& o : j["options"]) {
      if (!o.is_string()) throw Error(ErrorCode::kInvalidArgument, "options must be strings");
      r.options.push_back(o.get<std::string>());
    }
  }
  return r;
}

std::string_view to_string(AnswerSource source) {
  switch (source) {
    case AnswerSource::kSlm: return "slm";
    case AnswerSource::kLlm: return "llm";
    case AnswerSource::kSlmFallback: return "slm_fallback";
  }
  return "slm";
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const RouteResult& r) {
  json j = {
      {"answer", r.answer},
      {"source", std::string(to_string(r.source))},
      {"confidence", r.confidence},
      {"method", std::string(to_string(r.method))},
      {"threshold", finite_or_null(r.threshold)},
      {"latency_ms", {{"weak", r.weak_latency_ms}}},
      {"trace", trace_to_json(r.trace)},
  };
  if (r.strong_latency_ms) j["latency_ms"]["strong"] = *r.strong_latency_ms;
  if (r.warning) j["warning"] = *r.warning;
  return j;
}

json to_json(const ScoreResult& r) {
  return {{"confidence", r.confidence},
          {"method", std::string(to_string(r.method))},
          {"trace", trace_to_json(r.trace)}};
}

// ---------------------------------------------------------------------------
// Gateway

namespace {

std::string render_template(std::string tmpl, const std::string& question, const std::string& answer) {
  auto replace_all = [&](const std::string& key, const std::string& value) {
    for (std::size_t pos = 0; (pos = tmpl.find(key, pos)) != std::string::npos;) {
      tmpl.replace(pos, key.size(), value);
      pos += value.size();
    }
  };
  replace_all("{question}", question);
  replace_all("{answer}", answer);
  return tmpl;
}

std::string normalise_token(std::string_view tok) {
  std::string out;
  for (char c : tok) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u) || std::ispunct(u)) continue;
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

// Log-probs as the trace format requires them: finite and <= 0.
double sanitise_logprob(double lp) {
  if (!std::isfinite(lp)) return kLogprobFloor;
  return std::min(0.0, std::max(lp, kLogprobFloor));
}

// Log-prob of the token carrying the selected option: the first generated
// token naming one of the options, or the first non-blank token when the
// request lists none.
std::optional<double> option_logprob(const ChatResponse& r, const RouteRequest& req) {
  std::vector<std::string> wanted;
  if (req.answer_kind == AnswerKind::kTrueFalse && req.options.empty()) {
    wanted = {"true", "false"};
  }
  for (const auto& o : req.options) wanted.push_back(normalise_token(o));
  for (const auto& t : r.tokens) {
    const std::string norm = normalise_token(t.token);
    if (norm.empty()) continue;
    if (wanted.empty() || std::find(wanted.begin(), wanted.end(), norm) != wanted.end()) {
      return sanitise_logprob(t.logprob);
    }
  }
  return std::nullopt;
}

// Best log-prob for "True" and "False" on the first generated token. A
// word missing from the top list is bounded by the smallest listed value.
std::optional<TrueFalseLogprobs> true_false_from(const ChatResponse& r) {
  if (r.tokens.empty()) return std::nullopt;
  const auto& first = r.tokens.front();
  std::vector<std::pair<std::string, double>> candidates = first.top;
  candidates.emplace_back(first.token, first.logprob);
  std::optional<double> lt, lf;
  double smallest = 0.0;
  for (const auto& [tok, lp] : candidates) {
    smallest = std::min(smallest, lp);
    const std::string norm = normalise_token(tok);
    if (norm == "true") lt = std::max(lt.value_or(-INFINITY), lp);
    if (norm == "false") lf = std::max(lf.value_or(-INFINITY), lp);
  }
  if (!lt && !lf) return std::nullopt;
  return TrueFalseLogprobs{sanitise_logprob(lt.value_or(smallest)),
                           sanitise_logprob(lf.value_or(smallest))};
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Gateway::Gateway(GatewayConfig config)
    : config_(std::move(config)),
      weak_(config_.weak, config_.connect_timeout_ms, config_.read_timeout_ms),
      strong_(config_.strong, config_.connect_timeout_ms, config_.read_timeout_ms) {
  config_.validate();
  if (config_.threshold) {
    threshold_ = *config_.threshold;
  } else {
    threshold_ = transfer_threshold(read_calibration(*config_.calibration_manifest),
                                    config_.target_ratio);
  }
  if (is_probe_method(config_.method)) probe_ = load_probe(*config_.probe_path);
  if (!config_.trace_log.empty()) {
    log_.open(config_.trace_log, std::ios::app);
    if (!log_) throw Error(ErrorCode::kConfigError, "cannot open " + config_.trace_log.string());
  }
  const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  id_prefix_ = "gw-" + std::to_string(now) + "-";
}

Gateway::Evidence Gateway::gather(const RouteRequest& request) {
  Evidence ev;
  InferenceTrace& t = ev.trace;
  t.id = id_prefix_ + std::to_string(sequence_.fetch_add(1));
  t.dataset = config_.dataset;
  t.prompt = request.query;
  t.answer_kind = request.answer_kind;

  const Method m = config_.method;
  const auto start = std::chrono::steady_clock::now();
  auto call = [&](const ChatRequest& r) {
    try {
      return weak_.complete(r);
    } catch (const EndpointFailure& e) {
      throw Error(ErrorCode::kWeakEndpointUnavailable, e.what());
    }
  };

  ChatRequest primary;
  primary.prompt = m == Method::kVerbalization1s
                       ? render_template(config_.templates.verbalization_1s, request.query, "")
                       : request.query;
  primary.temperature = config_.temperature;
  primary.top_p = config_.top_p;
  primary.max_tokens = config_.max_tokens;
  primary.logprobs = true;
  const ChatResponse first = call(primary);
  t.response = first.content;
  for (const auto& tok : first.tokens) t.token_logprobs.push_back(sanitise_logprob(tok.logprob));
  if (request.answer_kind != AnswerKind::kFreeForm) {
    t.chosen_option_logprob = option_logprob(first, request);
  }
  if (first.hidden_state && first.hidden_state->size() <= kMaxHiddenDim) {
    t.hidden_state = first.hidden_state;
  }
  if (m == Method::kVerbalization1s) t.verbal_confidence_text = first.content;

  if (m == Method::kPTrue) {
    ChatRequest follow;
    follow.prompt = render_template(config_.templates.p_true, request.query, first.content);
    follow.temperature = config_.temperature;
    follow.top_p = config_.top_p;
    follow.max_tokens = 1;
    follow.logprobs = true;
    follow.top_logprobs = config_.top_logprobs;
    t.true_false_logprobs = true_false_from(call(follow));
  } else if (m == Method::kVerbalization2s) {
    ChatRequest follow;
    follow.prompt = render_template(config_.templates.verbalization_2s, request.query, first.content);
    follow.temperature = config_.temperature;
    follow.top_p = config_.top_p;
    follow.max_tokens = 32;
    t.verbal_confidence_text = call(follow).content;
  } else if (m == Method::kJaccardDegree) {
    std::vector<std::string> samples;
    for (int s = 0; s < config_.samples; ++s) {
      ChatRequest r;
      r.prompt = request.query;
      r.temperature = config_.sample_temperature;
      r.top_p = config_.top_p;
      r.max_tokens = config_.max_tokens;
      samples.push_back(call(r).content);
    }
    t.samples = std::move(samples);
  }
  ev.latency_ms = elapsed_ms(start);
  return ev;
}

double Gateway::confidence_for(const InferenceTrace& trace) const {
  const Method m = config_.method;
  if ((m == Method::kPerplexity ||
       (m == Method::kAvgTokenProb && trace.answer_kind == AnswerKind::kFreeForm)) &&
      trace.token_logprobs.empty()) {
    throw Error(ErrorCode::kScoringFailed, "token_logprobs absent");
  }
  try {
    return score_trace(trace, m, probe_ ? &*probe_ : nullptr).value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMissingField) {
      throw Error(ErrorCode::kScoringFailed, e.detail() + " absent");
    }
    if (e.code() == ErrorCode::kNonCompliant || e.code() == ErrorCode::kDimensionMismatch) {
      throw Error(ErrorCode::kScoringFailed, e.what());
    }
    throw;
  }
}

void Gateway::append_trace(const InferenceTrace& trace) {
  if (!log_.is_open()) return;
  const std::string line = serialize_trace(trace);
  std::lock_guard<std::mutex> lock(log_mutex_);
  log_ << line << '\n';
  log_.flush();
}

ScoreResult Gateway::score(const RouteRequest& request) {
  Evidence ev = gather(request);
  ScoreResult out;
  out.method = config_.method;
  out.confidence = confidence_for(ev.trace);
  out.trace = std::move(ev.trace);
  return out;
}

RouteResult Gateway::route(const RouteRequest& request) {
  Evidence ev = gather(request);
  RouteResult out;
  out.method = config_.method;
  out.threshold = threshold_;
  out.weak_latency_ms = ev.latency_ms;
  try {
    out.confidence = confidence_for(ev.trace);
  } catch (...) {
    append_trace(ev.trace);
    throw;
  }
  out.answer = ev.trace.response;
  out.source = AnswerSource::kSlm;

  if (should_route(out.confidence, threshold_)) {
    ChatRequest r;
    r.prompt = request.query;
    r.temperature = config_.temperature;
    r.top_p = config_.top_p;
    r.max_tokens = config_.max_tokens;
    const auto start = std::chrono::steady_clock::now();
    try {
      out.answer = strong_.complete(r).content;
      out.source = AnswerSource::kLlm;
      out.strong_latency_ms = elapsed_ms(start);
    } catch (const EndpointFailure& e) {
      out.strong_latency_ms = elapsed_ms(start);
      if (config_.fallback == FallbackPolicy::kError) {
        append_trace(ev.trace);
        throw Error(ErrorCode::kStrongEndpointUnavailable, e.what());
      }
      out.source = AnswerSource::kSlmFallback;
      out.warning = std::string("strong endpoint unavailable: ") + e.what();
    }
  }
  append_trace(ev.trace);
  out.trace = std::move(ev.trace);
  return out;
}

// ---------------------------------------------------------------------------
// HTTP front end

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 400;
    case ErrorCode::kScoringFailed: return 422;
    case ErrorCode::kWeakEndpointUnavailable:
    case ErrorCode::kStrongEndpointUnavailable: return 502;
    default: return 500;
  }
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", {{"code", code}, {"message", message}}}}.dump(),
                  "application/json");
}

template <typename Handler>
void handle_json(const httplib::Request& req, httplib::Response& res, Handler&& handler) {
  try {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      send_error(res, 400, "InvalidArgument", e.what());
      return;
    }
    res.set_content(handler(route_request_from_json(body)).dump(), "application/json");
  } catch (const Error& e) {
    send_error(res, status_for(e.code()), to_string(e.code()), e.detail());
  } catch (const std::exception& e) {
    send_error(res, 500, "Internal", e.what());
  }
}

}  // namespace

GatewayServer::GatewayServer(Gateway& gateway)
    : gateway_(gateway), server_(std::make_unique<httplib::Server>()) {
  server_->Post("/v1/route", [this](const httplib::Request& req, httplib::Response& res) {
    handle_json(req, res, [this](const RouteRequest& r) { return to_json(gateway_.route(r)); });
  });
  server_->Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
    handle_json(req, res, [this](const RouteRequest& r) { return to_json(gateway_.score(r)); });
  });
  server_->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"status", "ok"},
                         {"method", std::string(to_string(gateway_.config().method))},
                         {"threshold", finite_or_null(gateway_.threshold())}}
                        .dump(),
                    "application/json");
  });
}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool GatewayServer::listen() { return server_->listen_after_bind(); }

void GatewayServer::stop() {
  if (server_) server_->stop();
}

}  // namespace uqroute
