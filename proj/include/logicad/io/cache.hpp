#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "logicad/error.hpp"
#include "logicad/io/digest.hpp"

namespace logicad::io {

enum class Mode { Live, Replay };

inline Mode parse_mode(const std::string& s) {
  if (s == "live") return Mode::Live;
  if (s == "replay") return Mode::Replay;
  throw ConfigError("mode must be live or replay, got '" + s + "'");
}

struct Request {
  std::string client;  // "vision", "llm", "roi", "embedding"
  std::string model;
  std::string prompt;
  std::string image;  // raw bytes, may be empty
  std::uint64_t seed = 0;

  // SHA-256 over length-prefixed fields.
  std::string key() const {
    std::string buf;
    for (const std::string* f : {&client, &model, &prompt, &image}) {
      buf += std::to_string(f->size());
      buf += ':';
      buf += *f;
    }
    buf += std::to_string(seed);
    return sha256_hex(buf);
  }
};

struct Entry {
  std::string response;
  std::int64_t latency_ms = 0;
};

// One JSON file per request: <dir>/<sha256>.json. Reads are shared, writes go
// through a temporary file and a rename.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const std::string& key) const { return dir_ / (key + ".json"); }

  std::optional<Entry> get(const std::string& key) const {
    {
      std::shared_lock lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("corrupt cache entry " + path_for(key).string() + ": " + e.what());
    }
    Entry e{j.at("response").get<std::string>(), j.value("latency_ms", std::int64_t{0})};
    std::unique_lock lock(mu_);
    memo_.emplace(key, e);
    return e;
  }

  void put(const Request& req, const std::string& key, const Entry& e, const std::string& timestamp) {
    nlohmann::ordered_json j;
    j["key"] = key;
    j["client"] = req.client;
    j["model"] = req.model;
    j["prompt"] = req.prompt;
    j["image_sha256"] = req.image.empty() ? std::string() : sha256_hex(req.image);
    j["seed"] = req.seed;
    j["response"] = e.response;
    j["latency_ms"] = e.latency_ms;
    j["timestamp"] = timestamp;
    std::filesystem::create_directories(dir_);
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    const auto tmp = dir_ / (key + ".json.tmp" + tid.str());
    {
      std::ofstream out(tmp, std::ios::binary);
      out << j.dump(2) << "\n";
      if (!out) throw Error("CacheError", "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path_for(key));
    std::unique_lock lock(mu_);
    memo_[key] = e;
  }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, Entry> memo_;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds backoff{500};  // doubled after each failure
};

// Runs `fn`, retrying transient ServiceErrors with exponential backoff.
template <class F>
auto with_retry(const RetryPolicy& policy, F&& fn, const std::function<void(std::chrono::milliseconds)>& sleep = {}) {
  auto delay = policy.backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const ServiceError& e) {
      if (!e.transient() || attempt >= policy.attempts) throw;
    }
    if (sleep) {
      sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
    delay *= 2;
  }
}

// Sum of service latencies charged to the current thread. Replayed responses
// charge their recorded latency, so the total is the same in both modes.
class ServiceClock {
 public:
  static std::int64_t& total() {
    thread_local std::int64_t t = 0;
    return t;
  }
  static void reset() { total() = 0; }
};

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Every service call goes through here. Live mode reuses a cached response
// when one exists and otherwise calls the service and writes the response
// to the cache before returning it. Replay mode never calls out.
class RecordReplay {
 public:
  RecordReplay(std::filesystem::path dir, Mode mode, RetryPolicy retry = {}) : cache_(std::move(dir)), mode_(mode), retry_(retry) {}

  Mode mode() const { return mode_; }
  ResponseCache& cache() { return cache_; }
  void set_timestamp(std::string fixed) { fixed_timestamp_ = std::move(fixed); }
  void set_sleep(std::function<void(std::chrono::milliseconds)> s) { sleep_ = std::move(s); }
  // Overrides the measured latency of live calls (scripted backends).
  void set_latency_model(std::function<std::int64_t(const Request&, const std::string&)> f) { latency_model_ = std::move(f); }

  std::string call(const Request& req, const std::string& error_code, const std::function<std::string()>& live) {
    const std::string key = req.key();
    // Same-key requests are serialized so concurrent live calls never race
    // to record two different responses.
    std::lock_guard stripe(stripes_[std::hash<std::string>{}(key) % stripes_.size()]);
    if (auto hit = cache_.get(key)) {
      ServiceClock::total() += hit->latency_ms;
      return hit->response;
    }
    if (mode_ == Mode::Replay || !live) {
      throw MissingFixture("no recorded " + req.client + " response for key " + key + " (" + summary(req.prompt) + ")");
    }
    const auto start = std::chrono::steady_clock::now();
    std::string response;
    try {
      response = with_retry(retry_, live, sleep_);
    } catch (const ServiceError& e) {
      if (e.code() == error_code) throw;
      throw ServiceError(error_code, e.what(), e.transient());
    }
    const auto measured = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    const std::int64_t latency = latency_model_ ? latency_model_(req, response) : measured;
    Entry e{std::move(response), latency};
    cache_.put(req, key, e, fixed_timestamp_.empty() ? utc_timestamp() : fixed_timestamp_);
    ServiceClock::total() += e.latency_ms;
    return e.response;
  }

  // Records a response produced elsewhere (fixture generation).
  void record(const Request& req, const std::string& response, std::int64_t latency_ms) {
    cache_.put(req, req.key(), Entry{response, latency_ms}, fixed_timestamp_.empty() ? utc_timestamp() : fixed_timestamp_);
  }

 private:
  static std::string summary(const std::string& prompt) {
    std::string s = prompt.substr(0, 60);
    for (char& c : s)
      if (c == '\n') c = ' ';
    return prompt.size() > 60 ? s + "..." : s;
  }

  ResponseCache cache_;
  Mode mode_;
  RetryPolicy retry_;
  std::string fixed_timestamp_;
  std::function<void(std::chrono::milliseconds)> sleep_;
  std::function<std::int64_t(const Request&, const std::string&)> latency_model_;
  std::array<std::mutex, 64> stripes_;
};

}  // namespace logicad::io
