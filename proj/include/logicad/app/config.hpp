#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logicad/error.hpp"
#include "logicad/extraction/lof.hpp"
#include "logicad/forge/task_spec.hpp"
#include "logicad/io/cache.hpp"
#include "logicad/io/endpoint.hpp"

namespace logicad::app {

struct RunConfig {
  io::Mode mode = io::Mode::Replay;
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path taskspec_dir = "taskspecs";
  io::Endpoint vision{"https://api.openai.com/v1", "gpt-4o"};
  io::Endpoint llm{"https://api.openai.com/v1", "gpt-4o"};
  io::Endpoint embedding{"https://api.openai.com/v1", "text-embedding-3-large"};
  io::Endpoint roi{"http://localhost:8000/detect", "grounding-dino"};
  std::size_t k = 3;
  std::optional<std::size_t> lof_k;  // default min(2, k - 1)
  double lof_threshold = 1.5;
  std::size_t padding = 1;
  extraction::SelectPolicy select = extraction::SelectPolicy::Random;
  std::vector<std::uint64_t> seeds{0};
  bool gcot = true;
  bool roi_enabled = true;
  bool format_embedding = true;
  bool logic_reasoner = true;
  std::size_t workers = 4;
  io::RetryPolicy retry;
  std::string timestamp;  // fixed cache timestamp, for reproducible fixture files

  std::size_t effective_lof_k() const { return lof_k ? *lof_k : std::min<std::size_t>(2, k > 1 ? k - 1 : 1); }

  void validate() const {
    if (k < 1) throw ConfigError("k must be at least 1");
    if (lof_k && *lof_k < 1) throw ConfigError("lof_k must be at least 1");
    if (!(lof_threshold > 0)) throw ConfigError("lof_threshold must be positive");
    if (seeds.empty()) throw ConfigError("seeds must not be empty");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (retry.attempts < 1) throw ConfigError("retry_attempts must be at least 1");
    if (!format_embedding && !logic_reasoner) throw ConfigError("enable at least one of format_embedding and logic_reasoner");
    if (mode == io::Mode::Replay && cache_dir.empty()) throw ConfigError("replay mode needs cache_dir");
  }
};

namespace detail {

struct Value {
  enum Kind { String, Integer, Float, Bool, IntArray } kind = String;
  std::string s;
  std::int64_t i = 0;
  double f = 0;
  bool b = false;
  std::vector<std::int64_t> a;
  std::size_t line = 0;
};

inline std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

inline std::int64_t parse_int(const std::string& s, const std::string& where) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(where + "not an integer: " + s);
  return v;
}

inline Value parse_value(const std::string& raw, const std::string& where) {
  Value v;
  const std::string t = forge::detail::trim(raw);
  if (t.empty()) throw ConfigError(where + "missing value");
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') throw ConfigError(where + "unterminated string");
    v.kind = Value::String;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
      if (t[i] == '\\' && i + 2 < t.size()) {
        const char c = t[++i];
        v.s += c == 'n' ? '\n' : c == 't' ? '\t' : c;
      } else {
        v.s += t[i];
      }
    }
    return v;
  }
  if (t == "true" || t == "false") {
    v.kind = Value::Bool;
    v.b = t == "true";
    return v;
  }
  if (t.front() == '[') {
    if (t.back() != ']') throw ConfigError(where + "unterminated array");
    v.kind = Value::IntArray;
    std::string item;
    const std::string body = t.substr(1, t.size() - 2);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto comma = body.find(',', pos);
      if (comma == std::string::npos) comma = body.size();
      item = forge::detail::trim(body.substr(pos, comma - pos));
      if (!item.empty()) v.a.push_back(parse_int(item, where));
      pos = comma + 1;
    }
    return v;
  }
  if (t.find_first_of(".eE") != std::string::npos) {
    v.kind = Value::Float;
    try {
      std::size_t used = 0;
      v.f = std::stod(t, &used);
      if (used != t.size()) throw ConfigError(where + "not a number: " + t);
    } catch (const std::logic_error&) {
      throw ConfigError(where + "not a number: " + t);
    }
    return v;
  }
  v.kind = Value::Integer;
  v.i = parse_int(t, where);
  v.f = static_cast<double>(v.i);
  return v;
}

}  // namespace detail

// Flat `key = value` file: strings in double quotes, integers, floats,
// true/false and integer arrays. Relative paths resolve against `base`.
inline RunConfig parse_config(const std::string& text, const std::filesystem::path& base = {}, const std::string& fname = "config") {
  std::map<std::string, detail::Value> kv;
  std::size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = forge::detail::trim(detail::strip_comment(text.substr(pos, nl - pos)));
    pos = nl + 1;
    ++lineno;
    if (line.empty()) continue;
    const std::string where = fname + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') throw ConfigError(where + "sections are not supported; the config is flat");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = forge::detail::trim(line.substr(0, eq));
    auto v = detail::parse_value(line.substr(eq + 1), where);
    v.line = lineno;
    if (!kv.emplace(key, v).second) throw ConfigError(where + "duplicate key " + key);
  }

  RunConfig c;
  auto where = [&](const std::string& key) { return fname + ":" + std::to_string(kv.at(key).line) + ": "; };
  auto str = [&](const std::string& key) {
    if (kv.at(key).kind != detail::Value::String) throw ConfigError(where(key) + key + " must be a string");
    return kv.at(key).s;
  };
  auto uint = [&](const std::string& key) {
    const auto& v = kv.at(key);
    if (v.kind != detail::Value::Integer || v.i < 0) throw ConfigError(where(key) + key + " must be a non-negative integer");
    return static_cast<std::size_t>(v.i);
  };
  auto num = [&](const std::string& key) {
    const auto& v = kv.at(key);
    if (v.kind != detail::Value::Integer && v.kind != detail::Value::Float) throw ConfigError(where(key) + key + " must be a number");
    return v.f;
  };
  auto flag = [&](const std::string& key) {
    if (kv.at(key).kind != detail::Value::Bool) throw ConfigError(where(key) + key + " must be true or false");
    return kv.at(key).b;
  };
  auto path = [&](const std::string& key) {
    std::filesystem::path p = str(key);
    return p.is_relative() && !base.empty() ? base / p : p;
  };

  for (const auto& [key, v] : kv) {
    if (key == "mode") c.mode = io::parse_mode(str(key));
    else if (key == "cache_dir") c.cache_dir = path(key);
    else if (key == "taskspec_dir") c.taskspec_dir = path(key);
    else if (key == "vision_endpoint") c.vision.url = str(key);
    else if (key == "vision_model") c.vision.model = str(key);
    else if (key == "llm_endpoint") c.llm.url = str(key);
    else if (key == "llm_model") c.llm.model = str(key);
    else if (key == "embedding_endpoint") c.embedding.url = str(key);
    else if (key == "embedding_model") c.embedding.model = str(key);
    else if (key == "roi_endpoint") c.roi.url = str(key);
    else if (key == "roi_model") c.roi.model = str(key);
    else if (key == "k") c.k = uint(key);
    else if (key == "lof_k") c.lof_k = uint(key);
    else if (key == "lof_threshold") c.lof_threshold = num(key);
    else if (key == "padding") c.padding = uint(key);
    else if (key == "select") {
      const auto s = str(key);
      if (s == "random") c.select = extraction::SelectPolicy::Random;
      else if (s == "min-lof") c.select = extraction::SelectPolicy::MinLof;
      else throw ConfigError(where(key) + "select must be random or min-lof");
    } else if (key == "seeds") {
      if (v.kind != detail::Value::IntArray) throw ConfigError(where(key) + "seeds must be an integer array");
      c.seeds.clear();
      for (auto s : v.a) {
        if (s < 0) throw ConfigError(where(key) + "seeds must be non-negative");
        c.seeds.push_back(static_cast<std::uint64_t>(s));
      }
    } else if (key == "gcot") c.gcot = flag(key);
    else if (key == "roi") c.roi_enabled = flag(key);
    else if (key == "format_embedding") c.format_embedding = flag(key);
    else if (key == "logic_reasoner") c.logic_reasoner = flag(key);
    else if (key == "workers") c.workers = uint(key);
    else if (key == "retry_attempts") c.retry.attempts = static_cast<int>(uint(key));
    else if (key == "retry_backoff_ms") c.retry.backoff = std::chrono::milliseconds(uint(key));
    else if (key == "timeout_s") {
      const int t = static_cast<int>(uint(key));
      c.vision.timeout_s = c.llm.timeout_s = c.embedding.timeout_s = c.roi.timeout_s = t;
    } else if (key == "timestamp") c.timestamp = str(key);
    else throw ConfigError(where(key) + "unknown key " + key);
  }
  // Secrets come from the environment only.
  const std::string api_key = io::api_key_from_env();
  c.vision.api_key = c.llm.api_key = c.embedding.api_key = c.roi.api_key = api_key;
  return c;
}

inline RunConfig load_config(const std::filesystem::path& p) {
  std::string text;
  try {
    text = forge::read_text_file(p);
  } catch (const SpecError&) {
    throw ConfigError("cannot read config " + p.string());
  }
  return parse_config(text, p.parent_path(), p.string());
}

}  // namespace logicad::app
