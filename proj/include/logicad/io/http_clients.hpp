#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "logicad/error.hpp"
#include "logicad/io/digest.hpp"
#include "logicad/io/endpoint.hpp"

namespace logicad::io {

namespace detail {

// Splits "https://host:port/base" into the origin and the base path.
inline std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint must start with http:// or https://: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, ""};
  std::string base = url.substr(slash);
  while (!base.empty() && base.back() == '/') base.pop_back();
  return {url.substr(0, slash), base};
}

inline nlohmann::json post_json(const Endpoint& ep, const std::string& route, const nlohmann::json& body, const std::string& code) {
  const auto [origin, base] = split_url(ep.url);
  httplib::Client cli(origin);
  cli.set_connection_timeout(std::chrono::seconds(ep.timeout_s));
  cli.set_read_timeout(std::chrono::seconds(ep.timeout_s));
  cli.set_write_timeout(std::chrono::seconds(ep.timeout_s));
  if (!ep.api_key.empty()) cli.set_bearer_token_auth(ep.api_key);
  auto res = cli.Post(base + route, body.dump(), "application/json");
  if (!res) throw ServiceError(code, ep.url + route + ": " + httplib::to_string(res.error()), true);
  if (res->status == 429 || res->status >= 500)
    throw ServiceError(code, ep.url + route + ": HTTP " + std::to_string(res->status), true);
  if (res->status != 200)
    throw ServiceError(code, ep.url + route + ": HTTP " + std::to_string(res->status) + " " + res->body.substr(0, 300), false);
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(code, ep.url + route + ": response is not JSON", false);
  }
}

inline std::string image_mime(const std::string& bytes) {
  if (bytes.rfind("\xFF\xD8", 0) == 0) return "image/jpeg";
  return "image/png";
}

}  // namespace detail

// Chat-completions request; an empty image sends a text-only message.
inline std::string chat_describe(const Endpoint& ep, const std::string& image, const std::string& prompt, std::uint64_t seed) {
  nlohmann::json content;
  if (image.empty()) {
    content = prompt;
  } else {
    content = nlohmann::json::array(
        {{{"type", "text"}, {"text", prompt}},
         {{"type", "image_url"}, {"image_url", {{"url", "data:" + detail::image_mime(image) + ";base64," + base64(image)}}}}});
  }
  nlohmann::json body{{"model", ep.model}, {"seed", seed}, {"messages", nlohmann::json::array({{{"role", "user"}, {"content", content}}})}};
  const auto j = detail::post_json(ep, "/chat/completions", body, "VisionServiceError");
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ServiceError("VisionServiceError", "chat response without message content", false);
  }
}

// Returns the vector as JSON text, the form stored in the cache.
inline std::string remote_embedding(const Endpoint& ep, const std::string& text) {
  const auto j = detail::post_json(ep, "/embeddings", {{"model", ep.model}, {"input", text}}, "EmbeddingServiceError");
  try {
    return j.at("data").at(0).at("embedding").dump();
  } catch (const nlohmann::json::exception&) {
    throw ServiceError("EmbeddingServiceError", "embedding response without data[0].embedding", false);
  }
}

// Open-vocabulary detector service: POST {"image": base64, "prompts": [...],
// "model": ...} answered with {"detections": [{"box":[x,y,w,h], "prompt", "score"}]}.
inline std::string remote_detect(const Endpoint& ep, const std::string& image, const std::vector<std::string>& prompts) {
  const auto [origin, path] = detail::split_url(ep.url);
  Endpoint root = ep;
  root.url = origin;
  const auto j = detail::post_json(root, path.empty() ? "/detect" : path,
                                   {{"model", ep.model}, {"image", base64(image)}, {"prompts", prompts}}, "RoiServiceError");
  if (!j.contains("detections") || !j["detections"].is_array())
    throw ServiceError("RoiServiceError", "detector response without a detections array", false);
  return nlohmann::json{{"detections", j["detections"]}}.dump();
}

}  // namespace logicad::io
