#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logicad/embedding/score.hpp"
#include "logicad/extraction/clients.hpp"
#include "logicad/io/cache.hpp"
#include "logicad/io/image.hpp"

namespace logicad::io {

using extraction::Bytes;

using LiveDescribe = std::function<std::string(const Bytes&, const std::string&, std::uint64_t)>;
using LiveDetect = std::function<std::string(const Bytes&, const std::vector<std::string>&)>;
using LiveEmbed = std::function<std::string(const std::string&)>;

// Vision and text-mode language model calls. `client` is "vision" or "llm".
class CachedVisionClient : public extraction::VisionClient {
 public:
  CachedVisionClient(RecordReplay& rr, std::string client, std::string model, LiveDescribe live = {})
      : rr_(rr), client_(std::move(client)), model_(std::move(model)), live_(std::move(live)) {}

  std::string describe(const Bytes& image, const std::string& prompt, std::uint64_t seed) override {
    Request req{client_, model_, prompt, image, seed};
    std::function<std::string()> fn;
    if (live_) fn = [&] { return live_(image, prompt, seed); };
    return rr_.call(req, "VisionServiceError", fn);
  }

 private:
  RecordReplay& rr_;
  std::string client_, model_;
  LiveDescribe live_;
};

// Detections are recorded as JSON, {"detections":[{"box":[x,y,w,h],
// "prompt":..., "score":...}]}; crops are cut locally.
class CachedRoiClient : public extraction::RoiClient {
 public:
  CachedRoiClient(RecordReplay& rr, std::string model, LiveDetect live = {}) : rr_(rr), model_(std::move(model)), live_(std::move(live)) {}

  std::vector<extraction::Region> detect(const Bytes& image, const std::vector<std::string>& prompts) override {
    std::string joined;
    for (const auto& p : prompts) joined += p + "\n";
    Request req{"roi", model_, joined, image, 0};
    std::function<std::string()> fn;
    if (live_) fn = [&] { return live_(image, prompts); };
    const std::string text = rr_.call(req, "RoiServiceError", fn);
    return regions_from_json(text, image);
  }

  static std::vector<extraction::Region> regions_from_json(const std::string& text, const Bytes& image) {
    const cv::Mat m = decode_image(image);
    std::vector<extraction::Region> out;
    try {
      const auto j = nlohmann::json::parse(text);
      for (const auto& d : j.at("detections")) {
        const auto& b = d.at("box");
        int x = static_cast<int>(b.at(0).get<double>()), y = static_cast<int>(b.at(1).get<double>());
        int w = static_cast<int>(b.at(2).get<double>()), h = static_cast<int>(b.at(3).get<double>());
        // Detectors may overshoot the border by a pixel or two.
        const int x1 = std::clamp(x + w, 0, m.cols), y1 = std::clamp(y + h, 0, m.rows);
        x = std::clamp(x, 0, m.cols);
        y = std::clamp(y, 0, m.rows);
        if (x1 <= x || y1 <= y) continue;
        extraction::Region r;
        r.box = {x, y, x1 - x, y1 - y};
        r.prompt = d.at("prompt").get<std::string>();
        r.score = d.value("score", 0.0);
        r.crop = crop_png(m, r.box);
        out.push_back(std::move(r));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ServiceError("RoiServiceError", std::string("malformed detection response: ") + e.what(), false);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.prompt != b.prompt ? a.prompt < b.prompt : a.score > b.score;
    });
    return out;
  }

 private:
  RecordReplay& rr_;
  std::string model_;
  LiveDetect live_;
};

// Responses are JSON arrays of numbers, re-normalized on the way out.
class CachedEmbeddingClient : public extraction::EmbeddingClient {
 public:
  CachedEmbeddingClient(RecordReplay& rr, std::string model, LiveEmbed live = {}) : rr_(rr), model_(std::move(model)), live_(std::move(live)) {}

  std::vector<double> embed(const std::string& text) override {
    Request req{"embedding", model_, text, "", 0};
    std::function<std::string()> fn;
    if (live_) fn = [&] { return live_(text); };
    const std::string body = rr_.call(req, "EmbeddingServiceError", fn);
    std::vector<double> v;
    try {
      v = nlohmann::json::parse(body).get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ServiceError("EmbeddingServiceError", std::string("malformed embedding: ") + e.what(), false);
    }
    return embedding::normalized(v);
  }

 private:
  RecordReplay& rr_;
  std::string model_;
  LiveEmbed live_;
};

}  // namespace logicad::io
