#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logicad/error.hpp"
#include "logicad/extraction/clients.hpp"
#include "logicad/extraction/lof.hpp"

namespace logicad::extraction {

inline constexpr const char* kStandardPrompt = "Describe this image in detail.";

// Detected crops, ordered by prompt then score, followed by the full image.
// With the ROI stage off only the full image is returned.
inline std::vector<Region> extract_rois(const Image& image, const std::vector<std::string>& prompts, RoiClient* roi) {
  std::vector<Region> out;
  if (roi != nullptr) {
    if (prompts.empty()) throw SpecError("ROI stage enabled but the task spec has no [features] prompts");
    out = roi->detect(image.bytes, prompts);
    for (const auto& r : out) {
      const Box& b = r.box;
      if (b.x < 0 || b.y < 0 || b.w <= 0 || b.h <= 0 || b.x + b.w > image.width || b.y + b.h > image.height) {
        throw ServiceError("RoiServiceError", "detection box outside the image", false);
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const Region& a, const Region& b) {
      if (a.prompt != b.prompt) return a.prompt < b.prompt;
      return a.score > b.score;
    });
  }
  out.push_back(Region{Box{0, 0, image.width, image.height}, image.bytes, "", 1.0});
  return out;
}

inline std::string region_header(const Region& r, std::size_t index, std::size_t count) {
  if (r.prompt.empty()) return "[full image]";
  const Box& b = r.box;
  return "[region " + std::to_string(index + 1) + "/" + std::to_string(count) + ": " + r.prompt + " at " + std::to_string(b.x) +
         "," + std::to_string(b.y) + " " + std::to_string(b.w) + "x" + std::to_string(b.h) + "]";
}

struct Candidate {
  std::string text;
  std::vector<double> embedding;
  double lof = 1.0;
  std::uint64_t seed = 0;
};

struct DescriptionSet {
  std::vector<Candidate> candidates;
  std::size_t selected = 0;
  std::size_t lof_k = 0;  // 0 when K = 1 and filtering is skipped

  std::size_t k() const { return candidates.size(); }
  const std::string& selected_text() const { return candidates.at(selected).text; }
};

// K candidates with seeds seed..seed+K-1. A candidate is every region's
// response in region order; headers are added only when there is more than
// one region.
inline DescriptionSet generate_descriptions(const std::vector<Region>& regions, const std::string& prompt, VisionClient& vision,
                                            std::size_t K, std::uint64_t seed) {
  if (K < 1) throw DegenerateInput("K must be at least 1");
  if (regions.empty()) throw DegenerateInput("no regions to describe");
  DescriptionSet ds;
  for (std::size_t k = 0; k < K; ++k) {
    Candidate c;
    c.seed = seed + k;
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const std::string reply = vision.describe(regions[i].crop, prompt, c.seed);
      if (regions.size() == 1) {
        c.text = reply;
        break;
      }
      if (!c.text.empty()) c.text += "\n\n";
      c.text += region_header(regions[i], i, regions.size()) + "\n" + reply;
    }
    ds.candidates.push_back(std::move(c));
  }
  return ds;
}

// Embeds every candidate, scores it with LOF and picks one survivor.
// lof_k is capped at K-1.
inline void filter_and_select(DescriptionSet& ds, EmbeddingClient& embedder, std::size_t lof_k, double threshold, std::uint64_t seed,
                              SelectPolicy policy = SelectPolicy::Random) {
  if (ds.candidates.empty()) throw DegenerateInput("empty description set");
  for (auto& c : ds.candidates) c.embedding = embedder.embed(c.text);
  if (ds.k() == 1) {
    ds.candidates[0].lof = 1.0;
    ds.selected = 0;
    ds.lof_k = 0;
    return;
  }
  ds.lof_k = std::clamp<std::size_t>(lof_k, 1, ds.k() - 1);
  std::vector<Vector> pts;
  for (const auto& c : ds.candidates) pts.push_back(c.embedding);
  const auto lof = lof_scores(pts, ds.lof_k);
  for (std::size_t i = 0; i < lof.size(); ++i) ds.candidates[i].lof = lof[i];
  ds.selected = filter_and_select(lof, threshold, seed, policy);
}

inline nlohmann::ordered_json to_json(const DescriptionSet& ds, bool with_embeddings = false) {
  nlohmann::ordered_json j;
  j["k"] = ds.k();
  j["lof_k"] = ds.lof_k;
  j["selected"] = ds.selected;
  auto& cs = j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : ds.candidates) {
    nlohmann::ordered_json cj;
    cj["seed"] = c.seed;
    // +inf is not representable in JSON.
    if (std::isfinite(c.lof)) {
      cj["lof"] = c.lof;
    } else {
      cj["lof"] = "inf";
    }
    cj["text"] = c.text;
    if (with_embeddings) cj["embedding"] = c.embedding;
    cs.push_back(cj);
  }
  return j;
}

}  // namespace logicad::extraction
