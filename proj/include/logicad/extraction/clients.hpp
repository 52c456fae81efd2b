#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace logicad::extraction {

// Image payloads are encoded file bytes (PNG/JPEG). An empty payload puts a
// vision client in text mode.
using Bytes = std::string;

struct Image {
  Bytes bytes;
  int width = 0;
  int height = 0;
};

class VisionClient {
 public:
  virtual ~VisionClient() = default;
  virtual std::string describe(const Bytes& image, const std::string& prompt, std::uint64_t seed) = 0;
};

struct Box {
  int x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const Box&, const Box&) = default;
};

struct Region {
  Box box;
  Bytes crop;
  std::string prompt;  // empty for the full image
  double score = 0.0;
};

class RoiClient {
 public:
  virtual ~RoiClient() = default;
  // Boxes inside the image, ordered by prompt then score descending.
  virtual std::vector<Region> detect(const Bytes& image, const std::vector<std::string>& prompts) = 0;
};

class EmbeddingClient {
 public:
  virtual ~EmbeddingClient() = default;
  // Unit-norm vector of a fixed dimension; equal texts give equal vectors.
  virtual std::vector<double> embed(const std::string& text) = 0;
};

}  // namespace logicad::extraction
