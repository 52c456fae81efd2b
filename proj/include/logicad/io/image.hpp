#pragma once

#include <zlib.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "logicad/error.hpp"
#include "logicad/extraction/clients.hpp"
#include "logicad/forge/task_spec.hpp"

namespace logicad::io {

// PNG with stored (uncompressed) deflate blocks. The bytes depend only on
// the pixels, so crops hash identically whatever zlib or OpenCV build runs
// the pipeline.
inline std::string encode_png(const cv::Mat& bgr) {
  if (bgr.empty() || bgr.type() != CV_8UC3) throw DegenerateInput("expected a non-empty 8-bit BGR image");
  const auto w = static_cast<std::uint32_t>(bgr.cols), h = static_cast<std::uint32_t>(bgr.rows);
  std::string raw;
  raw.reserve(static_cast<std::size_t>(h) * (3 * w + 1));
  for (int y = 0; y < bgr.rows; ++y) {
    raw += '\0';  // filter: none
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      raw += static_cast<char>(row[x][2]);
      raw += static_cast<char>(row[x][1]);
      raw += static_cast<char>(row[x][0]);
    }
  }
  auto be32 = [](std::string& s, std::uint32_t v) {
    for (int i = 3; i >= 0; --i) s += static_cast<char>((v >> (8 * i)) & 0xFF);
  };
  std::string out("\x89PNG\r\n\x1a\n", 8);
  auto chunk = [&](const char* type, const std::string& data) {
    be32(out, static_cast<std::uint32_t>(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    be32(out, static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()))));
  };
  std::string ihdr;
  be32(ihdr, w);
  be32(ihdr, h);
  ihdr += std::string("\x08\x02\x00\x00\x00", 5);  // 8-bit RGB
  chunk("IHDR", ihdr);

  std::string z("\x78\x01", 2);
  std::size_t pos = 0;
  do {
    const std::size_t n = std::min<std::size_t>(65535, raw.size() - pos);
    const bool last = pos + n == raw.size();
    z += static_cast<char>(last ? 1 : 0);
    z += static_cast<char>(n & 0xFF);
    z += static_cast<char>(n >> 8);
    z += static_cast<char>(~n & 0xFF);
    z += static_cast<char>((~n >> 8) & 0xFF);
    z.append(raw, pos, n);
    pos += n;
  } while (pos < raw.size());
  be32(z, static_cast<std::uint32_t>(adler32(1L, reinterpret_cast<const Bytef*>(raw.data()), static_cast<uInt>(raw.size()))));
  chunk("IDAT", z);
  chunk("IEND", "");
  return out;
}

inline cv::Mat decode_image(const std::string& bytes) {
  std::vector<unsigned char> buf(bytes.begin(), bytes.end());
  cv::Mat m = cv::imdecode(buf, cv::IMREAD_COLOR);
  if (m.empty()) throw DegenerateInput("image bytes could not be decoded");
  return m;
}

inline extraction::Image load_image(const std::filesystem::path& path) {
  extraction::Image img;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read image " + path.string());
  img.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  const cv::Mat m = decode_image(img.bytes);
  img.width = m.cols;
  img.height = m.rows;
  return img;
}

inline std::string crop_png(const cv::Mat& bgr, const extraction::Box& b) {
  if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0 || b.x + b.w > bgr.cols || b.y + b.h > bgr.rows)
    throw DegenerateInput("crop box outside the image");
  return encode_png(bgr(cv::Rect(b.x, b.y, b.w, b.h)).clone());
}

}  // namespace logicad::io
