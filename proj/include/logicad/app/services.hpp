#pragma once

#include <memory>

#include "logicad/app/config.hpp"
#include "logicad/app/pipeline.hpp"
#include "logicad/io/cached_clients.hpp"
#include "logicad/io/http_clients.hpp"

namespace logicad::app {

// Cached clients wired to the configured endpoints. In replay mode no live
// transport is attached, so a cache miss is a MissingFixture error.
class ServiceStack {
 public:
  explicit ServiceStack(const RunConfig& cfg) : rr_(cfg.cache_dir, cfg.mode, cfg.retry) {
    if (!cfg.timestamp.empty()) rr_.set_timestamp(cfg.timestamp);
    const bool live = cfg.mode == io::Mode::Live;
    io::LiveDescribe vision_live, llm_live;
    io::LiveDetect roi_live;
    io::LiveEmbed embed_live;
    if (live) {
      const auto v = cfg.vision, l = cfg.llm, e = cfg.embedding, r = cfg.roi;
      vision_live = [v](const io::Bytes& img, const std::string& p, std::uint64_t s) { return io::chat_describe(v, img, p, s); };
      llm_live = [l](const io::Bytes& img, const std::string& p, std::uint64_t s) { return io::chat_describe(l, img, p, s); };
      roi_live = [r](const io::Bytes& img, const std::vector<std::string>& ps) { return io::remote_detect(r, img, ps); };
      embed_live = [e](const std::string& t) { return io::remote_embedding(e, t); };
    }
    vision_ = std::make_unique<io::CachedVisionClient>(rr_, "vision", cfg.vision.model, vision_live);
    llm_ = std::make_unique<io::CachedVisionClient>(rr_, "llm", cfg.llm.model, llm_live);
    roi_ = std::make_unique<io::CachedRoiClient>(rr_, cfg.roi.model, roi_live);
    embed_ = std::make_unique<io::CachedEmbeddingClient>(rr_, cfg.embedding.model, embed_live);
  }

  Services services() { return Services{*vision_, *llm_, *roi_, *embed_}; }
  io::RecordReplay& record_replay() { return rr_; }

 private:
  io::RecordReplay rr_;
  std::unique_ptr<io::CachedVisionClient> vision_, llm_;
  std::unique_ptr<io::CachedRoiClient> roi_;
  std::unique_ptr<io::CachedEmbeddingClient> embed_;
};

}  // namespace logicad::app
