#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "logicad/app/manifest.hpp"
#include "logicad/app/pipeline.hpp"
#include "logicad/io/cache.hpp"
#include "logicad/io/image.hpp"
#include "logicad/metrics/metrics.hpp"

namespace logicad::app {

using Log = std::function<void(const std::string&)>;

namespace detail {

inline std::pair<std::string, std::string> describe_error(const std::exception& e) {
  if (const auto* le = dynamic_cast<const Error*>(&e)) return {le->code(), le->what()};
  return {"InternalError", e.what()};
}

}  // namespace detail

// One pass over the manifest's test images with one seed. Reports come back
// in manifest order whatever order the workers finish in; failures become
// error rows.
inline std::vector<reasoner::AnomalyReport> run_seed(const Manifest& manifest, const RunConfig& cfg, Services& s, std::uint64_t seed,
                                                     const Log& log = {}) {
  const auto tests = manifest.tests();
  const auto refs = manifest.references();

  std::set<std::string> names;
  for (const auto& e : tests) names.insert(e.category);
  std::map<std::string, Category> cats;
  std::map<std::string, std::vector<double>> ref_embeddings;
  std::map<std::string, std::pair<std::string, std::string>> cat_errors;
  // References are computed up front and sequentially, so their service time
  // is never charged to a test image.
  for (const auto& name : names) {
    try {
      cats.emplace(name, load_category(cfg, name));
      if (cfg.format_embedding) {
        auto it = refs.find(name);
        if (it == refs.end()) throw SchemaError("manifest has no normal training image for category " + name);
        ref_embeddings[name] = reference_embedding(io::load_image(manifest.resolve(it->second)), cats.at(name), s, cfg, seed);
      }
    } catch (const std::exception& e) {
      cat_errors[name] = detail::describe_error(e);
      if (log) log("category " + name + ": " + cat_errors[name].first + ": " + cat_errors[name].second);
    }
  }

  std::vector<reasoner::AnomalyReport> out(tests.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tests.size(); i = next++) {
      const auto& e = tests[i];
      io::ServiceClock::reset();
      if (auto ce = cat_errors.find(e.category); ce != cat_errors.end()) {
        out[i] = error_report(e.image, e.category, cfg, seed, ce->second.first, ce->second.second, 0);
        continue;
      }
      try {
        const auto& cat = cats.at(e.category);
        const auto* ref = cfg.format_embedding ? &ref_embeddings.at(e.category) : nullptr;
        const Trace t = run_image(io::load_image(manifest.resolve(e)), cat, s, cfg, seed, ref);
        out[i] = report_of(t, e.image, cat, cfg, seed, io::ServiceClock::total());
      } catch (const std::exception& ex) {
        const auto [code, msg] = detail::describe_error(ex);
        if (log) log(e.image + ": " + code + ": " + msg);
        out[i] = error_report(e.image, e.category, cfg, seed, code, msg, io::ServiceClock::total());
      }
    }
  };
  const std::size_t width = std::max<std::size_t>(1, std::min(cfg.workers, tests.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < width; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

struct RunOutput {
  std::vector<std::vector<reasoner::AnomalyReport>> per_seed;
  metrics::MetricsTable table;
  std::size_t error_rows = 0;
};

// Score source: ascore when the format-embedding module runs, otherwise the
// binary verdict.
inline std::vector<metrics::ScoreRecord> score_records(const std::vector<reasoner::AnomalyReport>& reports, const Manifest& manifest,
                                                       bool use_ascore, std::size_t* skipped = nullptr) {
  std::map<std::pair<std::string, std::string>, int> labels;
  for (const auto& e : manifest.tests()) labels[{e.category, e.image}] = e.label;
  std::vector<metrics::ScoreRecord> out;
  for (const auto& r : reports) {
    const bool usable = !r.error && (use_ascore ? r.ascore.has_value() : r.verdict.has_value());
    auto it = labels.find({r.category, r.image});
    if (!usable || it == labels.end()) {
      if (skipped) ++*skipped;
      continue;
    }
    const double score = use_ascore ? *r.ascore : reasoner::Verdict{*r.verdict}.binary_score();
    out.push_back({r.image, r.category, it->second, score});
  }
  return out;
}

inline RunOutput run_all(const Manifest& manifest, const RunConfig& cfg, Services& s, const Log& log = {}) {
  cfg.validate();
  RunOutput out;
  std::vector<std::vector<metrics::ScoreRecord>> runs;
  for (const auto seed : cfg.seeds) {
    out.per_seed.push_back(run_seed(manifest, cfg, s, seed, log));
    runs.push_back(score_records(out.per_seed.back(), manifest, cfg.format_embedding, &out.error_rows));
  }
  out.table = metrics::aggregate(runs, !cfg.format_embedding);
  return out;
}

}  // namespace logicad::app
