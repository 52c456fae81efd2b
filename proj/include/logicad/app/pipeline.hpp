#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logicad/app/config.hpp"
#include "logicad/embedding/score.hpp"
#include "logicad/embedding/summary.hpp"
#include "logicad/extraction/describe.hpp"
#include "logicad/forge/axioms.hpp"
#include "logicad/forge/synonym_oracle.hpp"
#include "logicad/reasoner/formalize.hpp"
#include "logicad/reasoner/reasoner.hpp"
#include "logicad/reasoner/report.hpp"

namespace logicad::app {

struct Services {
  extraction::VisionClient& vision;
  extraction::VisionClient& llm;  // text mode
  extraction::RoiClient& roi;
  extraction::EmbeddingClient& embedder;
};

struct Category {
  forge::TaskSpec spec;
  std::optional<embedding::SummarySchema> schema;
};

inline Category load_category(const RunConfig& cfg, const std::string& name) {
  Category c;
  c.spec = forge::load_task_spec(cfg.taskspec_dir / (name + ".taskspec"));
  if (c.spec.category != name) throw SpecError(c.spec.source.string() + ": [category] is " + c.spec.category + ", expected " + name);
  if (cfg.format_embedding) c.schema = embedding::load_schema(forge::schema_path(c.spec));
  return c;
}

// Everything computed for one image; the report is derived from it.
struct Trace {
  extraction::DescriptionSet descriptions;
  std::optional<embedding::StructuredSummary> summary;
  std::vector<double> summary_embedding;
  std::optional<double> ascore;
  std::optional<fol::FactSet> facts;
  std::optional<forge::Assembly> assembly;
  std::optional<reasoner::Verdict> verdict;
  std::optional<reasoner::Explanation> explanation;
};

inline std::string description_prompt(const RunConfig& cfg, const forge::TaskSpec& spec) {
  if (cfg.gcot && !spec.gcot_prompt.empty()) return spec.gcot_prompt;
  return extraction::kStandardPrompt;
}

// Image to stabilized description (ROI, K samples, LOF filter, selection).
inline extraction::DescriptionSet describe_image(const extraction::Image& image, const Category& cat, Services& s, const RunConfig& cfg,
                                                 std::uint64_t seed) {
  const auto regions = extraction::extract_rois(image, cat.spec.feature_prompts, cfg.roi_enabled ? &s.roi : nullptr);
  auto ds = extraction::generate_descriptions(regions, description_prompt(cfg, cat.spec), s.vision, cfg.k, seed);
  extraction::filter_and_select(ds, s.embedder, cfg.effective_lof_k(), cfg.lof_threshold, seed, cfg.select);
  return ds;
}

// Summary embedding of a selected description.
inline std::pair<embedding::StructuredSummary, std::vector<double>> format_embed(const std::string& text, const Category& cat, Services& s,
                                                                                  std::uint64_t seed) {
  auto summary = embedding::summarize(text, s.llm, *cat.schema, cat.spec.summary_prompt, seed);
  auto e = s.embedder.embed(summary.canonical());
  return {std::move(summary), std::move(e)};
}

// The reference image of a category is described and embedded once per run.
inline std::vector<double> reference_embedding(const extraction::Image& image, const Category& cat, Services& s, const RunConfig& cfg,
                                               std::uint64_t seed) {
  const auto ds = describe_image(image, cat, s, cfg, seed);
  return format_embed(ds.selected_text(), cat, s, seed).second;
}

inline void reason(Trace& t, const std::string& text, const Category& cat, Services& s, const RunConfig& cfg, std::uint64_t seed) {
  t.facts = reasoner::formalize(text, s.llm, cat.spec, seed);
  forge::Assembly a;
  if (cat.spec.synonym_table) {
    a = forge::assemble_gamma(cat.spec, *t.facts);
  } else {
    forge::LlmSynonymOracle llm_oracle([&](const std::string& prompt) { return s.llm.describe("", prompt, 0); });
    forge::CachingSynonymOracle oracle(llm_oracle);
    a = forge::assemble_gamma(cat.spec, *t.facts, oracle);
  }
  reasoner::Options opt;
  opt.padding = cfg.padding;
  t.verdict = reasoner::classify(a.gamma, a.facts, opt);
  if (t.verdict->abnormal()) t.explanation = reasoner::minimal_explanation(a.gamma, a.facts, opt);
  t.assembly = std::move(a);
}

inline Trace run_image(const extraction::Image& image, const Category& cat, Services& s, const RunConfig& cfg, std::uint64_t seed,
                       const std::vector<double>* reference) {
  Trace t;
  t.descriptions = describe_image(image, cat, s, cfg, seed);
  const std::string& text = t.descriptions.selected_text();
  if (cfg.format_embedding) {
    if (reference == nullptr) throw SpecError("no reference embedding for category " + cat.spec.category);
    auto [summary, e] = format_embed(text, cat, s, seed);
    t.ascore = embedding::anomaly_score(*reference, e);
    t.summary = std::move(summary);
    t.summary_embedding = std::move(e);
  }
  if (cfg.logic_reasoner) reason(t, text, cat, s, cfg, seed);
  return t;
}

inline reasoner::Modules modules_of(const RunConfig& cfg) {
  return {cfg.gcot, cfg.roi_enabled, cfg.format_embedding, cfg.logic_reasoner};
}

inline reasoner::AnomalyReport report_of(const Trace& t, const std::string& image, const Category& cat, const RunConfig& cfg,
                                         std::uint64_t seed, std::int64_t elapsed_ms) {
  auto r = reasoner::render_report(image, cat.spec.category, t.verdict, t.explanation, t.ascore, cat.spec.narrative_template);
  r.seed = seed;
  r.modules = modules_of(cfg);
  r.elapsed_ms = elapsed_ms;
  return r;
}

inline reasoner::AnomalyReport error_report(const std::string& image, const std::string& category, const RunConfig& cfg, std::uint64_t seed,
                                            const std::string& code, const std::string& message, std::int64_t elapsed_ms) {
  reasoner::AnomalyReport r;
  r.image = image;
  r.category = category;
  r.narrative = "Processing failed.";
  r.seed = seed;
  r.modules = modules_of(cfg);
  r.elapsed_ms = elapsed_ms;
  r.error = code + ": " + message;
  return r;
}

// Intermediate outputs as JSON, for the `extract` command and for checking
// that ablations leave other modules untouched.
inline nlohmann::ordered_json trace_json(const Trace& t) {
  nlohmann::ordered_json j;
  j["descriptions"] = extraction::to_json(t.descriptions);
  j["summary"] = t.summary ? nlohmann::ordered_json(t.summary->canonical()) : nlohmann::ordered_json(nullptr);
  j["ascore"] = t.ascore ? nlohmann::ordered_json(*t.ascore) : nlohmann::ordered_json(nullptr);
  if (t.facts) {
    std::vector<std::string> fs;
    for (const auto& a : *t.facts) fs.push_back(fol::print_atom(a));
    j["facts"] = fs;
  } else {
    j["facts"] = nullptr;
  }
  if (t.assembly) {
    std::vector<std::string> fs;
    for (const auto& a : t.assembly->facts) fs.push_back(fol::print_atom(a));
    j["completed_facts"] = fs;
    j["gamma"] = fol::print_theory(t.assembly->gamma);
  }
  j["verdict"] = t.verdict ? nlohmann::ordered_json(reasoner::to_string(t.verdict->label)) : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace logicad::app
