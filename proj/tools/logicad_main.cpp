// logicad: logical anomaly detection from the command line.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include "logicad/app/manifest.hpp"
#include "logicad/app/runner.hpp"
#include "logicad/app/services.hpp"
#include "logicad/engine/prover9.hpp"

using namespace logicad;

namespace {

constexpr int kExitNormal = 0;
constexpr int kExitError = 1;
constexpr int kExitAbnormal = 2;

std::mutex log_mu;
void log_line(const std::string& s) {
  std::lock_guard lock(log_mu);
  std::cerr << "logicad: " << s << "\n";
}

fol::FactSet read_facts(const std::string& path) {
  const std::string text = forge::read_text_file(path);
  try {
    return fol::parse_facts(text);
  } catch (const SyntaxError& e) {
    throw Error("SyntaxError", path + ":" + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("IoError", "cannot write " + path);
}

// Ablation and run-shape overrides shared by run/extract/score.
struct Overrides {
  std::optional<bool> gcot, roi, femb, lr;
  std::optional<std::string> mode, select;
  std::vector<std::uint64_t> seeds;
  std::optional<std::size_t> workers, k, lof_k;

  void add(CLI::App* app) {
    app->add_flag("--gcot,!--no-gcot", gcot, "guided chain-of-thought prompt");
    app->add_flag("--roi,!--no-roi", roi, "region-of-interest crops");
    app->add_flag("--format-embedding,!--no-format-embedding", femb, "summary embedding score");
    app->add_flag("--logic-reasoner,!--no-logic-reasoner", lr, "theorem-proving verdict");
    app->add_option("--mode", mode, "live or replay")->check(CLI::IsMember({"live", "replay"}));
    app->add_option("--select", select, "random or min-lof")->check(CLI::IsMember({"random", "min-lof"}));
    app->add_option("--seeds", seeds, "seed list")->delimiter(',');
    app->add_option("--workers", workers, "worker threads");
    app->add_option("-k,--samples", k, "descriptions per image");
    app->add_option("--lof-k", lof_k, "LOF neighbour count");
  }

  void apply(app::RunConfig& c) const {
    if (gcot) c.gcot = *gcot;
    if (roi) c.roi_enabled = *roi;
    if (femb) c.format_embedding = *femb;
    if (lr) c.logic_reasoner = *lr;
    if (mode) c.mode = io::parse_mode(*mode);
    if (select) c.select = *select == "min-lof" ? extraction::SelectPolicy::MinLof : extraction::SelectPolicy::Random;
    if (!seeds.empty()) c.seeds = seeds;
    if (workers) c.workers = *workers;
    if (k) c.k = *k;
    if (lof_k) c.lof_k = *lof_k;
  }
};

int cmd_prove(const std::string& spec_path, const std::string& facts_path, std::size_t padding, bool json_out) {
  const auto spec = forge::load_task_spec(spec_path);
  const auto facts = read_facts(facts_path);
  const auto a = forge::assemble_gamma(spec, facts);
  reasoner::Options opt;
  opt.padding = padding;
  const auto verdict = reasoner::classify(a.gamma, a.facts, opt);
  std::optional<reasoner::Explanation> ex;
  if (verdict.abnormal()) ex = reasoner::minimal_explanation(a.gamma, a.facts, opt);
  const auto report = reasoner::render_report(facts_path, spec.category, verdict, ex, std::nullopt, spec.narrative_template);
  for (const auto& w : a.warnings) log_line("warning: " + w.code + ": " + w.message);
  if (json_out) {
    std::cout << reasoner::to_jsonl(report);
  } else {
    std::cout << "verdict: " << reasoner::to_string(verdict.label) << "\n";
    if (ex) std::cout << "explanation: " << ex->atoms << "\n";
    std::cout << report.narrative << "\n";
  }
  return verdict.abnormal() ? kExitAbnormal : kExitNormal;
}

int cmd_check_spec(const std::string& spec_path, const std::string& config_path, std::size_t padding, bool print) {
  const auto spec = forge::load_task_spec(spec_path);
  std::vector<forge::Warning> warnings;
  forge::Assembly a;
  if (spec.synonym_table || config_path.empty()) {
    if (!spec.synonym_table) log_line("no [synonyms] section and no --config: synonym merging skipped");
    forge::TableSynonymOracle table;
    warnings = forge::check_spec(spec, table, padding);
    a = forge::assemble_gamma(spec, {}, table);
  } else {
    auto cfg = app::load_config(config_path);
    app::ServiceStack stack(cfg);
    auto s = stack.services();
    forge::LlmSynonymOracle llm([&](const std::string& p) { return s.llm.describe("", p, 0); });
    forge::CachingSynonymOracle oracle(llm);
    warnings = forge::check_spec(spec, oracle, padding);
    a = forge::assemble_gamma(spec, {}, oracle);
  }
  for (const auto& w : warnings) std::cout << "warning: " << w.code << ": " << w.message << "\n";
  if (print) std::cout << a.gamma;
  std::cout << spec.category << ": consistent, " << a.gamma.size() << " formulas\n";
  return kExitNormal;
}

int cmd_export(const std::string& spec_path, const std::string& facts_path, const std::string& out_path) {
  const auto spec = forge::load_task_spec(spec_path);
  const auto facts = facts_path.empty() ? fol::FactSet{} : read_facts(facts_path);
  const auto a = forge::assemble_gamma(spec, facts);
  const std::string text = engine::export_prover9(a.gamma, a.facts, &a.classes);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return kExitNormal;
}

app::RunConfig config_with(const std::string& path, const Overrides& o) {
  auto cfg = app::load_config(path);
  o.apply(cfg);
  cfg.validate();
  return cfg;
}

int cmd_run(const std::string& config_path, const Overrides& o, const std::string& manifest_path, const std::string& out_path,
            const std::string& metrics_path) {
  const auto cfg = config_with(config_path, o);
  const auto manifest = app::load_manifest(manifest_path);
  app::ServiceStack stack(cfg);
  auto s = stack.services();
  const auto result = app::run_all(manifest, cfg, s, log_line);
  std::string jsonl;
  for (const auto& run : result.per_seed)
    for (const auto& r : run) jsonl += reasoner::to_jsonl(r);
  if (out_path.empty() || out_path == "-") {
    std::cout << jsonl;
  } else {
    write_file(out_path, jsonl);
  }
  if (!metrics_path.empty()) write_file(metrics_path, metrics::to_csv(result.table));
  if (result.error_rows) log_line(std::to_string(result.error_rows) + " report(s) without a usable score were left out of the metrics");
  std::cerr << metrics::to_pretty(result.table);
  return kExitNormal;
}

struct OneImage {
  std::string config, category, image;
  std::uint64_t seed = 0;
  bool trace = false;
};

int cmd_extract(const OneImage& a, const Overrides& o) {
  auto cfg = config_with(a.config, o);
  app::ServiceStack stack(cfg);
  auto s = stack.services();
  const auto cat = app::load_category(cfg, a.category);
  const auto img = io::load_image(a.image);
  if (!a.trace) {
    std::cout << extraction::to_json(app::describe_image(img, cat, s, cfg, a.seed)).dump(2) << "\n";
    return kExitNormal;
  }
  cfg.format_embedding = false;  // no reference at hand
  const auto t = app::run_image(img, cat, s, cfg, a.seed, nullptr);
  std::cout << app::trace_json(t).dump(2) << "\n";
  return kExitNormal;
}

int cmd_score(const OneImage& a, const Overrides& o, const std::string& manifest_path) {
  auto cfg = config_with(a.config, o);
  cfg.format_embedding = true;
  cfg.logic_reasoner = false;
  const auto manifest = app::load_manifest(manifest_path);
  const auto refs = manifest.references();
  auto it = refs.find(a.category);
  if (it == refs.end()) throw SchemaError("manifest has no reference image for " + a.category);
  app::ServiceStack stack(cfg);
  auto s = stack.services();
  const auto cat = app::load_category(cfg, a.category);
  const auto ref = app::reference_embedding(io::load_image(manifest.resolve(it->second)), cat, s, cfg, a.seed);
  const auto t = app::run_image(io::load_image(a.image), cat, s, cfg, a.seed, &ref);
  std::cout << "summary: " << t.summary->canonical() << "\n";
  std::cout << "ascore: " << *t.ascore << "\n";
  return kExitNormal;
}

int cmd_eval(const std::string& reports_path, const std::string& manifest_path, bool binary, const std::string& metrics_path) {
  const auto manifest = app::load_manifest(manifest_path);
  std::ifstream in(reports_path, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + reports_path);
  std::map<std::uint64_t, std::vector<reasoner::AnomalyReport>> by_seed;
  bool any_ascore = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto r = reasoner::report_from_jsonl(line);
    any_ascore = any_ascore || r.ascore.has_value();
    by_seed[r.seed].push_back(std::move(r));
  }
  const bool use_ascore = any_ascore && !binary;
  std::vector<std::vector<metrics::ScoreRecord>> runs;
  std::size_t skipped = 0;
  for (const auto& [seed, reps] : by_seed) runs.push_back(app::score_records(reps, manifest, use_ascore, &skipped));
  const auto table = metrics::aggregate(runs, !use_ascore);
  if (skipped) log_line(std::to_string(skipped) + " report(s) without a usable score were left out");
  if (!metrics_path.empty()) write_file(metrics_path, metrics::to_csv(table));
  std::cout << metrics::to_pretty(table);
  return kExitNormal;
}

int cmd_gen_manifest(const std::string& root, const std::string& out_path, bool structural, const std::vector<std::string>& only) {
  namespace fs = std::filesystem;
  const fs::path rel = out_path.empty() || out_path == "-" ? fs::current_path() : fs::absolute(out_path).parent_path();
  const auto entries = app::loco_manifest(fs::absolute(root), rel, structural, only);
  std::string text;
  for (const auto& e : entries) text += app::to_jsonl(e);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  log_line(std::to_string(entries.size()) + " manifest entries");
  return kExitNormal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Logical anomaly detection with vision-language descriptions and theorem proving"};
  cli.require_subcommand(1);

  std::string spec, facts, config, manifest, out, metrics_out, reports, root;
  std::size_t padding = 1;
  bool json_out = false, print = false, binary = false, structural = false;
  std::vector<std::string> only;
  Overrides over;
  OneImage one;

  auto* prove = cli.add_subcommand("prove", "decide a fact set against a task specification (exit 0 normal, 2 abnormal)");
  prove->add_option("taskspec", spec, "task specification")->required()->check(CLI::ExistingFile);
  prove->add_option("facts", facts, "facts file")->required()->check(CLI::ExistingFile);
  prove->add_option("--padding", padding, "fresh universe elements");
  prove->add_flag("--json", json_out, "print a report line");

  auto* check = cli.add_subcommand("check-spec", "check that a task specification is consistent");
  check->add_option("taskspec", spec)->required()->check(CLI::ExistingFile);
  check->add_option("--config", config, "config for the language-model synonym oracle");
  check->add_option("--padding", padding);
  check->add_flag("--print", print, "print the assembled normal theory");

  auto* exp = cli.add_subcommand("export-prover9", "write the Prover9 problem for a fact set");
  exp->add_option("taskspec", spec)->required()->check(CLI::ExistingFile);
  exp->add_option("facts", facts)->check(CLI::ExistingFile);
  exp->add_option("-o,--output", out);

  auto* run = cli.add_subcommand("run", "run the pipeline over a manifest");
  run->add_option("--config", config)->required()->check(CLI::ExistingFile);
  run->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", out, "report JSONL (default stdout)");
  run->add_option("--metrics", metrics_out, "metrics CSV");
  over.add(run);

  auto* extract = cli.add_subcommand("extract", "describe one image and show the candidate set");
  extract->add_option("--config", one.config)->required()->check(CLI::ExistingFile);
  extract->add_option("--category", one.category)->required();
  extract->add_option("image", one.image)->required()->check(CLI::ExistingFile);
  extract->add_option("--seed", one.seed);
  extract->add_flag("--trace", one.trace, "also formalize and reason");
  over.add(extract);

  auto* score = cli.add_subcommand("score", "anomaly score of one image against its category reference");
  score->add_option("--config", one.config)->required()->check(CLI::ExistingFile);
  score->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  score->add_option("--category", one.category)->required();
  score->add_option("image", one.image)->required()->check(CLI::ExistingFile);
  score->add_option("--seed", one.seed);
  over.add(score);

  auto* eval = cli.add_subcommand("eval", "metrics for a report file");
  eval->add_option("reports", reports)->required()->check(CLI::ExistingFile);
  eval->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  eval->add_flag("--binary", binary, "score by verdict even when ascore is present");
  eval->add_option("--metrics", metrics_out, "metrics CSV");

  auto* gen = cli.add_subcommand("gen-manifest", "manifest for an MVTec LOCO style directory");
  gen->add_option("root", root)->required()->check(CLI::ExistingDirectory);
  gen->add_option("-o,--output", out);
  gen->add_flag("--structural", structural, "include structural anomalies");
  gen->add_option("--category", only, "restrict to these categories");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kExitNormal : kExitError;
  }

  try {
    if (*prove) return cmd_prove(spec, facts, padding, json_out);
    if (*check) return cmd_check_spec(spec, config, padding, print);
    if (*exp) return cmd_export(spec, facts, out);
    if (*run) return cmd_run(config, over, manifest, out, metrics_out);
    if (*extract) return cmd_extract(one, over);
    if (*score) return cmd_score(one, over, manifest);
    if (*eval) return cmd_eval(reports, manifest, binary, metrics_out);
    if (*gen) return cmd_gen_manifest(root, out, structural, only);
  } catch (const Error& e) {
    std::cerr << "logicad: " << e.code() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "logicad: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
