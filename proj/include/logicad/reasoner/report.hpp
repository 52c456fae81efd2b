#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logicad/error.hpp"
#include "logicad/reasoner/reasoner.hpp"

namespace logicad::reasoner {

using json = nlohmann::ordered_json;

struct Modules {
  bool gcot = true;
  bool roi = true;
  bool format_embedding = true;
  bool logic_reasoner = true;
  friend bool operator==(const Modules&, const Modules&) = default;
};

struct AnomalyReport {
  std::string image;
  std::string category;
  std::optional<Label> verdict;
  std::optional<double> ascore;
  std::optional<std::vector<std::string>> explanation;
  std::string narrative;
  std::int64_t elapsed_ms = 0;
  std::uint64_t seed = 0;
  Modules modules;
  std::optional<std::string> error;  // error rows only
  friend bool operator==(const AnomalyReport&, const AnomalyReport&) = default;
};

inline AnomalyReport render_report(const std::string& image, const std::string& category, const std::optional<Verdict>& verdict,
                                   const std::optional<Explanation>& explanation, std::optional<double> ascore,
                                   const std::string& narrative_template = {}) {
  AnomalyReport r;
  r.image = image;
  r.category = category;
  if (verdict) {
    r.verdict = verdict->label;
    if (explanation) {
      std::vector<std::string> atoms;
      for (const auto& a : explanation->atoms) atoms.push_back(fol::print_atom(a));
      r.explanation = std::move(atoms);
    }
    r.narrative = render_narrative(*verdict, explanation ? &*explanation : nullptr, narrative_template);
  } else {
    r.narrative = "Logic reasoner disabled.";
  }
  r.ascore = ascore;
  return r;
}

inline json to_json(const AnomalyReport& r) {
  json j;
  j["image"] = r.image;
  j["category"] = r.category;
  j["verdict"] = r.verdict ? json(to_string(*r.verdict)) : json(nullptr);
  j["ascore"] = r.ascore ? json(*r.ascore) : json(nullptr);
  j["explanation"] = r.explanation ? json(*r.explanation) : json(nullptr);
  j["narrative"] = r.narrative;
  j["elapsed_ms"] = r.elapsed_ms;
  j["seed"] = r.seed;
  j["modules"] = {{"gcot", r.modules.gcot},
                  {"roi", r.modules.roi},
                  {"format_embedding", r.modules.format_embedding},
                  {"logic_reasoner", r.modules.logic_reasoner}};
  if (r.error) j["error"] = *r.error;
  return j;
}

inline std::string to_jsonl(const AnomalyReport& r) { return to_json(r).dump(-1, ' ', false) + "\n"; }

inline AnomalyReport report_from_json(const json& j) {
  try {
    AnomalyReport r;
    r.image = j.at("image").get<std::string>();
    r.category = j.at("category").get<std::string>();
    const auto& v = j.at("verdict");
    if (!v.is_null()) {
      const auto s = v.get<std::string>();
      if (s != "normal" && s != "abnormal") throw SchemaError("verdict must be normal or abnormal, got " + s);
      r.verdict = s == "abnormal" ? Label::Abnormal : Label::Normal;
    }
    if (!j.at("ascore").is_null()) r.ascore = j.at("ascore").get<double>();
    if (!j.at("explanation").is_null()) r.explanation = j.at("explanation").get<std::vector<std::string>>();
    r.narrative = j.at("narrative").get<std::string>();
    r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("modules")) {
      const auto& m = j.at("modules");
      r.modules = {m.value("gcot", true), m.value("roi", true), m.value("format_embedding", true), m.value("logic_reasoner", true)};
    }
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed report line: ") + e.what());
  }
}

inline AnomalyReport report_from_jsonl(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("report line is not JSON: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace logicad::reasoner
