#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logicad/error.hpp"

namespace logicad::app {

// One JSONL line per image: {"image", "category", "label", "split"}.
// Image paths are relative to the manifest's directory.
struct ManifestEntry {
  std::string image;
  std::string category;
  int label = 0;
  std::string split = "test";  // "train" rows are reference candidates
};

struct Manifest {
  std::filesystem::path base;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const ManifestEntry& e) const {
    std::filesystem::path p = e.image;
    return p.is_relative() ? base / p : p;
  }

  std::vector<ManifestEntry> tests() const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries)
      if (e.split == "test") out.push_back(e);
    return out;
  }

  // The one-shot reference: first normal training image per category.
  std::map<std::string, ManifestEntry> references() const {
    std::map<std::string, ManifestEntry> out;
    for (const auto& e : entries)
      if (e.split == "train" && e.label == 0) out.emplace(e.category, e);
    return out;
  }
};

inline Manifest parse_manifest(const std::string& text, const std::filesystem::path& base = {}, const std::string& fname = "manifest") {
  Manifest m;
  m.base = base;
  std::size_t lineno = 0, pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = fname + ":" + std::to_string(lineno) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestEntry e;
      e.image = j.at("image").get<std::string>();
      e.category = j.at("category").get<std::string>();
      e.label = j.at("label").get<int>();
      e.split = j.value("split", std::string("test"));
      if (e.label != 0 && e.label != 1) throw SchemaError(where + "label must be 0 or 1");
      if (e.split != "train" && e.split != "test") throw SchemaError(where + "split must be train or test");
      if (e.image.empty() || e.category.empty()) throw SchemaError(where + "image and category must be non-empty");
      m.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw SchemaError(where + ex.what());
    }
  }
  return m;
}

inline Manifest load_manifest(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw SchemaError("cannot read manifest " + p.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_manifest(text, p.parent_path(), p.string());
}

inline std::string to_jsonl(const ManifestEntry& e) {
  nlohmann::ordered_json j{{"image", e.image}, {"category", e.category}, {"label", e.label}, {"split", e.split}};
  return j.dump() + "\n";
}

// MVTec LOCO layout: <root>/<category>/{train/good, test/good,
// test/logical_anomalies, test/structural_anomalies}. Paths are written
// relative to `relative_to`. The first training image becomes the reference.
inline std::vector<ManifestEntry> loco_manifest(const std::filesystem::path& root, const std::filesystem::path& relative_to,
                                                bool include_structural, const std::vector<std::string>& only = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw SchemaError("not a directory: " + root.string());
  auto images = [](const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& f : fs::directory_iterator(dir)) {
      const auto ext = f.path().extension().string();
      if (f.is_regular_file() && (ext == ".png" || ext == ".jpg" || ext == ".jpeg")) out.push_back(f.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<fs::path> cats;
  for (const auto& d : fs::directory_iterator(root))
    if (d.is_directory()) cats.push_back(d.path());
  std::sort(cats.begin(), cats.end());
  std::vector<ManifestEntry> out;
  for (const auto& c : cats) {
    const std::string name = c.filename().string();
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    auto rel = [&](const fs::path& p) { return fs::relative(p, relative_to).generic_string(); };
    const auto train = images(c / "train" / "good");
    if (train.empty()) continue;
    out.push_back({rel(train.front()), name, 0, "train"});
    for (const auto& p : images(c / "test" / "good")) out.push_back({rel(p), name, 0, "test"});
    for (const auto& p : images(c / "test" / "logical_anomalies")) out.push_back({rel(p), name, 1, "test"});
    if (include_structural)
      for (const auto& p : images(c / "test" / "structural_anomalies")) out.push_back({rel(p), name, 1, "test"});
  }
  return out;
}

}  // namespace logicad::app
