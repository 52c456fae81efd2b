// Builds the offline fixture set: synthetic scenes, a manifest, a config and
// a response cache recorded from scripted stand-ins for the vision model,
// language model, detector and embedder. Replaying the cache reproduces every
// run of the ablation matrix without network access.

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "logicad/app/ablation.hpp"
#include "logicad/app/config.hpp"
#include "logicad/app/manifest.hpp"
#include "logicad/app/pipeline.hpp"
#include "logicad/app/runner.hpp"
#include "logicad/app/services.hpp"
#include "logicad/extraction/hashing_embedder.hpp"
#include "logicad/io/cached_clients.hpp"
#include "logicad/io/image.hpp"

namespace fs = std::filesystem;
using namespace logicad;

namespace {

constexpr const char* kTimestamp = "2026-01-01T00:00:00Z";

// ---- scenes --------------------------------------------------------------

struct Item {
  std::string kind;
  int x, y;
  bool short_bolt = false;
};

struct Scene {
  std::string category, split, name;
  int label;
  std::vector<Item> items;
};

const cv::Scalar kBoxBg(200, 220, 235), kFrame(90, 110, 130);
const cv::Scalar kBagOuter(200, 200, 200), kBagInner(230, 230, 225), kBagEdge(150, 150, 150);

// Exact colours the scripted vision model keys on.
const std::map<std::string, cv::Vec3b>& breakfast_colours() {
  static const std::map<std::string, cv::Vec3b> m{
      {"tangerine", {0, 140, 255}}, {"apple", {40, 40, 200}}, {"nectarine", {60, 100, 230}},
      {"bug", {20, 20, 20}},        {"cereal", {120, 200, 230}}, {"nut", {40, 80, 130}},
  };
  return m;
}

const std::map<std::string, cv::Vec3b>& bag_colours() {
  static const std::map<std::string, cv::Vec3b> m{{"bolt", {140, 60, 20}}, {"nut", {60, 160, 60}}, {"washer", {160, 60, 160}}};
  return m;
}

cv::Scalar sc(const cv::Vec3b& c) { return cv::Scalar(c[0], c[1], c[2]); }

void draw_breakfast_item(cv::Mat& m, const Item& it) {
  const auto c = sc(breakfast_colours().at(it.kind));
  const cv::Point p(it.x, it.y);
  if (it.kind == "tangerine") cv::circle(m, p, 16, c, cv::FILLED, cv::LINE_8);
  else if (it.kind == "apple") cv::circle(m, p, 20, c, cv::FILLED, cv::LINE_8);
  else if (it.kind == "nectarine") cv::circle(m, p, 19, c, cv::FILLED, cv::LINE_8);
  else if (it.kind == "nut") cv::ellipse(m, p, cv::Size(9, 6), 20, 0, 360, c, cv::FILLED, cv::LINE_8);
  else if (it.kind == "cereal") cv::rectangle(m, cv::Rect(it.x, it.y, 8, 5), c, cv::FILLED, cv::LINE_8);
  else if (it.kind == "bug") {
    cv::ellipse(m, p, cv::Size(10, 6), 0, 0, 360, c, cv::FILLED, cv::LINE_8);
    for (int dx : {-6, 0, 6}) {
      cv::line(m, {it.x + dx, it.y}, {it.x + dx - 3, it.y - 11}, c, 1, cv::LINE_8);
      cv::line(m, {it.x + dx, it.y}, {it.x + dx + 3, it.y + 11}, c, 1, cv::LINE_8);
    }
  }
}

void draw_bag_item(cv::Mat& m, const Item& it) {
  const auto c = sc(bag_colours().at(it.kind));
  if (it.kind == "bolt") {
    const int len = it.short_bolt ? 32 : 60;
    cv::rectangle(m, cv::Rect(it.x, it.y, 10, 18), c, cv::FILLED, cv::LINE_8);
    cv::rectangle(m, cv::Rect(it.x + 10, it.y + 4, len, 10), c, cv::FILLED, cv::LINE_8);
  } else if (it.kind == "nut") {
    cv::circle(m, {it.x, it.y}, 10, c, cv::FILLED, cv::LINE_8);
    cv::circle(m, {it.x, it.y}, 4, kBagInner, cv::FILLED, cv::LINE_8);
  } else if (it.kind == "washer") {
    cv::circle(m, {it.x, it.y}, 11, c, 4, cv::LINE_8);
  }
}

// Cereal flakes and nuts always fill the right compartment the same way.
std::vector<Item> right_side(bool cereal, bool nuts) {
  std::vector<Item> out;
  if (cereal)
    for (int i = 0; i < 10; ++i) out.push_back({"cereal", 172 + (i % 5) * 26, 24 + (i / 5) * 22});
  if (nuts)
    for (int i = 0; i < 6; ++i) out.push_back({"nut", 184 + (i % 3) * 42, 120 + (i / 3) * 36});
  return out;
}

cv::Mat render(const Scene& s) {
  if (s.category == "breakfast_box") {
    cv::Mat m(200, 320, CV_8UC3, kBoxBg);
    cv::rectangle(m, cv::Rect(10, 10, 300, 180), kFrame, 3, cv::LINE_8);
    cv::line(m, {160, 10}, {160, 189}, kFrame, 3, cv::LINE_8);
    for (const auto& it : s.items) draw_breakfast_item(m, it);
    return m;
  }
  cv::Mat m(240, 240, CV_8UC3, kBagOuter);
  cv::rectangle(m, cv::Rect(20, 20, 200, 200), kBagInner, cv::FILLED, cv::LINE_8);
  cv::rectangle(m, cv::Rect(20, 20, 200, 200), kBagEdge, 2, cv::LINE_8);
  for (const auto& it : s.items) draw_bag_item(m, it);
  return m;
}

Scene breakfast(std::string split, std::string name, int label, std::vector<Item> left, bool cereal = true, bool nuts = true) {
  auto r = right_side(cereal, nuts);
  left.insert(left.end(), r.begin(), r.end());
  return {"breakfast_box", std::move(split), std::move(name), label, std::move(left)};
}

std::vector<Scene> scenes() {
  std::vector<Scene> v;
  v.push_back(breakfast("train", "good_000", 0, {{"tangerine", 45, 45}, {"tangerine", 115, 50}, {"apple", 80, 130}}));
  v.push_back(breakfast("test", "good_000", 0, {{"tangerine", 50, 40}, {"tangerine", 50, 90}, {"apple", 115, 140}}));
  v.push_back(breakfast("test", "good_001", 0, {{"tangerine", 40, 150}, {"tangerine", 120, 150}, {"nectarine", 80, 55}}));
  v.push_back(breakfast("test", "good_002", 0, {{"apple", 45, 45}, {"tangerine", 110, 45}, {"tangerine", 110, 140}}));
  v.push_back(breakfast("test", "logical_000", 1,
                        {{"tangerine", 45, 40}, {"tangerine", 115, 40}, {"apple", 45, 140}, {"nectarine", 115, 140}}));
  v.push_back(breakfast("test", "logical_001", 1,
                        {{"tangerine", 45, 40}, {"tangerine", 115, 40}, {"tangerine", 45, 140}, {"nectarine", 115, 140}}));
  v.push_back(breakfast("test", "logical_002", 1, {{"tangerine", 45, 40}, {"tangerine", 115, 40}, {"apple", 45, 140}, {"bug", 115, 145}}));
  v.push_back(breakfast("test", "logical_003", 1, {{"tangerine", 45, 40}, {"tangerine", 115, 40}, {"apple", 80, 140}}, false, true));

  auto bag = [](std::string split, std::string name, int label, int bolts, int nuts, int washers, bool short_bolt = false, int shift = 0) {
    Scene s{"screw_bag", std::move(split), std::move(name), label, {}};
    for (int i = 0; i < bolts; ++i) s.items.push_back({"bolt", 40 + shift, 40 + i * 30, short_bolt && i == 0});
    for (int i = 0; i < nuts; ++i) s.items.push_back({"nut", 60 + i * 40 + shift, 160});
    for (int i = 0; i < washers; ++i) s.items.push_back({"washer", 150 + i * 32 - shift, 190 - (i % 2) * 50});
    return s;
  };
  v.push_back(bag("train", "good_000", 0, 2, 2, 2));
  v.push_back(bag("test", "good_000", 0, 2, 2, 2, false, 8));
  v.push_back(bag("test", "good_001", 0, 2, 2, 2, false, 14));
  v.push_back(bag("test", "logical_000", 1, 3, 2, 2));
  v.push_back(bag("test", "logical_001", 1, 2, 1, 2, false, 6));
  // One bolt too short: a length defect that counting cannot see.
  v.push_back(bag("test", "logical_002", 1, 2, 2, 2, true, 4));
  return v;
}

// ---- scripted vision model -----------------------------------------------

bool is_breakfast(const cv::Mat& m) {
  cv::Mat mask;
  cv::inRange(m, kBoxBg, kBoxBg, mask);
  return cv::countNonZero(mask) > 0;
}

bool is_full_view(const cv::Mat& m, bool breakfast) { return breakfast ? (m.cols == 320 && m.rows == 200) : (m.cols == 240 && m.rows == 240); }

using Counts = std::map<std::string, int>;

// Connected components per object colour, split into left and right halves
// when `split` is set.
std::pair<Counts, Counts> count_objects(const cv::Mat& m, const std::map<std::string, cv::Vec3b>& colours, bool split) {
  Counts left, right;
  for (const auto& [kind, c] : colours) {
    cv::Mat mask, labels, stats, centroids;
    cv::inRange(m, sc(c), sc(c), mask);
    const int n = cv::connectedComponentsWithStats(mask, labels, stats, centroids, 8);
    for (int i = 1; i < n; ++i) {
      if (stats.at<int>(i, cv::CC_STAT_AREA) < 10) continue;
      const bool is_right = split && centroids.at<double>(i, 0) > m.cols / 2.0;
      ++(is_right ? right : left)[kind];
    }
  }
  return {left, right};
}

const std::vector<std::string>& kind_order(bool breakfast) {
  static const std::vector<std::string> b{"tangerine", "apple", "nectarine", "banana", "bug", "cereal", "nut"};
  static const std::vector<std::string> s{"bolt", "nut", "washer", "spring"};
  return breakfast ? b : s;
}

bool bulk(const std::string& kind, bool breakfast) { return breakfast && (kind == "cereal" || kind == "nut"); }

std::string plural(const std::string& k) { return k == "cereal" ? k : k + "s"; }

std::string number_word(int n) {
  static const std::array<const char*, 11> w{"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};
  return n >= 0 && n <= 10 ? w[static_cast<std::size_t>(n)] : std::to_string(n);
}

std::string join(const std::vector<std::string>& xs) {
  if (xs.empty()) return "nothing";
  std::string s = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) s += (i + 1 == xs.size() ? " and " : ", ") + xs[i];
  return s;
}

// Guided prompts get exact counts; the generic prompt gets vaguer plurals.
std::string list_of(const Counts& c, bool breakfast, bool guided) {
  std::vector<std::string> parts;
  for (const auto& k : kind_order(breakfast)) {
    auto it = c.find(k);
    if (it == c.end() || it->second == 0) continue;
    const int n = it->second;
    if (bulk(k, breakfast)) parts.push_back(plural(k));
    else if (guided) parts.push_back(number_word(n) + " " + (n == 1 ? k : plural(k)));
    else if (n == 1) parts.push_back(std::string(k[0] == 'a' || k[0] == 'e' ? "an " : "a ") + k);
    else parts.push_back(plural(k));
  }
  return join(parts);
}

int countable_total(const Counts& c, bool breakfast) {
  int n = 0;
  for (const auto& [k, v] : c)
    if (!bulk(k, breakfast)) n += v;
  return n;
}

// Whole-image views lose track once a group holds four or more objects.
void crowd_miscount(Counts& c, bool breakfast) {
  if (countable_total(c, breakfast) < 4) return;
  std::string worst;
  for (const auto& k : kind_order(breakfast))
    if (!bulk(k, breakfast) && c.count(k) && (worst.empty() || c[k] > c[worst])) worst = k;
  --c[worst];
}

// Every fifth sample invents an object.
void maybe_hallucinate(Counts& c, bool breakfast, std::uint64_t seed) {
  if (seed % 5 != 3 || countable_total(c, breakfast) == 0) return;
  ++c[breakfast ? "banana" : "spring"];
}

std::string scripted_vision(const std::string& bytes, const std::string& prompt, std::uint64_t seed) {
  const cv::Mat m = io::decode_image(bytes);
  const bool breakfast = is_breakfast(m);
  const bool full = is_full_view(m, breakfast);
  const bool guided = prompt != extraction::kStandardPrompt;
  static const std::array<const char*, 3> verbs{"holds", "contains", "has"};
  static const std::array<const char*, 3> openers{"I can see ", "This part shows ", "Visible here: "};
  const std::string verb = verbs[seed % 3];

  auto [left, right] = count_objects(m, breakfast ? breakfast_colours() : bag_colours(), breakfast && full);
  if (full) {
    crowd_miscount(left, breakfast);
    crowd_miscount(right, breakfast);
  }
  maybe_hallucinate(left, breakfast, seed);

  if (!full) {
    const std::string l = list_of(left, breakfast, guided);
    return guided ? "This region " + verb + " " + l + "." : openers[seed % 3] + l + ".";
  }
  if (breakfast) {
    if (guided)
      return "The left compartment " + verb + " " + list_of(left, true, true) + ". The right compartment " + verb + " " +
             list_of(right, true, true) + ".";
    return "A breakfast box. On the left there are " + list_of(left, true, false) + "; on the right " + list_of(right, true, false) + ".";
  }
  if (guided) return "The bag " + verb + " " + list_of(left, false, true) + ".";
  return "A plastic bag with " + list_of(left, false, false) + ".";
}

// ---- scripted detector ---------------------------------------------------

std::string scripted_detect(const std::string& bytes, const std::vector<std::string>& prompts) {
  const cv::Mat m = io::decode_image(bytes);
  nlohmann::ordered_json dets = nlohmann::ordered_json::array();
  for (const auto& p : prompts) {
    std::array<int, 4> box{};
    double score = 0;
    if (p == "left compartment") box = {13, 13, 145, 175}, score = 0.91;
    else if (p == "right compartment") box = {163, 13, 145, 175}, score = 0.88;
    else if (p == "bag") box = {18, 18, 205, 205}, score = 0.95;
    else continue;
    dets.push_back({{"box", box}, {"prompt", p}, {"score", score}});
  }
  (void)m;
  return nlohmann::ordered_json{{"detections", dets}}.dump();
}

// ---- scripted language model ---------------------------------------------

struct Parsed {
  // (group, kind) -> count, -1 meaning irrel; insertion order kept.
  std::vector<std::pair<std::pair<std::string, std::string>, int>> facts;
};

Parsed parse_description(std::string text, bool breakfast) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  if (text.find("[region") != std::string::npos) {
    const auto f = text.find("[full image]");
    if (f != std::string::npos) text = text.substr(0, f);
  }
  static const std::regex re(
      R"(\b(left|right)\b|(?:\b(zero|one|two|three|four|five|six|seven|eight|nine|ten|a|an)\s+)?\b(tangerine|apple|nectarine|banana|bug|cereal|nut|bolt|screw|washer|spring)s?\b)");
  static const std::map<std::string, int> numbers{{"zero", 0}, {"one", 1}, {"two", 2}, {"three", 3}, {"four", 4}, {"five", 5}, {"six", 6},
                                                  {"seven", 7}, {"eight", 8}, {"nine", 9}, {"ten", 10}, {"a", 1}, {"an", 1}};
  Parsed p;
  std::set<std::pair<std::string, std::string>> seen;
  std::string group = breakfast ? "left" : "contains";
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[1].matched) {
      if (breakfast) group = m[1].str();
      continue;
    }
    const std::string kind = m[3].str();
    int count = -1;
    if (m[2].matched && !bulk(kind, breakfast)) count = numbers.at(m[2].str());
    if (seen.insert({group, kind}).second) p.facts.push_back({{group, kind}, count});
  }
  return p;
}

std::string between(const std::string& s, const std::string& open, const std::string& close) {
  const auto b = s.rfind(open);
  if (b == std::string::npos) return {};
  const auto from = b + open.size();
  const auto e = s.rfind(close);
  return e == std::string::npos || e < from ? s.substr(from) : s.substr(from, e - from);
}

std::string scripted_llm(const std::string& prompt, std::uint64_t seed) {
  static const std::string ask = "Answer Yes or No: Are ";
  if (prompt.rfind(ask, 0) == 0) {
    const std::string rest = prompt.substr(ask.size());
    const auto and_pos = rest.find(" and "), end = rest.find(" synonymous");
    const std::string a = rest.substr(0, and_pos), b = rest.substr(and_pos + 5, end - and_pos - 5);
    const std::set<std::string> pair{a, b};
    const bool same = pair == std::set<std::string>{"bolt", "screw"} || pair == std::set<std::string>{"mandarin", "tangerine"};
    return same ? "Yes." : "No.";
  }
  if (prompt.size() >= 5 && prompt.compare(prompt.size() - 5, 5, "JSON:") == 0) {
    const bool breakfast = prompt.find("- left:") != std::string::npos;
    const auto parsed = parse_description(between(prompt, "\nDescription:\n", "\n\nJSON:"), breakfast);
    nlohmann::ordered_json j;
    if (breakfast) j["left"] = j["right"] = nlohmann::ordered_json::object();
    else j["bag"] = nlohmann::ordered_json::object();
    for (const auto& [key, n] : parsed.facts) {
      const std::string field = breakfast ? key.first : "bag";
      j[field][key.second] = n < 0 ? nlohmann::ordered_json("irrel") : nlohmann::ordered_json(n);
    }
    // Occasionally unquoted keys, which the caller has to retry.
    if (seed % 7 == 5) return "{left: " + j.begin()->dump() + "}";
    return "```json\n" + j.dump(2) + "\n```";
  }
  const bool breakfast = prompt.find("left(") != std::string::npos;
  const auto parsed = parse_description(between(prompt, "Description:\n", "\nFacts:"), breakfast);
  if (seed % 7 == 5) return "The description mentions several objects.";
  std::string out = "Facts:";
  for (const auto& [key, n] : parsed.facts) out += " " + key.first + "(" + key.second + "," + (n < 0 ? "irrel" : std::to_string(n)) + ");";
  return out;
}

std::int64_t scripted_latency(const io::Request& req, const std::string& response) {
  const auto n = static_cast<std::int64_t>(response.size());
  if (req.client == "vision") return 700 + 2 * n;
  if (req.client == "llm") return 300 + n;
  if (req.client == "roi") return 240;
  return 60;
}

// ---- output --------------------------------------------------------------

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::string config_text() {
  return R"(# Offline fixture configuration: replays recorded responses only.
mode = "replay"
cache_dir = "cache"
taskspec_dir = "../samples/taskspecs"
vision_model = "fixture-vision"
llm_model = "fixture-llm"
embedding_model = "fixture-hashing-256"
roi_model = "fixture-detector"
k = 3
lof_k = 1
lof_threshold = 1.5
padding = 1
select = "random"
seeds = [0, 1, 2]
workers = 4
timestamp = ")" + std::string(kTimestamp) +
         "\"\n";
}

std::string run_jsonl(const app::RunOutput& r) {
  std::string s;
  for (const auto& run : r.per_seed)
    for (const auto& rep : run) s += reasoner::to_jsonl(rep);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli("Generate the offline fixture set");
  std::string out_dir = "fixtures";
  cli.add_option("-o,--out", out_dir, "output directory")->capture_default_str();
  CLI11_PARSE(cli, argc, argv);

  try {
    const fs::path out(out_dir);
    for (const char* sub : {"cache", "images", "golden"}) fs::remove_all(out / sub);

    std::string manifest;
    for (const auto& s : scenes()) {
      const std::string rel = "images/" + s.category + "/" + s.split + "/" + s.name + ".png";
      // Scene files are written once; only crops cut at run time need the
      // stored-block encoder.
      std::vector<uchar> png;
      cv::imencode(".png", render(s), png, {cv::IMWRITE_PNG_COMPRESSION, 9});
      write(out / rel, std::string(png.begin(), png.end()));
      manifest += app::to_jsonl(app::ManifestEntry{rel, s.category, s.label, s.split});
    }
    write(out / "manifest.jsonl", manifest);
    write(out / "config.toml", config_text());

    const auto base_cfg = app::load_config(out / "config.toml");
    const auto m = app::load_manifest(out / "manifest.jsonl");

    // Record: run every ablation against the scripted backends.
    {
      io::RecordReplay rr(base_cfg.cache_dir, io::Mode::Live, base_cfg.retry);
      rr.set_timestamp(kTimestamp);
      rr.set_latency_model(scripted_latency);
      extraction::HashingEmbedder hashing;
      io::CachedVisionClient vision(rr, "vision", base_cfg.vision.model, scripted_vision);
      io::CachedVisionClient llm(rr, "llm", base_cfg.llm.model,
                                 [](const io::Bytes&, const std::string& p, std::uint64_t s) { return scripted_llm(p, s); });
      io::CachedRoiClient roi(rr, base_cfg.roi.model, scripted_detect);
      io::CachedEmbeddingClient embed(rr, base_cfg.embedding.model,
                                      [&](const std::string& t) { return nlohmann::json(hashing.embed(t)).dump(); });
      app::Services s{vision, llm, roi, embed};
      for (const auto& a : app::ablation_matrix()) {
        auto cfg = a.apply(base_cfg);
        cfg.mode = io::Mode::Live;
        app::run_all(m, cfg, s, [](const std::string& line) { std::cerr << "make_fixtures: " << line << "\n"; });
      }
    }

    // Golden outputs come from a pure replay of what was just recorded.
    for (const auto& a : app::ablation_matrix()) {
      const auto cfg = a.apply(base_cfg);
      app::ServiceStack stack(cfg);
      auto s = stack.services();
      const auto r = app::run_all(m, cfg, s);
      write(out / "golden" / (a.name + ".jsonl"), run_jsonl(r));
      write(out / "golden" / (a.name + ".csv"), metrics::to_csv(r.table));
      std::cout << a.name << ": " << r.per_seed.size() << " seeds, " << r.error_rows << " error rows\n" << metrics::to_pretty(r.table);
    }
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(base_cfg.cache_dir)) ++files;
    std::cout << files << " cached responses in " << base_cfg.cache_dir.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
