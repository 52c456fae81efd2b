#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logicad/error.hpp"

namespace logicad::metrics {

struct ScoreRecord {
  std::string image;
  std::string category;
  int label = 0;  // 1 = anomalous
  double score = 0.0;
};

namespace detail {

inline void validate(const std::vector<ScoreRecord>& records) {
  for (const auto& r : records) {
    if (r.label != 0 && r.label != 1) throw DegenerateInput("label must be 0 or 1 for " + r.image);
    if (!std::isfinite(r.score)) throw DegenerateInput("non-finite score for " + r.image);
  }
}

}  // namespace detail

// Mann-Whitney: P(score_pos > score_neg) + 0.5 P(equal), via a sort and
// tie groups.
inline double auroc(const std::vector<ScoreRecord>& records) {
  detail::validate(records);
  std::vector<std::pair<double, int>> v;
  v.reserve(records.size());
  std::size_t pos = 0, neg = 0;
  for (const auto& r : records) {
    v.emplace_back(r.score, r.label);
    (r.label ? pos : neg)++;
  }
  if (pos == 0 || neg == 0) throw DegenerateLabels("AUROC needs at least one normal and one anomalous record");
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double wins = 0.0;  // in units of half pairs
  std::size_t neg_below = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i, p = 0, n = 0;
    while (j < v.size() && v[j].first == v[i].first) {
      (v[j].second ? p : n)++;
      ++j;
    }
    wins += 2.0 * static_cast<double>(p) * static_cast<double>(neg_below) + static_cast<double>(p) * static_cast<double>(n);
    neg_below += n;
    i = j;
  }
  return wins / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

struct F1Result {
  double f1 = 0.0;
  double threshold = 0.0;
  friend bool operator==(const F1Result&, const F1Result&) = default;
};

inline double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp) + static_cast<double>(fn);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

// score >= t is predicted anomalous.
inline double f1_at(const std::vector<ScoreRecord>& records, double t) {
  detail::validate(records);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& r : records) {
    const bool predicted = r.score >= t;
    if (predicted && r.label) ++tp;
    if (predicted && !r.label) ++fp;
    if (!predicted && r.label) ++fn;
  }
  return f1_from_counts(tp, fp, fn);
}

// Sweeps every distinct score as threshold; the smallest threshold reaching
// the maximum is reported.
inline F1Result f1_max(const std::vector<ScoreRecord>& records) {
  detail::validate(records);
  std::size_t pos = 0;
  for (const auto& r : records) pos += static_cast<std::size_t>(r.label);
  if (pos == 0) throw DegenerateLabels("F1-max needs at least one anomalous record");
  std::vector<std::pair<double, int>> v;
  for (const auto& r : records) v.emplace_back(r.score, r.label);
  // Descending: lowering the threshold admits one tie group at a time.
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::size_t tp = 0, fp = 0;
  F1Result best{-1.0, 0.0};
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j].first == v[i].first) {
      (v[j].second ? tp : fp)++;
      ++j;
    }
    const double f1 = f1_from_counts(tp, fp, pos - tp);
    if (f1 >= best.f1) best = {f1, v[i].first};
    i = j;
  }
  return best;
}

// Mean and sample standard deviation; sd is absent for a single value.
struct Summary {
  double mean = 0.0;
  std::optional<double> sd;
  std::size_t n = 0;
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct CategoryRow {
  std::string category;
  std::optional<Summary> auroc;  // absent = not applicable
  std::optional<Summary> f1_max;
  std::size_t images = 0;
};

struct MetricsTable {
  std::vector<CategoryRow> rows;  // sorted by category
  CategoryRow macro;              // category "mean"
  bool binary_scores = false;
};

// One record list per repeated run (seed). With binary scores AUROC is not
// reported and F1 is taken at threshold 1.
inline MetricsTable aggregate(const std::vector<std::vector<ScoreRecord>>& runs, bool binary_scores = false) {
  MetricsTable table;
  table.binary_scores = binary_scores;
  std::map<std::string, std::vector<double>> au, f1;
  std::map<std::string, std::size_t> images;
  std::vector<double> macro_au, macro_f1;
  for (const auto& run : runs) {
    std::map<std::string, std::vector<ScoreRecord>> by_cat;
    for (const auto& r : run) by_cat[r.category].push_back(r);
    std::vector<double> run_au, run_f1;
    for (const auto& [cat, recs] : by_cat) {
      images[cat] = std::max(images[cat], recs.size());
      bool has_pos = false, has_neg = false;
      for (const auto& r : recs) (r.label ? has_pos : has_neg) = true;
      if (has_pos) {
        const double f = binary_scores ? f1_at(recs, 1.0) : f1_max(recs).f1;
        f1[cat].push_back(f);
        run_f1.push_back(f);
      }
      if (!binary_scores && has_pos && has_neg) {
        const double a = auroc(recs);
        au[cat].push_back(a);
        run_au.push_back(a);
      }
    }
    if (!run_au.empty()) macro_au.push_back(summarize(run_au).mean);
    if (!run_f1.empty()) macro_f1.push_back(summarize(run_f1).mean);
  }
  for (const auto& [cat, n] : images) {
    CategoryRow row;
    row.category = cat;
    row.images = n;
    if (au.count(cat)) row.auroc = summarize(au[cat]);
    if (f1.count(cat)) row.f1_max = summarize(f1[cat]);
    table.rows.push_back(row);
  }
  table.macro.category = "mean";
  for (const auto& r : table.rows) table.macro.images += r.images;
  if (!macro_au.empty()) table.macro.auroc = summarize(macro_au);
  if (!macro_f1.empty()) table.macro.f1_max = summarize(macro_f1);
  return table;
}

namespace detail {

inline std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string csv_cells(const std::optional<Summary>& s) {
  if (!s) return "N/A,";
  return fixed(s->mean, 6) + "," + (s->sd ? fixed(*s->sd, 6) : "");
}

inline std::string pretty_cell(const std::optional<Summary>& s) {
  if (!s) return "N/A";
  std::string out = fixed(100.0 * s->mean, 1);
  if (s->sd) out += "\xC2\xB1" + fixed(100.0 * *s->sd, 1);
  return out;
}

}  // namespace detail

inline std::string to_csv(const MetricsTable& t) {
  std::string out = "category,images,auroc_mean,auroc_sd,f1max_mean,f1max_sd,runs\n";
  auto line = [&](const CategoryRow& r) {
    const std::size_t runs = r.f1_max ? r.f1_max->n : (r.auroc ? r.auroc->n : 0);
    out += r.category + "," + std::to_string(r.images) + "," + detail::csv_cells(r.auroc) + "," + detail::csv_cells(r.f1_max) +
           "," + std::to_string(runs) + "\n";
  };
  for (const auto& r : t.rows) line(r);
  line(t.macro);
  return out;
}

inline std::string to_pretty(const MetricsTable& t) {
  std::size_t width = 8;
  for (const auto& r : t.rows) width = std::max(width, r.category.size());
  auto pad = [](std::string s, std::size_t w) {
    // The plus-minus sign is two bytes but one column.
    std::size_t cols = 0;
    for (unsigned char c : s) cols += (c & 0xC0) != 0x80;
    if (cols < w) s.append(w - cols, ' ');
    return s;
  };
  std::string out = pad("category", width) + "  " + pad("AUROC", 12) + "  " + pad(t.binary_scores ? "F1" : "F1-max", 12) + "\n";
  auto line = [&](const CategoryRow& r) {
    out += pad(r.category, width) + "  " + pad(detail::pretty_cell(r.auroc), 12) + "  " + pad(detail::pretty_cell(r.f1_max), 12);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  };
  for (const auto& r : t.rows) line(r);
  line(t.macro);
  return out;
}

}  // namespace logicad::metrics
