#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicad/error.hpp"
#include "logicad/fol/parser.hpp"
#include "logicad/fol/theory.hpp"

namespace logicad::forge {

using fol::FactSet;
using fol::Formula;
using fol::Term;
using fol::Theory;

// Argument positions are 0-based here; the file format is 1-based.
struct FunctionalPredicate {
  std::string predicate;
  std::size_t object_index = 0;
  std::size_t value_index = 1;
  friend bool operator==(const FunctionalPredicate&, const FunctionalPredicate&) = default;
};

struct DefaultValue {
  std::string predicate;
  std::string object;
  std::uint64_t value = 0;
  friend bool operator==(const DefaultValue&, const DefaultValue&) = default;
};

struct TaskSpec {
  std::string category;
  Theory norm;
  std::vector<FunctionalPredicate> functional;
  std::vector<DefaultValue> defaults;
  // Present only when the file has a [synonyms] section; it then replaces the oracle.
  std::optional<std::vector<std::pair<std::string, std::string>>> synonym_table;
  std::string gcot_prompt;
  std::vector<std::string> feature_prompts;
  std::string formalize_prompt;   // optional [formalize] block
  std::string summary_prompt;     // optional [summary] block
  std::string narrative_template; // optional [narrative] block, `{atoms}` placeholder
  std::string schema_file;        // optional [schema], relative to the spec file
  std::filesystem::path source;

  const FunctionalPredicate* functional_for(const std::string& predicate) const {
    for (const auto& f : functional) {
      if (f.predicate == predicate) return &f;
    }
    return nullptr;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

inline std::string strip_comments(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    out += strip_comment(line);
    if (nl == std::string_view::npos) break;
    out += '\n';
    start = nl + 1;
  }
  return out;
}

inline std::vector<std::string> split_items(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ';' || c == '\n') {
      if (auto t = trim(cur); !t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (auto t = trim(cur); !t.empty()) out.push_back(t);
  return out;
}

struct Section {
  std::string name;
  std::string body;
  std::size_t line = 1;       // line of the header
  std::size_t body_line = 1;  // line where the body text starts
  std::size_t body_col = 1;
  bool block = false;
};

inline std::string where(const std::string& file, std::size_t line) {
  return (file.empty() ? std::string("<taskspec>") : file) + ":" + std::to_string(line) + ": ";
}

inline std::vector<Section> split_sections(std::string_view text, const std::string& file) {
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    lines.push_back(cur);
  }

  std::vector<Section> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& raw = lines[i];
    const std::string t = trim(raw);
    if (t.empty() || t[0] == '#') continue;
    if (t[0] != '[') throw SpecError(where(file, i + 1) + "expected a section header like [norm]");
    const auto close = t.find(']');
    if (close == std::string::npos) throw SpecError(where(file, i + 1) + "unterminated section header");
    Section s;
    s.name = t.substr(1, close - 1);
    s.line = i + 1;
    const auto header_end = raw.find(']') + 1;
    std::string rest = raw.substr(header_end);
    const std::string rest_trim = trim(rest);

    if (rest_trim.rfind("<<<", 0) == 0) {
      // Verbatim block, may span lines, no comment stripping.
      s.block = true;
      std::string acc = rest.substr(rest.find("<<<") + 3);
      std::size_t j = i;
      for (;;) {
        const auto end = acc.find(">>>");
        if (end != std::string::npos) {
          if (!trim(acc.substr(end + 3)).empty()) throw SpecError(where(file, j + 1) + "text after '>>>'");
          acc.resize(end);
          break;
        }
        if (++j >= lines.size()) throw SpecError(where(file, s.line) + "unterminated '<<<' block");
        acc += "\n" + lines[j];
      }
      // Drop one leading and one trailing newline so `<<<\n...\n>>>` reads naturally.
      if (!acc.empty() && acc.front() == '\n') acc.erase(0, 1);
      if (!acc.empty() && acc.back() == '\n') acc.pop_back();
      s.body = acc;
      i = j;
    } else {
      s.body = rest;
      s.body_line = i + 1;
      s.body_col = header_end + 1;
      std::size_t j = i + 1;
      while (j < lines.size()) {
        const std::string tj = trim(lines[j]);
        if (!tj.empty() && tj[0] == '[') break;
        s.body += "\n" + lines[j];
        ++j;
      }
      i = j - 1;
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::size_t parse_index(const std::string& s, const std::string& ctx) {
  if (s.empty() || s.size() > 3 || s.find_first_not_of("0123456789") != std::string::npos)
    throw SpecError(ctx + "bad argument position '" + s + "'");
  const auto v = std::stoul(s);
  if (v == 0) throw SpecError(ctx + "argument positions start at 1");
  return v - 1;
}

inline FunctionalPredicate parse_functional(const std::string& item, const std::string& ctx) {
  const auto open = item.find('(');
  const auto close = item.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open || !trim(item.substr(close + 1)).empty())
    throw SpecError(ctx + "expected pred(obj@N, count@M), got '" + item + "'");
  FunctionalPredicate fp;
  fp.predicate = trim(item.substr(0, open));
  if (!fol::is_lower_identifier(fp.predicate)) throw SpecError(ctx + "invalid predicate name '" + fp.predicate + "'");
  std::vector<std::string> roles;
  std::string cur;
  for (char c : item.substr(open + 1, close - open - 1)) {
    if (c == ',') {
      roles.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  roles.push_back(trim(cur));
  if (roles.size() != 2) throw ArityError(ctx + "functional predicate " + fp.predicate + " must have arity 2");
  std::optional<std::size_t> obj, val;
  for (const auto& r : roles) {
    const auto at = r.find('@');
    if (at == std::string::npos) throw SpecError(ctx + "expected role@position, got '" + r + "'");
    const std::string role = trim(r.substr(0, at));
    const std::size_t idx = parse_index(trim(r.substr(at + 1)), ctx);
    if (idx > 1) throw ArityError(ctx + "functional predicate " + fp.predicate + " must have arity 2");
    if (role == "obj") {
      obj = idx;
    } else if (role == "count") {
      val = idx;
    } else {
      throw SpecError(ctx + "unknown role '" + role + "' (expected obj or count)");
    }
  }
  if (!obj || !val || *obj == *val) throw SpecError(ctx + "functional predicate " + fp.predicate + " needs one obj and one count position");
  fp.object_index = *obj;
  fp.value_index = *val;
  return fp;
}

inline DefaultValue parse_default(const std::string& item, const std::string& ctx) {
  // left(tangerine)=0
  const auto open = item.find('(');
  const auto close = item.find(')');
  const auto eq = item.find('=');
  if (open == std::string::npos || close == std::string::npos || eq == std::string::npos || !(open < close && close < eq))
    throw SpecError(ctx + "expected pred(object)=N, got '" + item + "'");
  DefaultValue d;
  d.predicate = trim(item.substr(0, open));
  d.object = trim(item.substr(open + 1, close - open - 1));
  const std::string num = trim(item.substr(eq + 1));
  if (!fol::is_lower_identifier(d.predicate) || !fol::is_lower_identifier(d.object))
    throw SpecError(ctx + "invalid name in default '" + item + "'");
  if (!trim(item.substr(close + 1, eq - close - 1)).empty()) throw SpecError(ctx + "expected '=' after ')' in '" + item + "'");
  if (num.empty() || num.size() > 18 || num.find_first_not_of("0123456789") != std::string::npos)
    throw SpecError(ctx + "default value must be a numeral, got '" + num + "'");
  d.value = std::stoull(num);
  return d;
}

inline void signature_of(const Formula& f, std::map<std::string, std::set<std::size_t>>& sig) {
  fol::visit(f, [&](const Formula& g) {
    if (g.is_atom()) sig[g.predicate()].insert(g.args().size());
  });
}

}  // namespace detail

inline std::map<std::string, std::set<std::size_t>> predicate_signature(const Theory& t) {
  std::map<std::string, std::set<std::size_t>> sig;
  for (const auto& f : t) detail::signature_of(f, sig);
  return sig;
}

// Parses the sectioned task-specification format. `file` is used only for
// error messages and for resolving the schema path.
inline TaskSpec parse_task_spec(std::string_view text, const std::filesystem::path& file = {}) {
  using namespace detail;
  const std::string fname = file.string();
  TaskSpec spec;
  spec.source = file;
  std::set<std::string> seen;
  bool have_norm = false;

  for (const auto& s : split_sections(text, fname)) {
    const std::string ctx = where(fname, s.line);
    if (!seen.insert(s.name).second) throw SpecError(ctx + "duplicate section [" + s.name + "]");
    const std::string body = s.block ? s.body : strip_comments(s.body);
    if (s.name == "category") {
      spec.category = trim(body);
      if (!fol::is_lower_identifier(spec.category)) throw SpecError(ctx + "category must be a lowercase identifier");
    } else if (s.name == "functional") {
      for (const auto& item : split_items(body)) spec.functional.push_back(parse_functional(item, ctx));
    } else if (s.name == "defaults") {
      for (const auto& item : split_items(body)) spec.defaults.push_back(parse_default(item, ctx));
    } else if (s.name == "synonyms") {
      std::vector<std::pair<std::string, std::string>> pairs;
      for (const auto& item : split_items(body)) {
        std::istringstream words(item);
        std::string w;
        while (words >> w) {
          const auto tilde = w.find('~');
          if (tilde == std::string::npos) throw SpecError(ctx + "expected a~b, got '" + w + "'");
          std::string a = w.substr(0, tilde), b = w.substr(tilde + 1);
          if (!fol::is_lower_identifier(a) || !fol::is_lower_identifier(b)) throw SpecError(ctx + "invalid synonym pair '" + w + "'");
          pairs.emplace_back(std::move(a), std::move(b));
        }
      }
      spec.synonym_table = std::move(pairs);
    } else if (s.name == "gcot") {
      spec.gcot_prompt = s.block ? s.body : trim(body);
    } else if (s.name == "formalize") {
      spec.formalize_prompt = s.block ? s.body : trim(body);
    } else if (s.name == "summary") {
      spec.summary_prompt = s.block ? s.body : trim(body);
    } else if (s.name == "narrative") {
      spec.narrative_template = s.block ? s.body : trim(body);
    } else if (s.name == "schema") {
      spec.schema_file = trim(body);
    } else if (s.name == "features") {
      spec.feature_prompts = split_items(body);
    } else if (s.name == "norm") {
      if (s.block) throw SpecError(ctx + "[norm] takes plain formulae, not a <<< block");
      have_norm = true;
      try {
        spec.norm = fol::parse_theory(s.body, SourcePos{s.body_line, s.body_col});
      } catch (const SyntaxError& e) {
        throw SyntaxError(e.pos(), (fname.empty() ? "" : fname + ":") + e.message(), e.expected());
      }
    } else {
      throw SpecError(ctx + "unknown section [" + s.name + "]");
    }
  }

  if (spec.category.empty()) throw SpecError(where(fname, 1) + "missing [category]");
  if (!have_norm) throw SpecError(where(fname, 1) + "missing [norm]");

  const auto sig = predicate_signature(spec.norm);
  std::set<std::string> fnames;
  for (const auto& fp : spec.functional) {
    if (!fnames.insert(fp.predicate).second) throw SpecError(where(fname, 1) + "functional predicate " + fp.predicate + " declared twice");
    auto it = sig.find(fp.predicate);
    if (it != sig.end() && (it->second.size() != 1 || *it->second.begin() != 2))
      throw ArityError(where(fname, 1) + "functional predicate " + fp.predicate + " is used with arity other than 2 in [norm]");
  }
  for (const auto& d : spec.defaults) {
    if (!sig.count(d.predicate)) throw SpecError(where(fname, 1) + "default for " + d.predicate + " which does not occur in [norm]");
    if (!spec.functional_for(d.predicate)) throw SpecError(where(fname, 1) + "default for " + d.predicate + " which is not declared functional");
  }
  return spec;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TaskSpec load_task_spec(const std::filesystem::path& path) { return parse_task_spec(read_text_file(path), path); }

inline std::filesystem::path schema_path(const TaskSpec& spec) {
  const auto dir = spec.source.has_parent_path() ? spec.source.parent_path() : std::filesystem::path(".");
  return dir / (spec.schema_file.empty() ? spec.category + ".schema.json" : spec.schema_file);
}

}  // namespace logicad::forge
