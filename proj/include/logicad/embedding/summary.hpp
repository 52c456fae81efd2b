#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "logicad/error.hpp"
#include "logicad/extraction/clients.hpp"
#include "logicad/forge/task_spec.hpp"

namespace logicad::embedding {

// Value kinds a summary field may take.
//   counts   object of name -> non-negative integer or "irrel"
//   string, number, integer, boolean, list (array of strings), object
// A trailing '?' marks a field optional.
enum class FieldKind { Counts, String, Number, Integer, Boolean, List, Object };

struct FieldSpec {
  FieldKind kind = FieldKind::String;
  bool optional = false;
};

struct SummarySchema {
  std::string category;
  std::map<std::string, FieldSpec> fields;
};

inline FieldKind parse_field_kind(const std::string& s) {
  static const std::map<std::string, FieldKind> kinds{{"counts", FieldKind::Counts},   {"string", FieldKind::String},
                                                      {"number", FieldKind::Number},   {"integer", FieldKind::Integer},
                                                      {"boolean", FieldKind::Boolean}, {"list", FieldKind::List},
                                                      {"object", FieldKind::Object}};
  auto it = kinds.find(s);
  if (it == kinds.end()) throw SchemaError("unknown field kind '" + s + "'");
  return it->second;
}

inline SummarySchema parse_schema(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("fields") || !j["fields"].is_object() || j["fields"].empty()) {
    throw SchemaError("schema needs a non-empty \"fields\" object");
  }
  SummarySchema s;
  if (j.contains("category")) {
    if (!j["category"].is_string()) throw SchemaError("schema \"category\" must be a string");
    s.category = j["category"].get<std::string>();
  }
  for (const auto& [name, kind] : j["fields"].items()) {
    if (!kind.is_string()) throw SchemaError("kind of field '" + name + "' must be a string");
    std::string k = kind.get<std::string>();
    FieldSpec f;
    if (!k.empty() && k.back() == '?') {
      f.optional = true;
      k.pop_back();
    }
    f.kind = parse_field_kind(k);
    s.fields[name] = f;
  }
  return s;
}

inline SummarySchema load_schema(const std::filesystem::path& path) {
  try {
    return parse_schema(forge::read_text_file(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

// Throws SchemaError naming the first offending field.
inline void validate_summary(const nlohmann::json& j, const SummarySchema& schema) {
  if (!j.is_object()) throw SchemaError("summary must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!schema.fields.count(key)) throw SchemaError("unexpected field '" + key + "'");
  }
  for (const auto& [name, f] : schema.fields) {
    if (!j.contains(name)) {
      if (f.optional) continue;
      throw SchemaError("missing field '" + name + "'");
    }
    const auto& v = j.at(name);
    bool ok = false;
    switch (f.kind) {
      case FieldKind::Counts:
        ok = v.is_object();
        if (ok) {
          for (const auto& [obj, n] : v.items()) {
            const bool count = n.is_number_unsigned() || (n.is_number_integer() && n.get<std::int64_t>() >= 0);
            if (obj.empty() || !(count || n == "irrel")) ok = false;
          }
        }
        break;
      case FieldKind::String: ok = v.is_string(); break;
      case FieldKind::Number: ok = v.is_number(); break;
      case FieldKind::Integer: ok = v.is_number_integer(); break;
      case FieldKind::Boolean: ok = v.is_boolean(); break;
      case FieldKind::List:
        ok = v.is_array();
        if (ok) {
          for (const auto& e : v) ok = ok && e.is_string();
        }
        break;
      case FieldKind::Object: ok = v.is_object(); break;
    }
    if (!ok) throw SchemaError("field '" + name + "' has the wrong kind: " + v.dump());
  }
}

// Canonical text: sorted keys (nlohmann::json stores objects in std::map),
// no whitespace.
struct StructuredSummary {
  nlohmann::json value;
  std::string canonical() const { return value.dump(); }
};

// Pulls the outermost {...} out of a chat reply, which may wrap it in prose
// or a code fence.
inline std::string extract_json_object(const std::string& reply) {
  const auto b = reply.find('{');
  const auto e = reply.rfind('}');
  if (b == std::string::npos || e == std::string::npos || e < b) return reply;
  return reply.substr(b, e - b + 1);
}

inline constexpr const char* kDefaultSummaryPrompt =
    "Summarize the description below as a single JSON object. Use only the listed keys. "
    "Object counts are integers; write \"irrel\" when the count does not matter.";

inline std::string summary_request(const std::string& text, const SummarySchema& schema, const std::string& prompt) {
  std::string keys;
  for (const auto& [name, f] : schema.fields) {
    static const char* names[] = {"counts", "string", "number", "integer", "boolean", "list", "object"};
    keys += "- " + name + ": " + names[static_cast<int>(f.kind)] + (f.optional ? " (optional)" : "") + "\n";
  }
  return (prompt.empty() ? std::string(kDefaultSummaryPrompt) : prompt) + "\n\nKeys:\n" + keys + "\nDescription:\n" + text +
         "\n\nJSON:";
}

inline constexpr int kSummaryAttempts = 3;

// Attempt i samples with seed + i so a replayed retry is a distinct request.
inline StructuredSummary summarize(const std::string& text, extraction::VisionClient& llm, const SummarySchema& schema,
                                   const std::string& prompt, std::uint64_t seed) {
  if (text.empty()) throw SummarizeError("empty description");
  const std::string request = summary_request(text, schema, prompt);
  std::string last;
  for (int attempt = 0; attempt < kSummaryAttempts; ++attempt) {
    const std::string reply = llm.describe("", request, seed + static_cast<std::uint64_t>(attempt));
    try {
      auto j = nlohmann::json::parse(extract_json_object(reply));
      validate_summary(j, schema);
      return StructuredSummary{std::move(j)};
    } catch (const nlohmann::json::exception& e) {
      last = e.what();
    } catch (const SchemaError& e) {
      last = e.what();
    }
  }
  throw SummarizeError("no valid summary after " + std::to_string(kSummaryAttempts) + " attempts: " + last);
}

}  // namespace logicad::embedding
