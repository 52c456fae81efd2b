#pragma once

#include <cstdint>
#include <string>

#include "logicad/error.hpp"
#include "logicad/extraction/clients.hpp"
#include "logicad/fol/parser.hpp"
#include "logicad/forge/task_spec.hpp"

namespace logicad::reasoner {

inline constexpr const char* kDefaultFormalizePrompt =
    "Translate the description into ground facts of the form predicate(object,count), separated by semicolons. "
    "Write irrel when the count does not matter. Use singular lowercase object names.\nDescription:";

inline constexpr int kFormalizeAttempts = 3;

// Keeps what follows the last "Facts:" marker and drops code fences.
inline std::string facts_payload(const std::string& reply) {
  std::string s = reply;
  const auto marker = s.rfind("Facts:");
  if (marker != std::string::npos) s = s.substr(marker + 6);
  std::string out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto nl = s.find('\n', pos);
    if (nl == std::string::npos) nl = s.size();
    const std::string line = s.substr(pos, nl - pos);
    if (line.rfind("```", 0) != 0) out += line + "\n";
    pos = nl + 1;
  }
  return out;
}

// Facts whose predicate also occurs in the norm must use the same arity.
inline void check_fact_arity(const fol::FactSet& facts, const forge::TaskSpec& spec) {
  const auto sig = forge::predicate_signature(spec.norm);
  for (const auto& a : facts) {
    auto it = sig.find(a.predicate());
    if (it != sig.end() && !it->second.count(a.args().size()))
      throw ArityError("fact " + fol::print_atom(a) + " does not match the arity used in [norm]");
  }
}

// Asks the language model for the fact set of a description. Attempt i
// samples with seed + i.
inline fol::FactSet formalize(const std::string& text, extraction::VisionClient& llm, const forge::TaskSpec& spec, std::uint64_t seed) {
  const std::string prompt = (spec.formalize_prompt.empty() ? std::string(kDefaultFormalizePrompt) : spec.formalize_prompt) + "\n" +
                             text + "\nFacts:";
  std::string last;
  for (int attempt = 0; attempt < kFormalizeAttempts; ++attempt) {
    const std::string reply = llm.describe("", prompt, seed + static_cast<std::uint64_t>(attempt));
    try {
      fol::FactSet facts = fol::parse_facts(facts_payload(reply));
      check_fact_arity(facts, spec);
      return facts;
    } catch (const ServiceError&) {
      throw;
    } catch (const Error& e) {
      last = e.what();
    }
  }
  throw FormalizeError("no parsable fact set after " + std::to_string(kFormalizeAttempts) + " attempts: " + last);
}

}  // namespace logicad::reasoner
