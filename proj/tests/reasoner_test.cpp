#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>

#include "logicad/fol/parser.hpp"
#include "logicad/forge/axioms.hpp"
#include "logicad/reasoner/reasoner.hpp"
#include "logicad/reasoner/report.hpp"
#include "support/random_logic.hpp"

namespace logicad::reasoner {
namespace {

using fol::parse_facts;
using fol::parse_theory;

const std::filesystem::path kSpec = std::filesystem::path(LOGICAD_SOURCE_DIR) / "samples" / "taskspecs" / "breakfast_box.taskspec";

forge::Assembly breakfast(const std::string& facts) {
  return forge::assemble_gamma(forge::load_task_spec(kSpec), parse_facts(facts));
}

std::vector<std::string> printed(const FactSet& atoms) {
  std::vector<std::string> out;
  for (const auto& a : atoms) out.push_back(fol::print_atom(a));
  return out;
}

TEST(Classify, BreakfastBoxAbnormal) {
  auto a = breakfast("left(nectarine,1); left(apple,1); left(tangerine,2); right(nut,irrel);");
  EXPECT_EQ(classify(a.gamma, a.facts).label, Label::Abnormal);
  Explanation e = minimal_explanation(a.gamma, a.facts);
  EXPECT_EQ(printed(e.atoms), (std::vector<std::string>{"left(nectarine,1)", "left(apple,1)"}));
  EXPECT_TRUE(is_minimal_explanation(a.gamma, a.facts, e.atoms));
}

TEST(Classify, BreakfastBoxNormal) {
  auto a = breakfast("left(apple,1); left(nectarine,0); left(tangerine,2); right(nut,irrel);");
  EXPECT_EQ(classify(a.gamma, a.facts).label, Label::Normal);
  EXPECT_THROW(minimal_explanation(a.gamma, a.facts), NotAnomalous);
  auto b = breakfast("left(nectarine,1); left(mandarin,2);");
  EXPECT_EQ(classify(b.gamma, b.facts).label, Label::Normal);
}

TEST(Classify, BugIsSingletonExplanation) {
  auto a = breakfast("left(apple,1); left(nectarine,0); left(tangerine,2); left(bug,1);");
  EXPECT_EQ(classify(a.gamma, a.facts).label, Label::Abnormal);
  EXPECT_EQ(printed(minimal_explanation(a.gamma, a.facts).atoms), (std::vector<std::string>{"left(bug,1)"}));
}

TEST(Classify, MissingTangerineViaDefault) {
  auto a = breakfast("left(apple,1);");
  EXPECT_EQ(classify(a.gamma, a.facts).label, Label::Abnormal);
  EXPECT_EQ(printed(minimal_explanation(a.gamma, a.facts).atoms), (std::vector<std::string>{"left(mandarin,0)"}));
}

TEST(Classify, EmptyGammaIsNormal) {
  testing::FormulaGenerator gen(3, {});
  for (int i = 0; i < 50; ++i) {
    FactSet facts;
    for (int k = 0; k < 4; ++k) facts.add(gen.ground_atom());
    EXPECT_EQ(classify(Theory{}, facts).label, Label::Normal);
  }
}

TEST(Verdict, BinaryScore) {
  EXPECT_EQ(Verdict{Label::Normal}.binary_score(), 0.0);
  EXPECT_EQ(Verdict{Label::Abnormal}.binary_score(), 1.0);
}

// Minimality is checked against the finite-model oracle rather than the engine.
TEST(MinimalExplanation, GeneratedInstancesAreMinimal) {
  testing::FormulaGenerator gen(404, {});
  int checked = 0;
  for (int i = 0; i < 5000 && checked < 120; ++i) {
    Theory gamma;
    const int nf = gen.uniform(1, 3);
    for (int k = 0; k < nf; ++k) gamma.add(gen.formula(gen.uniform(1, 3)));
    FactSet facts;
    const int na = gen.uniform(1, 5);
    for (int k = 0; k < na; ++k) facts.add(gen.ground_atom());
    if (!classify(gamma, facts).abnormal()) continue;
    Explanation e = minimal_explanation(gamma, facts);

    std::vector<fol::Formula> everything(gamma.begin(), gamma.end());
    everything.insert(everything.end(), facts.begin(), facts.end());
    const auto domain = testing::expected_domain(everything, 1);
    auto unsat_with = [&](const std::vector<fol::Formula>& atoms) {
      std::vector<fol::Formula> fs(gamma.begin(), gamma.end());
      fs.insert(fs.end(), atoms.begin(), atoms.end());
      testing::FiniteModelOracle oracle(domain, gen.signature().predicates);
      return !oracle.satisfiable(fs);
    };
    std::vector<fol::Formula> ex(e.atoms.begin(), e.atoms.end());
    ASSERT_TRUE(unsat_with(ex));
    for (std::size_t k = 0; k < ex.size(); ++k) {
      auto rest = ex;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      ASSERT_FALSE(unsat_with(rest)) << fol::print_theory(gamma) << " | " << e.atoms;
    }
    // Sigma0 order is preserved.
    std::size_t pos = 0;
    for (const auto& a : ex) {
      while (pos < facts.size() && !(facts.atoms()[pos] == a)) ++pos;
      ASSERT_LT(pos, facts.size());
    }
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(MinimalExplanation, InconsistentGammaGivesEmptySet) {
  Theory gamma = parse_theory("p(a) & ~p(a);");
  Explanation e = minimal_explanation(gamma, parse_facts("q(b);"));
  EXPECT_TRUE(e.atoms.empty());
}

TEST(MinimalExplanation, AddingFactsNeverFlipsToNormal) {
  auto a = breakfast("left(nectarine,1); left(apple,1); left(tangerine,2);");
  testing::Signature sig;
  sig.constants = {"apple", "nectarine", "mandarin", "bug"};
  sig.numerals = {0, 1, 2};
  sig.predicates = {{"left", 2}, {"right", 2}};
  testing::FormulaGenerator gen(8, sig);
  for (int i = 0; i < 50; ++i) {
    FactSet more = a.facts;
    more.add(gen.ground_atom());
    more.add(gen.ground_atom());
    EXPECT_TRUE(classify(a.gamma, more).abnormal());
  }
}

TEST(Narrative, Templates) {
  EXPECT_EQ(render_narrative({Label::Normal}, nullptr), "No logical anomaly detected.");
  Explanation two{parse_facts("left(nectarine,1); left(apple,1);")};
  const std::string n = render_narrative({Label::Abnormal}, &two);
  EXPECT_NE(n.find("left(nectarine,1)"), std::string::npos);
  EXPECT_NE(n.find("left(apple,1)"), std::string::npos);
  EXPECT_EQ(n, "Conflict: left(nectarine,1) and left(apple,1) cannot hold together under the normal specification.");
  Explanation one{parse_facts("left(bug,1);")};
  EXPECT_EQ(render_narrative({Label::Abnormal}, &one, "Unexpected: {atoms}."), "Unexpected: left(bug,1).");
  Explanation three{parse_facts("a(x); b(x); c(x);")};
  EXPECT_EQ(render_narrative({Label::Abnormal}, &three, "{atoms}"), "a(x), b(x) and c(x)");
}

TEST(Report, JsonlMatchesSchema) {
  auto a = breakfast("left(nectarine,1); left(apple,1); left(tangerine,2);");
  Verdict v = classify(a.gamma, a.facts);
  Explanation e = minimal_explanation(a.gamma, a.facts);
  AnomalyReport r = render_report("bb/test/001.png", "breakfast_box", v, e, 0.125);
  r.elapsed_ms = 42;
  const std::string line = to_jsonl(r);
  ASSERT_EQ(line.back(), '\n');
  EXPECT_EQ(line.find('\n'), line.size() - 1);
  auto j = json::parse(line);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"image", "category", "verdict", "ascore", "explanation", "narrative", "elapsed_ms",
                                            "seed", "modules"}));
  EXPECT_TRUE(j["image"].is_string());
  EXPECT_EQ(j["verdict"], "abnormal");
  EXPECT_TRUE(j["ascore"].is_number_float());
  EXPECT_EQ(j["explanation"], json::array({"left(nectarine,1)", "left(apple,1)"}));
  EXPECT_TRUE(j["elapsed_ms"].is_number_integer());
  EXPECT_EQ(report_from_jsonl(line), r);
}

TEST(Report, NullableFields) {
  AnomalyReport normal = render_report("x", "c", Verdict{Label::Normal}, std::nullopt, std::nullopt);
  auto j = to_json(normal);
  EXPECT_EQ(j["verdict"], "normal");
  EXPECT_TRUE(j["ascore"].is_null());
  EXPECT_TRUE(j["explanation"].is_null());
  EXPECT_EQ(j["narrative"], "No logical anomaly detected.");

  AnomalyReport no_lr = render_report("x", "c", std::nullopt, std::nullopt, 0.5);
  EXPECT_TRUE(to_json(no_lr)["verdict"].is_null());
  EXPECT_EQ(report_from_json(to_json(no_lr)), no_lr);

  EXPECT_THROW(report_from_jsonl("{\"image\": 3}"), SchemaError);
  EXPECT_THROW(report_from_jsonl("not json"), SchemaError);
}

TEST(Report, Deterministic) {
  auto run = [] {
    auto a = breakfast("left(nectarine,1); left(apple,1); left(tangerine,2); right(nut,irrel);");
    Verdict v = classify(a.gamma, a.facts);
    return to_jsonl(render_report("img", "breakfast_box", v, minimal_explanation(a.gamma, a.facts), std::nullopt));
  };
  EXPECT_EQ(run(), run());
}

TEST(GoldenBreakfastBox, UnderOneSecond) {
  const auto start = std::chrono::steady_clock::now();
  auto a = breakfast("left(nectarine,1); left(apple,1); left(tangerine,2); right(nut,irrel);");
  EXPECT_TRUE(classify(a.gamma, a.facts).abnormal());
  minimal_explanation(a.gamma, a.facts);
  auto b = breakfast("left(apple,1); left(nectarine,0); left(tangerine,2);");
  EXPECT_FALSE(classify(b.gamma, b.facts).abnormal());
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(ms, 1000);
}

}  // namespace
}  // namespace logicad::reasoner
