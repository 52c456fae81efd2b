#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "logicad/engine/clauses.hpp"
#include "logicad/engine/entailment.hpp"
#include "logicad/engine/grounder.hpp"
#include "logicad/engine/prover9.hpp"
#include "logicad/engine/sat.hpp"
#include "logicad/engine/universe.hpp"
#include "logicad/fol/parser.hpp"
#include "support/random_logic.hpp"

namespace logicad::engine {
namespace {

using fol::parse_facts;
using fol::parse_formula;
using fol::parse_theory;
using fol::print_formula;

const char* kBreakfastGamma =
    "(left(apple,1) & left(nectarine,0)) | (left(nectarine,1) & left(apple,0));\n"
    "left(tangerine,2);\n"
    "forall X. exists Y. left(X,Y) & (forall Z. left(X,Z) -> Z = Y);\n"
    "forall X. ~left(X,0) -> (X = apple | X = nectarine | X = tangerine);\n";

// --- universe ---------------------------------------------------------------

TEST(CollectUniverse, MentionedSymbols) {
  Theory gamma = parse_theory(kBreakfastGamma);
  Universe u = collect_universe(gamma, parse_facts("right(nut,0);"), 0);
  EXPECT_EQ(u.constants(), (std::set<std::string>{"apple", "nectarine", "nut", "tangerine"}));
  EXPECT_EQ(u.numerals(), (std::set<std::uint64_t>{0, 1, 2}));
  ASSERT_EQ(u.size(), 7u);
  EXPECT_EQ(u.elements().front(), Term::constant("apple"));
  EXPECT_EQ(u.elements().back(), Term::numeral(2));
}

TEST(CollectUniverse, PaddingOnly) {
  Universe u = collect_universe(Theory{}, FactSet{}, 1);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u.elements()[0].name(), "_pad0");
  EXPECT_THROW(collect_universe(Theory{}, FactSet{}, 0), EmptyUniverse);
}

TEST(CollectUniverse, InvariantUnderFormulaOrder) {
  testing::FormulaGenerator gen(5, {});
  for (int i = 0; i < 100; ++i) {
    std::vector<fol::Formula> fs;
    for (int k = 0; k < 4; ++k) fs.push_back(gen.formula(3));
    std::vector<fol::Formula> shuffled = fs;
    std::shuffle(shuffled.begin(), shuffled.end(), gen.rng());
    EXPECT_EQ(collect_universe(Theory(fs), FactSet{}, 2), collect_universe(Theory(shuffled), FactSet{}, 2));
  }
}

// --- grounding --------------------------------------------------------------

TEST(Ground, ExistentialExpandsToDisjunction) {
  Universe u({"nut"}, {0, 1}, 0);
  // Restrict to the numerals by hand: the universe also contains `nut`.
  Universe numerals_only({}, {0, 1}, 0);
  fol::Formula g = ground(parse_formula("exists Y. right(nut,Y)"), numerals_only);
  EXPECT_EQ(print_formula(g), "right(nut,0) | right(nut,1)");
  EXPECT_EQ(print_formula(ground(parse_formula("exists Y. right(nut,Y)"), u)), "right(nut,nut) | right(nut,0) | right(nut,1)");
}

TEST(Ground, UniqueNamesDecideEquality) {
  Universe u({"apple", "tangerine"}, {}, 0);
  EXPECT_TRUE(ground(parse_formula("tangerine = apple"), u).is(fol::FormulaKind::False));
  EXPECT_TRUE(ground(parse_formula("tangerine = tangerine"), u).is(fol::FormulaKind::True));
  EXPECT_TRUE(ground(parse_formula("tangerine != apple"), u).is(fol::FormulaKind::True));
  EXPECT_TRUE(ground(parse_formula("forall X. X = X"), u).is(fol::FormulaKind::True));
  EXPECT_TRUE(ground(parse_formula("exists X. X != X"), u).is(fol::FormulaKind::False));
}

TEST(Ground, ConstantsAbsorbed) {
  Universe u({"a", "b"}, {}, 0);
  fol::Formula g = ground(parse_formula("forall X. X = a -> p(X)"), u);
  EXPECT_EQ(print_formula(g), "p(a)");
  EXPECT_EQ(print_formula(ground(parse_formula("forall X. ~p(X,0) -> X = a"), Universe({"a", "b"}, {0}, 0))),
            "p(b,0) & p(0,0)");
}

// Grounding followed by propositional evaluation agrees with direct
// evaluation of the quantified formula in random finite models.
TEST(Ground, AgreesWithDirectEvaluation) {
  testing::Signature sig;
  sig.predicates = {{"p", 2}, {"q", 1}};
  testing::FormulaGenerator gen(31337, sig);
  for (int i = 0; i < 200; ++i) {
    fol::Formula f = gen.formula(4);
    Universe u = collect_universe(Theory({f}), FactSet{}, 1);
    testing::FiniteModelOracle oracle(u.elements(), sig.predicates);
    fol::Formula g = ground(f, u);
    for (int m = 0; m < 8; ++m) {
      std::map<std::string, bool> model;
      for (const auto& a : oracle.atoms()) model[a] = gen.chance(0.5);
      ASSERT_EQ(oracle.evaluate(g, model), oracle.evaluate(f, model)) << print_formula(f);
    }
  }
}

// --- clausification ---------------------------------------------------------

std::vector<std::vector<bool>> projected_models(const ClauseSet& cs, const std::vector<std::string>& atoms) {
  // Exhaustive over all atoms (including auxiliaries), projected and deduplicated.
  std::set<std::vector<bool>> out;
  const std::size_t n = cs.atoms.size();
  for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
    std::vector<bool> model(n);
    for (std::size_t i = 0; i < n; ++i) model[i] = (bits >> i) & 1;
    if (!satisfies(cs, model)) continue;
    std::vector<bool> proj;
    for (const auto& a : atoms) proj.push_back(model[static_cast<std::size_t>(cs.atoms.find(a))]);
    out.insert(proj);
  }
  return {out.begin(), out.end()};
}

TEST(ToClauses, SingleAtomIsUnit) {
  ClauseSet cs = to_clauses({parse_formula("a(x)")});
  ASSERT_EQ(cs.clauses.size(), 1u);
  EXPECT_EQ(cs.clauses[0], (Clause{positive(cs.atoms.find("a(x)"))}));
}

TEST(ToClauses, EquivalenceWithConjunctionPreservesModels) {
  ClauseSet cs = to_clauses({parse_formula("a(x) <-> b(x) & c(x)")});
  auto models = projected_models(cs, {"a(x)", "b(x)", "c(x)"});
  std::vector<std::vector<bool>> expected;
  for (int bits = 0; bits < 8; ++bits) {
    const bool a = bits & 1, b = bits & 2, c = bits & 4;
    if (a == (b && c)) expected.push_back({a, b, c});
  }
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(models, expected);
  for (std::size_t i = 0; i < cs.atoms.size(); ++i) {
    const auto& name = cs.atoms.name(static_cast<int>(i));
    EXPECT_EQ(cs.atoms.is_aux(static_cast<int>(i)), name.rfind("$aux", 0) == 0);
  }
}

TEST(ToClauses, TautologyDropped) {
  ClauseSet cs = to_clauses({parse_formula("a(x) | ~a(x)")});
  EXPECT_TRUE(cs.clauses.empty());
}

TEST(ToClauses, FalseYieldsEmptyClause) {
  ClauseSet cs = to_clauses({fol::Formula::falsity()});
  ASSERT_EQ(cs.clauses.size(), 1u);
  EXPECT_TRUE(cs.clauses[0].empty());
  EXPECT_FALSE(is_satisfiable(cs).satisfiable);
}

TEST(ToClauses, RandomFormulaeEquisatisfiable) {
  testing::Signature sig;
  sig.constants = {"a", "b"};
  sig.numerals = {};
  sig.predicates = {{"p", 1}, {"q", 1}, {"r", 1}};
  testing::FormulaGenerator gen(77, sig);
  for (int i = 0; i < 200; ++i) {
    fol::Formula g = ground(gen.formula(4), Universe({"a", "b"}, {}, 0));
    ClauseSet cs = to_clauses({g});
    testing::FiniteModelOracle oracle({Term::constant("a"), Term::constant("b")}, sig.predicates);
    std::vector<std::string> names(oracle.atoms());
    // Every model of the original formula extends to exactly the projection.
    std::set<std::vector<bool>> expected;
    for (int bits = 0; bits < 64; ++bits) {
      std::map<std::string, bool> m;
      std::vector<bool> row;
      for (std::size_t k = 0; k < names.size(); ++k) {
        m[names[k]] = (bits >> k) & 1;
      }
      if (oracle.evaluate(g, m)) {
        for (const auto& n : names) {
          if (cs.atoms.find(n) >= 0) row.push_back(m[n]);
        }
        expected.insert(row);
      }
    }
    std::vector<std::string> present;
    for (const auto& n : names) {
      if (cs.atoms.find(n) >= 0) present.push_back(n);
    }
    if (cs.atoms.size() > 16) continue;
    auto got = projected_models(cs, present);
    ASSERT_EQ(std::set<std::vector<bool>>(got.begin(), got.end()), expected) << print_formula(g);
  }
}

// --- SAT --------------------------------------------------------------------

TEST(Sat, EmptyClauseSetIsSatisfiable) {
  SatResult r = is_satisfiable(ClauseSet{});
  EXPECT_TRUE(r.satisfiable);
  ASSERT_TRUE(r.model.has_value());
  EXPECT_TRUE(r.model->empty());
}

TEST(Sat, ContradictoryUnits) {
  ClauseSet cs;
  const int a = cs.atoms.intern("a");
  cs.add({positive(a)});
  cs.add({-positive(a)});
  SatResult r = is_satisfiable(cs);
  EXPECT_FALSE(r.satisfiable);
  EXPECT_FALSE(r.model.has_value());
}

bool brute_force_sat(const ClauseSet& cs) {
  const std::size_t n = cs.atoms.size();
  for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
    std::vector<bool> model(n);
    for (std::size_t i = 0; i < n; ++i) model[i] = (bits >> i) & 1;
    if (satisfies(cs, model)) return true;
  }
  return false;
}

TEST(Sat, Random3CnfMatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(4242);
  int sat_count = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const int n = std::uniform_int_distribution<int>(3, 20)(rng);
    // Ratio around the phase transition gives a mix of verdicts.
    const int m = static_cast<int>(n * std::uniform_real_distribution<double>(3.0, 5.5)(rng));
    ClauseSet cs;
    for (int v = 0; v < n; ++v) cs.atoms.intern("x" + std::to_string(v));
    for (int c = 0; c < m; ++c) {
      Clause cl;
      for (int k = 0; k < 3; ++k) {
        const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
        cl.push_back(std::bernoulli_distribution(0.5)(rng) ? positive(v) : -positive(v));
      }
      cs.add(cl);
    }
    SatResult r = is_satisfiable(cs);
    ASSERT_EQ(r.satisfiable, brute_force_sat(cs)) << "instance " << inst;
    if (r.satisfiable) {
      ++sat_count;
      ASSERT_TRUE(satisfies(cs, *r.model));
    }
  }
  EXPECT_GT(sat_count, 50);
  EXPECT_LT(sat_count, 450);
}

TEST(Sat, DecisionLimitRaisesResourceLimit) {
  // Pigeonhole 5 -> 4 needs many decisions under plain backtracking.
  ClauseSet cs;
  const int pigeons = 5, holes = 4;
  auto var = [&](int p, int h) { return positive(cs.atoms.intern("x" + std::to_string(p) + "_" + std::to_string(h))); };
  for (int p = 0; p < pigeons; ++p) {
    Clause c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    cs.add(c);
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p < pigeons; ++p) {
      for (int q = p + 1; q < pigeons; ++q) cs.add({-var(p, h), -var(q, h)});
    }
  }
  EXPECT_THROW(is_satisfiable(cs, 3), ResourceLimit);
  EXPECT_FALSE(is_satisfiable(cs).satisfiable);
}

TEST(Sat, DeterministicModels) {
  ClauseSet cs = to_clauses({parse_formula("(p(a) | p(b)) & (p(b) | p(c)) & (~p(a) | ~p(c))")});
  SatResult a = is_satisfiable(cs);
  SatResult b = is_satisfiable(cs);
  ASSERT_TRUE(a.satisfiable);
  EXPECT_EQ(*a.model, *b.model);
}

// --- entailment -------------------------------------------------------------

TEST(EntailsNegation, BreakfastBoxAbnormal) {
  Theory gamma = parse_theory(kBreakfastGamma);
  EXPECT_TRUE(entails_negation(gamma, parse_facts("left(nectarine,1); left(apple,1); left(tangerine,2);")));
}

TEST(EntailsNegation, BreakfastBoxNormal) {
  Theory gamma = parse_theory(kBreakfastGamma);
  EXPECT_FALSE(entails_negation(gamma, parse_facts("left(apple,1); left(nectarine,0); left(tangerine,2);")));
}

TEST(EntailsNegation, DomainClosureCatchesUnmentionedObject) {
  Theory gamma = parse_theory(
      "forall X. exists Y. left(X,Y) & (forall Z. left(X,Z) -> Z = Y);\n"
      "forall X. ~left(X,0) -> (X = apple | X = tangerine);\n");
  EXPECT_TRUE(entails_negation(gamma, parse_facts("left(bug,1);")));
  EXPECT_FALSE(entails_negation(gamma, parse_facts("left(apple,1);")));
}

TEST(EntailsNegation, RejectsIrrelFacts) {
  EXPECT_THROW(entails_negation(Theory{}, parse_facts("right(nut,irrel);")), IrrelInFacts);
}

TEST(EntailsNegation, ModelsSatisfyGroundFormulae) {
  testing::FormulaGenerator gen(8, {});
  for (int i = 0; i < 200; ++i) {
    Theory gamma;
    for (int k = 0; k < 2; ++k) gamma.add(gen.formula(3));
    Universe u = collect_universe(gamma, FactSet{}, 1);
    auto grounded = ground(gamma, u);
    ClauseSet cs = to_clauses(grounded);
    SatResult r = is_satisfiable(cs);
    if (!r.satisfiable) continue;
    testing::FiniteModelOracle oracle(u.elements(), gen.signature().predicates);
    auto projected = project_model(cs, *r.model);
    for (const auto& g : grounded) ASSERT_TRUE(oracle.evaluate(g, projected)) << print_formula(g);
  }
}

struct RandomInstance {
  Theory gamma;
  FactSet facts;
};

RandomInstance random_instance(testing::FormulaGenerator& gen) {
  RandomInstance inst;
  const int nf = gen.uniform(1, 3);
  for (int k = 0; k < nf; ++k) inst.gamma.add(gen.formula(gen.uniform(1, 4)));
  const int na = gen.uniform(0, 3);
  for (int k = 0; k < na; ++k) inst.facts.add(gen.ground_atom());
  return inst;
}

TEST(EntailsNegation, AgreesWithFiniteModelOracle) {
  testing::FormulaGenerator gen(2718, {});
  int abnormal = 0;
  for (int i = 0; i < 300; ++i) {
    RandomInstance inst = random_instance(gen);
    std::vector<fol::Formula> all(inst.gamma.begin(), inst.gamma.end());
    all.insert(all.end(), inst.facts.begin(), inst.facts.end());
    testing::FiniteModelOracle oracle(testing::expected_domain(all, 1), gen.signature().predicates);
    const bool expected = !oracle.satisfiable(all);
    ASSERT_EQ(entails_negation(inst.gamma, inst.facts, 1), expected) << fol::print_theory(inst.gamma);
    abnormal += expected;
  }
  EXPECT_GT(abnormal, 20);
}

TEST(EntailsNegation, MonotoneUnderFixedUniverse) {
  testing::FormulaGenerator gen(1618, {});
  for (int i = 0; i < 200; ++i) {
    RandomInstance inst = random_instance(gen);
    FactSet bigger = inst.facts;
    for (int k = 0; k < 2; ++k) bigger.add(gen.ground_atom());
    Prover prover(inst.gamma, collect_universe(inst.gamma, bigger, 1));
    if (prover.entails_negation(inst.facts)) ASSERT_TRUE(prover.entails_negation(bigger));
  }
}

TEST(EntailsNegation, MonotoneWhenNoNewSymbols) {
  testing::FormulaGenerator gen(1619, {});
  for (int i = 0; i < 200; ++i) {
    RandomInstance inst = random_instance(gen);
    // Mention every signature symbol so extending the facts cannot grow the domain.
    inst.gamma.add(parse_formula("p(a,b) | ~p(a,b) | p(c,0) | ~p(c,1)"));
    FactSet bigger = inst.facts;
    for (int k = 0; k < 2; ++k) bigger.add(gen.ground_atom());
    if (entails_negation(inst.gamma, inst.facts, 1)) ASSERT_TRUE(entails_negation(inst.gamma, bigger, 1));
  }
}

TEST(EntailsNegation, Deterministic) {
  Theory gamma = parse_theory(kBreakfastGamma);
  FactSet facts = parse_facts("left(apple,1); left(tangerine,2);");
  Prover prover(gamma, collect_universe(gamma, facts, 1));
  SatResult a = prover.check(facts);
  SatResult b = prover.check(facts);
  ASSERT_TRUE(a.satisfiable);
  EXPECT_EQ(*a.model, *b.model);
}

// --- Prover9 export ---------------------------------------------------------

TEST(ExportProver9, BreakfastBox) {
  Theory gamma = parse_theory(kBreakfastGamma);
  FactSet facts = parse_facts("left(nectarine,1); left(apple,1); left(tangerine,2);");
  const std::string text = export_prover9(gamma, facts);
  EXPECT_NE(text.find("formulas(assumptions).\n"), std::string::npos);
  EXPECT_NE(text.find("formulas(goals).\n  $F.\nend_of_list.\n"), std::string::npos);
  EXPECT_NE(text.find("(all vX (exists vY (left(vX,vY) & (all vZ (left(vX,vZ) -> (vZ = vY))))))."), std::string::npos);
  EXPECT_NE(text.find("  apple != nectarine.\n"), std::string::npos);
  EXPECT_NE(text.find("  0 != 1.\n"), std::string::npos);
  EXPECT_EQ(import_prover9_facts(text), facts);
}

TEST(ExportProver9, EmptyFacts) {
  Theory gamma = parse_theory("left(tangerine,2);");
  const std::string text = export_prover9(gamma, FactSet{});
  EXPECT_TRUE(import_prover9_facts(text).empty());
  EXPECT_NE(text.find("  left(tangerine,2).\n"), std::string::npos);
}

// Every statement is terminated by '.', parentheses balance, and only
// Prover9 connectives appear.
TEST(ExportProver9, WellFormed) {
  testing::FormulaGenerator gen(11, {});
  for (int i = 0; i < 50; ++i) {
    RandomInstance inst = random_instance(gen);
    const std::string text = export_prover9(inst.gamma, inst.facts);
    int depth = 0;
    for (char c : text) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      ASSERT_GE(depth, 0);
    }
    EXPECT_EQ(depth, 0);
    EXPECT_EQ(text.find('~'), std::string::npos);
    EXPECT_EQ(import_prover9_facts(text), inst.facts);
  }
}

}  // namespace
}  // namespace logicad::engine
