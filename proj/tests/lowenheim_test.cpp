// Copyright 2026 The fog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "fog/lowenheim.hpp"
#include "support/oracles.hpp"
#include "support/universe.hpp"

namespace fog {
namespace {

using testing::least_closed_superset;
using testing::SentenceOperator;

const char* kExampleFormula = "forall x. (P(x) | exists y. R(f(x), y))";

Structure example_model() {
  return parse_model("rel P/1\nrel R/2\nfun f/1\ndomain a b\nf: a->b, b->a\nR: (b,a)\nP: b");
}

Structure small_model() { return parse_model("rel P/1\ndomain a b\nP: b"); }

Strategy winning(const Arena& ar) { return extract_strategy(solve(ar), Player::Verifier); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Parse;
}

TEST(StrategyFunctions, Examples) {
  Structure m = example_model();
  PrenexFormula pf = prenexify(parse_formula(kExampleFormula, m.signature()), m.signature());
  Arena ar = build_arena(m, pf.to_formula());
  StrategyFunctionTable t = strategy_functions(ar, winning(ar));
  ASSERT_EQ(t.functions.size(), 1u);
  const InducedFunction& y = t.functions[0];
  EXPECT_EQ(y.position, 2u);
  EXPECT_EQ(y.variable, "y");
  EXPECT_EQ(y.universals, std::vector<std::string>{"x"});
  std::map<Tuple, Element> expected{{{0}, 0}, {{1}, 0}};
  EXPECT_EQ(y.table, expected);

  Structure m2 = small_model();
  PrenexFormula ex = as_prenex(parse_formula("exists x. P(x)", m2.signature()));
  Arena ar2 = build_arena(m2, ex.to_formula());
  StrategyFunctionTable t2 = strategy_functions(m2, ex, winning(ar2));
  ASSERT_EQ(t2.functions.size(), 1u);
  EXPECT_EQ(t2.functions[0].arity(), 0);
  EXPECT_EQ(t2.functions[0].table, (std::map<Tuple, Element>{{{}, 1}}));

  PrenexFormula all = as_prenex(parse_formula("forall x. (P(x) | ~P(x))", m2.signature()));
  Arena ar3 = build_arena(m2, all.to_formula());
  EXPECT_TRUE(strategy_functions(ar3, winning(ar3)).functions.empty());
}

TEST(FunctionImage, Examples) {
  Structure m = example_model();
  EXPECT_EQ(function_image(m, {0}), ElementSet{1});
  EXPECT_EQ(function_image(m, {}), ElementSet{});
  EXPECT_EQ(function_image(m, {0, 1}), (ElementSet{0, 1}));
}

TEST(TraceSet, Examples) {
  Structure m = example_model();
  Formula phi = parse_formula(kExampleFormula, m.signature());
  Arena ar = build_arena(m, phi);
  Strategy s = winning(ar);
  EXPECT_EQ(trace_set(ar, s, {0}), ElementSet{0});
  EXPECT_EQ(trace_set(ar, s, {1}), ElementSet{});
  EXPECT_EQ(trace_set(m, phi, s, {0, 1}), ElementSet{0});

  Structure mc = parse_model("const c\nrel P/1\ndomain a b\nc: a\nP: a");
  Formula qf = parse_formula("P(c)", mc.signature());
  Arena aq = build_arena(mc, qf);
  EXPECT_EQ(trace_set(aq, winning(aq), {0, 1}), ElementSet{});
}

TEST(Closure, ExampleStages) {
  Structure m = example_model();
  Theory t{parse_formula(kExampleFormula, m.signature())};
  Arena ar = build_arena(m, t[0]);
  ClosureReport general = closure(m, t, {winning(ar)}, {0}, ClosureMode::General);
  std::vector<ElementSet> stages{{0}, {0, 1}, {0, 1}};
  EXPECT_EQ(general.stages, stages);
  EXPECT_EQ(general.result, (ElementSet{0, 1}));

  Theory tp{prenexify(t[0], m.signature()).to_formula()};
  Arena ap = build_arena(m, tp[0]);
  ClosureReport prenex = closure(m, tp, {winning(ap)}, {0}, ClosureMode::Prenex);
  EXPECT_EQ(prenex.stages, stages);
  EXPECT_EQ(prenex.mode, ClosureMode::Prenex);
}

TEST(Closure, ExistentialForcesWitness) {
  Structure m2 = small_model();
  Theory t{parse_formula("exists x. P(x)", m2.signature())};
  Arena ar = build_arena(m2, t[0]);
  for (ClosureMode mode : {ClosureMode::General, ClosureMode::Prenex})
    EXPECT_EQ(closure(m2, t, {winning(ar)}, {}, mode).result, ElementSet{1});
}

TEST(Closure, Errors) {
  Structure m2 = small_model();
  Theory taut{parse_formula("forall x. (P(x) | ~P(x))", m2.signature())};
  Arena at = build_arena(m2, taut[0]);
  EXPECT_EQ(code_of([&] { closure(m2, taut, {winning(at)}, {}, ClosureMode::General); }),
            ErrorCode::EmptyResult);

  Theory ex{parse_formula("exists x. P(x)", m2.signature())};
  Arena ae = build_arena(m2, ex[0]);
  Strategy bad(Player::Verifier, ae.size());
  bad.set_choice(Arena::root(), 0);
  EXPECT_EQ(code_of([&] { closure(m2, ex, {bad}, {}, ClosureMode::General); }),
            ErrorCode::UnverifiedStrategy);
  EXPECT_EQ(code_of([&] { closure(m2, ex, {}, {}, ClosureMode::General); }),
            ErrorCode::UnverifiedStrategy);
  EXPECT_EQ(code_of([&] { closure(m2, ex, {winning(ae)}, {7}, ClosureMode::General); }),
            ErrorCode::ElementOutsideDomain);

  Structure m = example_model();
  Theory t{parse_formula(kExampleFormula, m.signature())};
  Arena ar = build_arena(m, t[0]);
  EXPECT_EQ(code_of([&] { closure(m, t, {winning(ar)}, {0}, ClosureMode::Prenex); }),
            ErrorCode::NotPrenex);
}

TEST(LsDown, Examples) {
  Structure m = example_model();
  Theory t{parse_formula(kExampleFormula, m.signature())};
  for (ClosureMode mode : {ClosureMode::General, ClosureMode::Prenex}) {
    LsResult r = ls_down(m, t, {0}, mode);
    EXPECT_EQ(r.substructure, m);
    EXPECT_TRUE(r.certificate.all_ok());
    ASSERT_EQ(r.certificate.entries.size(), 1u);
    EXPECT_EQ(r.certificate.entries[0].formula, t[0]);
  }

  Structure m2 = small_model();
  LsResult r2 = ls_down(m2, {parse_formula("exists x. P(x)", m2.signature())}, {}, ClosureMode::General);
  EXPECT_EQ(r2.substructure.domain(), std::vector<std::string>{"b"});
  EXPECT_TRUE(tarski_eval(r2.substructure, parse_formula("forall x. P(x)", m2.signature())));

  EXPECT_EQ(code_of([&] {
              ls_down(m2, {parse_formula("forall x. P(x)", m2.signature())}, {}, ClosureMode::General);
            }),
            ErrorCode::TheoryNotSatisfied);
}

TEST(LsDown, Reports) {
  Structure m = example_model();
  LsResult r = ls_down(m, {parse_formula(kExampleFormula, m.signature())}, {0}, ClosureMode::General);
  EXPECT_EQ(stage_log(r.report, m),
            "stage 0: {a}  new: a (seed)\n"
            "stage 1: {a, b}  new: b (fun:f)\n"
            "stage 2: {a, b}  new: none\n");
  nlohmann::json j = summary_json(r.report, m, &r.certificate);
  EXPECT_EQ(j["mode"], "general");
  EXPECT_EQ(j["result"], nlohmann::json::array({"a", "b"}));
  EXPECT_EQ(j["stages"].size(), 3u);
  EXPECT_EQ(j["certified"], true);
  EXPECT_EQ(j["certificate"][0]["tarski_holds"], true);
  EXPECT_FALSE(summary_json(r.report, m).contains("certificate"));
}

// Random sentences true in random structures of up to three elements.
struct Instance {
  std::shared_ptr<const Structure> m;
  Theory theory;
};

std::vector<Instance> random_instances(std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  Signature sig = testing::universe_signature();
  std::vector<Instance> out;
  while (out.size() < count) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    auto m = std::make_shared<const Structure>(testing::random_structure(rng, sig, n));
    Theory t;
    std::size_t want = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    for (int tries = 0; tries < 50 && t.size() < want; ++tries) {
      Formula phi = testing::random_formula(rng, sig, 4);
      if (is_closed(phi) && tarski_eval(*m, phi)) t.push_back(phi);
    }
    if (!t.empty()) out.push_back({m, t});
  }
  return out;
}

TEST(ClosureProperty, LeastClosedSupersetOfSeed) {
  std::mt19937 rng(11);
  std::size_t checked = 0;
  for (const auto& inst : random_instances(300, 5)) {
    for (ClosureMode mode : {ClosureMode::General, ClosureMode::Prenex}) {
      TheoryGames tg = winning_strategies(inst.m, inst.theory, mode);
      std::vector<SentenceOperator> ops;
      for (const auto& w : tg.witnesses) ops.emplace_back(*inst.m, w, mode);
      std::size_t mask = std::uniform_int_distribution<std::size_t>(0, (1u << inst.m->size()) - 1)(rng);
      ElementSet seed = testing::mask_set(mask, inst.m->size());
      ElementSet expected = least_closed_superset(*inst.m, ops, seed);
      if (expected.empty()) {
        EXPECT_THROW(closure(*inst.m, tg.witnesses, seed, mode), Error);
        continue;
      }
      ClosureReport r = closure(*inst.m, tg.witnesses, seed, mode);
      EXPECT_EQ(r.result, expected) << render(inst.theory[0]);
      for (std::size_t i = 1; i < r.stages.size(); ++i)
        EXPECT_TRUE(testing::is_subset(r.stages[i - 1], r.stages[i]));
      ++checked;
    }
  }
  EXPECT_GT(checked, 400u);
}

TEST(ClosureProperty, PrenexAndGeneralAgreeOnPrenexSentences) {
  std::size_t checked = 0;
  for (const auto& inst : random_instances(200, 9)) {
    Theory prenex;
    for (const auto& phi : inst.theory)
      prenex.push_back(prenexify(to_game_normal(phi), inst.m->signature()).to_formula());
    TheoryGames tg = winning_strategies(inst.m, prenex, ClosureMode::General);
    for (const auto& w : tg.witnesses) {
      SentenceOperator skolem(*inst.m, w, ClosureMode::Prenex);
      for (std::size_t mask = 0; mask < (1u << inst.m->size()); ++mask) {
        ElementSet a = testing::mask_set(mask, inst.m->size());
        EXPECT_TRUE(testing::is_subset(trace_set(*w.arena, w.strategy, a), skolem.apply(a)));
      }
    }
    for (Element e = 0; e < inst.m->size(); ++e) {
      ClosureReport g = closure(*inst.m, tg.witnesses, {e}, ClosureMode::General);
      ClosureReport p = closure(*inst.m, tg.witnesses, {e}, ClosureMode::Prenex);
      EXPECT_EQ(g.stages, p.stages);
      ++checked;
    }
  }
  EXPECT_GT(checked, 300u);
}

TEST(ClosureProperty, TraceIsMonotoneAndContained) {
  for (const auto& inst : random_instances(200, 13)) {
    TheoryGames tg = winning_strategies(inst.m, inst.theory, ClosureMode::General);
    for (const auto& w : tg.witnesses) {
      ElementSet all;
      for (Element e = 0; e < inst.m->size(); ++e) all.insert(e);
      ElementSet full = trace_set(*w.arena, w.strategy, all);
      for (std::size_t mask = 0; mask < (1u << inst.m->size()); ++mask) {
        ElementSet a = testing::mask_set(mask, inst.m->size());
        ElementSet out = trace_set(*w.arena, w.strategy, a);
        EXPECT_TRUE(testing::is_subset(out, full));
        ElementSet oracle;
        testing::collect_trace(*w.arena, w.strategy, a, Arena::root(), oracle);
        EXPECT_EQ(out, oracle);
      }
    }
  }
}

TEST(LsDownProperty, RandomizedStrategiesStillCertify) {
  std::mt19937 rng(17);
  LsOptions options;
  options.pick_strategy = [&rng](const SolvedArena& sa) { return testing::random_winning_strategy(sa, rng); };
  std::size_t certified = 0;
  for (const auto& inst : random_instances(300, 21)) {
    for (ClosureMode mode : {ClosureMode::General, ClosureMode::Prenex}) {
      ElementSet seed{std::uniform_int_distribution<Element>(0, inst.m->size() - 1)(rng)};
      LsResult r = ls_down(*inst.m, inst.theory, seed, mode, options);
      EXPECT_TRUE(r.certificate.all_ok());
      EXPECT_TRUE(testing::is_subset(seed, r.report.result));
      EXPECT_EQ(r.substructure.size(), r.report.result.size());
      ++certified;
    }
  }
  EXPECT_EQ(certified, 600u);
}

TEST(LsDownProperty, EveryClosedSubsetCertifies) {
  auto structures = testing::universe_structures(2);
  auto formulas = testing::universe_formulas(2);
  std::size_t checks = 0;
  for (std::size_t si = 0; si < structures.size(); si += 7) {
    const auto& m = structures[si];
    for (const auto& phi : formulas) {
      if (!tarski_eval(*m, phi)) continue;
      for (ClosureMode mode : {ClosureMode::General, ClosureMode::Prenex}) {
        TheoryGames tg = winning_strategies(m, {phi}, mode);
        std::vector<SentenceOperator> ops{SentenceOperator(*m, tg.witnesses[0], mode)};
        for (std::size_t mask = 1; mask < (1u << m->size()); ++mask) {
          ElementSet n = testing::mask_set(mask, m->size());
          if (!testing::is_closed_under(*m, ops, n)) continue;
          auto cert = testing::certify(*m, phi, tg.witnesses[0], n);
          EXPECT_TRUE(cert.strategy_wins && cert.tarski_holds) << render(phi);
          ++checks;
        }
      }
    }
  }
  EXPECT_GT(checks, 1000u);
}

}  // namespace
}  // namespace fog
