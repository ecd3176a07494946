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

#include "fog/semantics.hpp"
#include "support/universe.hpp"

namespace fog {
namespace {

const char* kExampleModel = "domain a b\nf: a->b, b->a\nR: (b,a)\nP: b";

Signature example_signature() { return parse_signature("rel P/1\nrel R/2\nfun f/1"); }
Structure example_model() { return parse_structure(kExampleModel, example_signature()); }

TEST(Structure, ParsesTheExampleModel) {
  Structure m = example_model();
  EXPECT_EQ(m.domain(), (std::vector<std::string>{"a", "b"}));
  Element a = m.element("a"), b = m.element("b");
  EXPECT_EQ(m.apply("f", std::vector<Element>{a}), b);
  EXPECT_EQ(m.apply("f", std::vector<Element>{b}), a);
  EXPECT_EQ(m.relation("R"), (std::set<Tuple>{{b, a}}));
  EXPECT_EQ(m.relation("P"), (std::set<Tuple>{{b}}));
}

TEST(Structure, OneElementEmptySignature) {
  Structure m = parse_structure("domain a\n", Signature{});
  EXPECT_EQ(m.size(), 1u);
}

TEST(Structure, PartialFunctionIsRejected) {
  try {
    parse_structure("domain a b\nf: a->b", parse_signature("fun f/1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PartialFunction);
    EXPECT_NE(std::string(e.what()).find("no value for b"), std::string::npos);
  }
}

TEST(Structure, InputErrors) {
  Signature sig = example_signature();
  auto code = [&](const char* text) {
    try {
      parse_structure(text, sig);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::BadRequest;
  };
  EXPECT_EQ(code("domain a b\nf: a->b, b->c\nR: (b,a)\nP: b"), ErrorCode::ElementOutsideDomain);
  EXPECT_EQ(code("domain a b\nf: a->b, b->a\nP: b"), ErrorCode::MissingInterpretation);
  EXPECT_EQ(code("domain\n"), ErrorCode::EmptyDomain);
  EXPECT_EQ(code("domain a b\nQ: a"), ErrorCode::UnknownSymbol);
}

TEST(Structure, RendersAndReparses) {
  Structure m = example_model();
  EXPECT_EQ(parse_structure(render_structure(m), example_signature()), m);
  EXPECT_EQ(parse_model(render_model(m)), m);
}

TEST(Structure, ModelFilesCarryTheirSignature) {
  Structure m = parse_model("rel P/1\nrel R/2\nfun f/1\n" + std::string(kExampleModel));
  EXPECT_EQ(m, example_model());
}

TEST(EvalTerm, Examples) {
  Structure m = example_model();
  Element a = m.element("a"), b = m.element("b");
  Term x = Term::variable("x");
  EXPECT_EQ(eval_term(m, {{"x", a}}, Term::apply("f", {x})), b);
  EXPECT_EQ(eval_term(m, {{"x", b}}, x), b);
  EXPECT_EQ(eval_term(m, {{"x", a}}, Term::apply("f", {Term::apply("f", {x})})), a);
  EXPECT_THROW(eval_term(m, {}, x), Error);
}

TEST(AtomicHolds, Examples) {
  Structure m = example_model();
  Element a = m.element("a");
  Term x = Term::variable("x"), y = Term::variable("y");
  EXPECT_TRUE(atomic_holds(m, {{"x", a}, {"y", a}}, Formula::atom("R", {Term::apply("f", {x}), y})));
  EXPECT_FALSE(atomic_holds(m, {{"x", a}}, Formula::atom("P", {x})));
  EXPECT_TRUE(atomic_holds(m, {{"x", a}}, Formula::equals(x, x)));
  EXPECT_THROW(atomic_holds(m, {{"x", a}}, Formula::negation(Formula::atom("P", {x}))), Error);
}

TEST(Tarski, Examples) {
  Structure m = example_model();
  Signature sig = example_signature();
  EXPECT_TRUE(tarski_eval(m, parse_formula("forall x. (P(x) | exists y. R(f(x), y))", sig)));
  EXPECT_TRUE(tarski_eval(m, parse_formula("exists x. P(x)", sig)));
  EXPECT_FALSE(tarski_eval(m, parse_formula("forall x. P(x)", sig)));
  EXPECT_THROW(tarski_eval(m, parse_formula("P(x)", sig)), Error);
}

TEST(FunctionClosed, Examples) {
  Structure m = example_model();
  EXPECT_TRUE(is_function_closed(m, {0, 1}));
  EXPECT_FALSE(is_function_closed(m, {m.element("a")}));
  EXPECT_TRUE(is_function_closed(m, {}));
}

TEST(Restrict, Examples) {
  Structure m = example_model();
  EXPECT_EQ(restrict(m, {0, 1}), m);
  try {
    restrict(m, {m.element("a")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotClosed);
    EXPECT_NE(std::string(e.what()).find("f(a) = b"), std::string::npos);
  }
  EXPECT_THROW(restrict(m, {}), Error);

  Structure m2 = parse_structure("domain a b\nR: (b,a)\nP: b", parse_signature("rel P/1\nrel R/2"));
  Structure n = restrict(m2, {m2.element("b")});
  EXPECT_EQ(n.domain(), std::vector<std::string>{"b"});
  EXPECT_EQ(n.relation("P"), (std::set<Tuple>{{0}}));
  EXPECT_TRUE(n.relation("R").empty());
}

// Quantifier expansion oracle. For a domain of n elements, every quantifier
// becomes an n-fold disjunction or conjunction over constants el0..el{n-1};
// the resulting ground formula is evaluated directly.

Term substitute(const Term& t, const std::string& var, const std::string& constant) {
  if (t.kind == Term::Kind::Variable) return t.name == var ? Term::constant(constant) : t;
  Term out = t;
  for (auto& a : out.args) a = substitute(a, var, constant);
  return out;
}

Formula substitute(const Formula& f, const std::string& var, const std::string& constant) {
  if (f.is_quantifier() && f.variable == var) return f;
  Formula out = f;
  for (auto& t : out.terms) t = substitute(t, var, constant);
  for (auto& c : out.children) c = substitute(c, var, constant);
  return out;
}

Formula expand(const Formula& f, std::size_t n) {
  if (f.is_atom()) return f;
  if (!f.is_quantifier()) {
    Formula out = f;
    for (auto& c : out.children) c = expand(c, n);
    return out;
  }
  Formula body = expand(f.children[0], n);
  Formula out = substitute(body, f.variable, "el0");
  for (std::size_t i = 1; i < n; ++i) {
    Formula next = substitute(body, f.variable, "el" + std::to_string(i));
    out = f.kind == Connective::Exists ? Formula::disjunction(out, next) : Formula::conjunction(out, next);
  }
  return out;
}

Element ground_term(const Structure& m, const Term& t) {
  if (t.kind == Term::Kind::Constant) {
    if (t.name.rfind("el", 0) == 0) return std::stoul(t.name.substr(2));
    return m.constant(t.name);
  }
  Tuple args;
  for (const auto& a : t.args) args.push_back(ground_term(m, a));
  return m.apply(t.name, args);
}

bool ground_eval(const Structure& m, const Formula& f) {
  switch (f.kind) {
    case Connective::Atom: {
      Tuple args;
      for (const auto& t : f.terms) args.push_back(ground_term(m, t));
      return m.holds(f.relation, args);
    }
    case Connective::Not: return !ground_eval(m, f.children[0]);
    case Connective::Or: return ground_eval(m, f.children[0]) || ground_eval(m, f.children[1]);
    case Connective::And: return ground_eval(m, f.children[0]) && ground_eval(m, f.children[1]);
    default: throw std::logic_error("expanded formula still has quantifiers");
  }
}

TEST(Tarski, AgreesWithQuantifierExpansionOnTheSmallUniverse) {
  auto formulas = testing::universe_formulas(3);
  auto structures = testing::universe_structures(2);
  std::vector<Formula> expanded1, expanded2;
  for (const auto& g : formulas) {
    expanded1.push_back(expand(g, 1));
    expanded2.push_back(expand(g, 2));
  }
  std::size_t mismatches = 0;
  for (const auto& m : structures) {
    const auto& expanded = m->size() == 1 ? expanded1 : expanded2;
    for (std::size_t i = 0; i < formulas.size(); ++i)
      mismatches += tarski_eval(*m, formulas[i]) != ground_eval(*m, expanded[i]);
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Restrict, PreservesQuantifierFreeSentences) {
  Signature sig = parse_signature("const c\nconst d\nfun f/1\nfun g/2\nrel P/1\nrel R/2");
  std::mt19937 rng(3);
  for (int round = 0; round < 300; ++round) {
    Structure m = testing::random_structure(rng, sig, 1 + round % 3);
    for (std::size_t mask = 1; mask < (std::size_t{1} << m.size()); ++mask) {
      ElementSet subset = testing::mask_set(mask, m.size());
      if (!is_function_closed(m, subset)) continue;
      Structure n = restrict(m, subset);
      for (int k = 0; k < 20; ++k) {
        Formula g = testing::random_formula(rng, sig, 3);
        if (!is_quantifier_free(g) || !is_closed(g)) continue;
        EXPECT_EQ(tarski_eval(m, g), tarski_eval(n, g)) << render(g);
      }
    }
  }
}

TEST(FunctionClosed, FullDomainAndShrinkingWitnesses) {
  Signature sig = parse_signature("const c\nfun f/1\nfun g/2\nrel P/1");
  std::mt19937 rng(5);
  for (int round = 0; round < 500; ++round) {
    Structure m = testing::random_structure(rng, sig, 1 + round % 3);
    ElementSet all;
    for (Element e = 0; e < m.size(); ++e) all.insert(e);
    EXPECT_TRUE(is_function_closed(m, all));
    std::size_t subsets = std::size_t{1} << m.size();
    for (std::size_t big = 0; big < subsets; ++big) {
      if (is_function_closed(m, testing::mask_set(big, m.size()))) continue;
      // Any escape from `big` still escapes from a subset that keeps its
      // arguments.
      auto escape = detail::find_escape(m, testing::mask_set(big, m.size()));
      ASSERT_TRUE(escape.has_value());
      for (std::size_t small = 0; small < subsets; ++small) {
        if ((small & big) != small) continue;
        ElementSet s = testing::mask_set(small, m.size());
        bool keeps = std::all_of(escape->args.begin(), escape->args.end(),
                                 [&](Element e) { return s.count(e); });
        if (keeps) {
          EXPECT_FALSE(is_function_closed(m, s));
        }
      }
    }
  }
}

}  // namespace
}  // namespace fog
