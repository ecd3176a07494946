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

// Strategy-driven substructure closures: a finite version of the downward
// Loewenheim-Skolem construction. Two stage operators are provided:
//
//  * Prenex: the functions induced by each winning strategy (the element the
//    Verifier picks for an existential as a function of the universal
//    choices before it) together with the structure's own functions.
//  * General: for any game-normal sentence, the set of elements the
//    Verifier plays when the opponent's quantifier moves are confined to
//    the current set, together with the structure's own functions.
//
// Iterating either operator from a seed reaches the least closed superset;
// restricting the structure to it yields a model of the same theory, and
// the restricted strategies certify it.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "fog/arena.hpp"
#include "fog/error.hpp"
#include "fog/semantics.hpp"
#include "fog/syntax.hpp"
#include "fog/transform.hpp"

namespace fog {

struct InducedFunction {
  std::size_t position = 0;  // 1-based prefix index of the existential
  std::string variable;
  std::vector<std::string> universals;
  std::map<Tuple, Element> table;

  int arity() const { return static_cast<int>(universals.size()); }
};

struct StrategyFunctionTable {
  std::string formula;
  std::vector<InducedFunction> functions;
};

// Tabulates, for every existential of a prenex sentence, what `s` plays
// against every sequence of Falsifier choices for the universals before it.
// Built by enumerating all plays of the prefix.
inline StrategyFunctionTable strategy_functions(const Arena& ar, const Strategy& s) {
  PrenexFormula pf = as_prenex(ar.formula());
  StrategyFunctionTable out;
  out.formula = render(ar.formula());
  std::vector<std::size_t> slot(pf.prefix.size(), 0);
  std::vector<std::string> universals;
  for (std::size_t i = 0; i < pf.prefix.size(); ++i) {
    if (pf.prefix[i].quantifier == Quantifier::Forall) {
      universals.push_back(pf.prefix[i].variable);
      continue;
    }
    slot[i] = out.functions.size();
    out.functions.push_back({i + 1, pf.prefix[i].variable, universals, {}});
  }

  Tuple choices;
  std::function<void(NodeId, std::size_t)> walk = [&](NodeId id, std::size_t depth) {
    if (depth == pf.prefix.size()) return;
    const ArenaNode& n = ar.nodes()[id];
    if (pf.prefix[depth].quantifier == Quantifier::Forall) {
      for (NodeId c : n.children) {
        choices.push_back(*ar.nodes()[c].element);
        walk(c, depth + 1);
        choices.pop_back();
      }
      return;
    }
    auto pick = s.choice(id);
    if (!pick)
      throw Error(ErrorCode::UnverifiedStrategy, "strategy has no choice at node " + std::to_string(id));
    NodeId c = n.children[*pick];
    out.functions[slot[depth]].table[choices] = *ar.nodes()[c].element;
    walk(c, depth + 1);
  };
  walk(Arena::root(), 0);
  return out;
}

inline StrategyFunctionTable strategy_functions(const Structure& m, const PrenexFormula& pf,
                                                const Strategy& s) {
  return strategy_functions(build_arena(m, pf.to_formula()), s);
}

// Constants together with f(args) for every function f and args over `a_set`.
inline ElementSet function_image(const Structure& m, const ElementSet& a_set) {
  ElementSet out;
  for (const auto& c : m.signature().constants()) out.insert(m.constant(c));
  std::vector<Element> pool(a_set.begin(), a_set.end());
  for (const auto& [f, arity] : m.signature().functions()) {
    const auto& values = m.function_values(f);
    for_each_tuple(pool, arity, [&](const Tuple& args) { out.insert(values[m.encode(args)]); });
  }
  return out;
}

// Elements the owner of `s` plays at quantifiers over all plays where the
// opponent's quantifier moves stay inside `a_set`; the opponent's
// connective moves are all explored.
inline ElementSet trace_set(const Arena& ar, const Strategy& s, const ElementSet& a_set) {
  ElementSet out;
  std::vector<NodeId> stack{Arena::root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const ArenaNode& n = ar.nodes()[id];
    if (n.children.empty()) continue;
    if (!n.controller) {
      stack.push_back(n.children.front());
      continue;
    }
    bool quantifier = ar.subformula(id).is_quantifier();
    if (*n.controller == s.owner()) {
      auto pick = s.choice(id);
      if (!pick)
        throw Error(ErrorCode::UnverifiedStrategy, "strategy has no choice at node " + std::to_string(id));
      NodeId c = n.children[*pick];
      if (quantifier) out.insert(*ar.nodes()[c].element);
      stack.push_back(c);
    } else {
      for (NodeId c : n.children)
        if (!quantifier || a_set.count(*ar.nodes()[c].element)) stack.push_back(c);
    }
  }
  return out;
}

inline ElementSet trace_set(const Structure& m, const Formula& phi, const Strategy& s,
                            const ElementSet& a_set) {
  return trace_set(build_arena(m, phi), s, a_set);
}

// ---------------------------------------------------------------------------
// Closure

enum class ClosureMode { Prenex, General };

inline std::string_view to_string(ClosureMode mode) {
  return mode == ClosureMode::Prenex ? "prenex" : "general";
}

struct Generation {
  std::size_t stage = 0;
  Element element = 0;
  std::string source;  // "seed", "const:c", "fun:f", "skolem:<i>:<var>", "trace:<i>"
};

struct ClosureReport {
  ClosureMode mode = ClosureMode::General;
  // stages[0] = seed plus constants; the last stage repeats the one before.
  std::vector<ElementSet> stages;
  ElementSet result;
  std::vector<Generation> generators;
};

// A Verifier strategy on the arena of one sentence of the theory.
struct Witness {
  std::shared_ptr<const Arena> arena;
  Strategy strategy;
};

namespace detail {

struct Operator {
  std::string source;
  std::function<ElementSet(const ElementSet&)> apply;
};

inline std::vector<Operator> stage_operators(const Structure& m, const std::vector<Witness>& witnesses,
                                             ClosureMode mode) {
  std::vector<Operator> ops;
  for (const auto& [f, arity] : m.signature().functions()) {
    ops.push_back({"fun:" + f, [&m, f = f, arity = arity](const ElementSet& a) {
                     ElementSet out;
                     std::vector<Element> pool(a.begin(), a.end());
                     const auto& values = m.function_values(f);
                     for_each_tuple(pool, arity,
                                    [&](const Tuple& args) { out.insert(values[m.encode(args)]); });
                     return out;
                   }});
  }
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    const Witness& w = witnesses[i];
    std::string index = std::to_string(i + 1);
    if (mode == ClosureMode::General) {
      ops.push_back({"trace:" + index,
                     [&w](const ElementSet& a) { return trace_set(*w.arena, w.strategy, a); }});
      continue;
    }
    auto tables = std::make_shared<StrategyFunctionTable>(strategy_functions(*w.arena, w.strategy));
    for (std::size_t k = 0; k < tables->functions.size(); ++k) {
      ops.push_back({"skolem:" + index + ":" + tables->functions[k].variable,
                     [tables, k](const ElementSet& a) {
                       const InducedFunction& fn = tables->functions[k];
                       ElementSet out;
                       std::vector<Element> pool(a.begin(), a.end());
                       for_each_tuple(pool, fn.arity(),
                                      [&](const Tuple& args) { out.insert(fn.table.at(args)); });
                       return out;
                     }});
    }
  }
  return ops;
}

}  // namespace detail

inline ClosureReport closure(const Structure& m, const std::vector<Witness>& witnesses,
                             const ElementSet& seed, ClosureMode mode) {
  for (Element e : seed)
    if (e >= m.size()) throw Error(ErrorCode::ElementOutsideDomain, "seed element out of range");
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    const Witness& w = witnesses[i];
    if (&w.arena->structure() != &m && !(w.arena->structure() == m))
      throw Error(ErrorCode::UnverifiedStrategy, "strategy " + std::to_string(i + 1) +
                                                     " belongs to a different structure");
    if (w.strategy.owner() != Player::Verifier || !verify_strategy(*w.arena, w.strategy))
      throw Error(ErrorCode::UnverifiedStrategy,
                  "strategy " + std::to_string(i + 1) + " is not winning for the Verifier");
    if (mode == ClosureMode::Prenex && !is_prenex(w.arena->formula()))
      throw Error(ErrorCode::NotPrenex, "prenex mode needs prenex sentences: " +
                                            render(w.arena->formula()));
  }

  ClosureReport report;
  report.mode = mode;
  ElementSet current;
  for (Element e : seed) {
    current.insert(e);
    report.generators.push_back({0, e, "seed"});
  }
  for (const auto& c : m.signature().constants()) {
    if (current.insert(m.constant(c)).second)
      report.generators.push_back({0, m.constant(c), "const:" + c});
  }
  report.stages.push_back(current);

  auto ops = detail::stage_operators(m, witnesses, mode);
  while (true) {
    // Every operator reads the previous stage.
    ElementSet next = current;
    std::size_t stage = report.stages.size();
    for (const auto& op : ops) {
      for (Element e : op.apply(current))
        if (next.insert(e).second) report.generators.push_back({stage, e, op.source});
    }
    report.stages.push_back(next);
    if (next == current) break;
    current = std::move(next);
  }
  report.result = current;
  if (report.result.empty())
    throw Error(ErrorCode::EmptyResult,
                "closure is empty: give a non-empty seed or a theory that forces an element");
  return report;
}

// Theory-level form: strategies[i] is a Verifier strategy on the arena of
// to_game_normal(t[i]) over `m`.
inline ClosureReport closure(const Structure& m, const Theory& t, const std::vector<Strategy>& strategies,
                             const ElementSet& seed, ClosureMode mode) {
  if (t.size() != strategies.size())
    throw Error(ErrorCode::UnverifiedStrategy, "need exactly one strategy per sentence");
  auto shared = std::make_shared<const Structure>(m);
  std::vector<Witness> witnesses;
  for (std::size_t i = 0; i < t.size(); ++i)
    witnesses.push_back({std::make_shared<const Arena>(build_arena(shared, DecompTree(to_game_normal(t[i])))),
                         strategies[i]});
  return closure(*shared, witnesses, seed, mode);
}

// ---------------------------------------------------------------------------
// Restricted strategies and certificates

// Transfers `s` from the arena over `m` to the arena of the same sentence
// over a substructure. Positions are matched by path; a choice whose element
// lies outside the substructure is dropped.
inline Strategy restrict_strategy(const Arena& full, const Strategy& s, const Arena& sub) {
  Strategy out(s.owner(), sub.size());
  const Structure& big = full.structure();
  const Structure& small = sub.structure();
  std::vector<NodeId> to_full(sub.size(), 0);
  for (NodeId id = 0; id < sub.size(); ++id) {
    const ArenaNode& n = sub.nodes()[id];
    const ArenaNode& f = full.nodes()[to_full[id]];
    bool quantifier = sub.subformula(id).is_quantifier();
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      std::size_t full_index = quantifier ? big.element(small.name_of(i)) : i;
      to_full[n.children[i]] = f.children[full_index];
    }
    if (n.controller != s.owner()) continue;
    auto pick = s.choice(to_full[id]);
    if (!pick) continue;
    if (!quantifier) {
      out.set_choice(id, *pick);
    } else if (auto e = small.find_element(big.name_of(*pick))) {
      out.set_choice(id, *e);
    }
  }
  return out;
}

struct CertificateEntry {
  Formula formula;
  Strategy restricted_strategy;
  bool strategy_wins = false;
  bool tarski_holds = false;
};

struct LsCertificate {
  std::vector<CertificateEntry> entries;

  bool all_ok() const {
    for (const auto& e : entries)
      if (!e.strategy_wins || !e.tarski_holds) return false;
    return true;
  }
};

struct LsResult {
  Structure substructure;
  LsCertificate certificate;
  ClosureReport report;
};

struct LsOptions {
  // Picks the Verifier's winning strategy on each solved arena; defaults to
  // backward induction with lowest-index tie-breaking.
  std::function<Strategy(const SolvedArena&)> pick_strategy;
  ArenaOptions arena;
};

// The game each sentence is played as, with the Verifier's winning strategy.
struct TheoryGames {
  std::vector<Formula> games;
  std::vector<Witness> witnesses;
};

// Fails with TheoryNotSatisfied unless `m` satisfies every sentence. In
// prenex mode each sentence is played in prenex form.
inline TheoryGames winning_strategies(const std::shared_ptr<const Structure>& m, const Theory& t,
                                      ClosureMode mode, const LsOptions& options = {}) {
  TheoryGames out;
  for (const auto& phi : t) {
    if (!tarski_eval(*m, phi))
      throw Error(ErrorCode::TheoryNotSatisfied,
                  "theory not satisfied: the structure falsifies " + render(phi));
    Formula game = to_game_normal(phi);
    if (mode == ClosureMode::Prenex) game = prenexify(game, m->signature()).to_formula();
    SolvedArena sa = solve(build_arena(m, DecompTree(game), options.arena));
    if (winner(sa) != Player::Verifier)
      throw Error(ErrorCode::CertificateFailure, "game and Tarski semantics disagree on " + render(phi));
    Strategy s = options.pick_strategy ? options.pick_strategy(sa) : extract_strategy(sa, Player::Verifier);
    out.games.push_back(std::move(game));
    out.witnesses.push_back({std::make_shared<const Arena>(sa.arena()), std::move(s)});
  }
  return out;
}

// Solves EV(m, phi) for every sentence, closes `seed` under the strategies,
// restricts `m` and certifies the result twice: the restricted strategies win
// on the substructure and the Tarski oracle agrees.
inline LsResult ls_down(const Structure& m, const Theory& t, const ElementSet& seed,
                        ClosureMode mode, const LsOptions& options = {}) {
  auto shared = std::make_shared<const Structure>(m);
  auto [games, witnesses] = winning_strategies(shared, t, mode, options);

  ClosureReport report = closure(*shared, witnesses, seed, mode);
  Structure sub = restrict(m, report.result);
  auto shared_sub = std::make_shared<const Structure>(sub);

  LsCertificate cert;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Arena small = build_arena(shared_sub, witnesses[i].arena->tree(), options.arena);
    Strategy rs = restrict_strategy(*witnesses[i].arena, witnesses[i].strategy, small);
    bool wins = verify_strategy(small, rs);
    bool holds = tarski_eval(sub, t[i]);
    if (!wins || !holds)
      throw Error(ErrorCode::CertificateFailure,
                  "certificate failed for " + render(t[i]) + " (strategy " +
                      (wins ? "wins" : "loses") + ", tarski " + (holds ? "true" : "false") + ")");
    cert.entries.push_back({t[i], std::move(rs), wins, holds});
  }
  return {std::move(sub), std::move(cert), std::move(report)};
}

// ---------------------------------------------------------------------------
// Reports

inline std::string stage_log(const ClosureReport& report, const Structure& m) {
  std::string out;
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    out += "stage " + std::to_string(i) + ": " + render_element_set(m, report.stages[i]) + "  new:";
    bool any = false;
    for (const auto& g : report.generators) {
      if (g.stage != i) continue;
      out += (any ? ", " : " ") + m.name_of(g.element) + " (" + g.source + ")";
      any = true;
    }
    if (!any) out += " none";
    out += "\n";
  }
  return out;
}

inline nlohmann::json summary_json(const ClosureReport& report, const Structure& m,
                                   const LsCertificate* certificate = nullptr) {
  nlohmann::json j;
  j["mode"] = std::string(to_string(report.mode));
  auto names = [&](const ElementSet& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (Element e : s) arr.push_back(m.name_of(e));
    return arr;
  };
  j["result"] = names(report.result);
  j["stages"] = nlohmann::json::array();
  for (const auto& s : report.stages) j["stages"].push_back(names(s));
  if (certificate) {
    j["certificate"] = nlohmann::json::array();
    for (const auto& e : certificate->entries)
      j["certificate"].push_back({{"formula", render(e.formula)},
                                  {"strategy_wins", e.strategy_wins},
                                  {"tarski_holds", e.tarski_holds}});
    j["certified"] = certificate->all_ok();
  }
  return j;
}

}  // namespace fog
