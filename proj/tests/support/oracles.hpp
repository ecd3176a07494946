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

// Independent re-implementations used as oracles for the closure machinery,
// plus a randomized winning-strategy picker.

#pragma once

#include <random>
#include <vector>

#include "fog/arena.hpp"
#include "fog/lowenheim.hpp"
#include "fog/transform.hpp"
#include "support/universe.hpp"

namespace fog::testing {

// A winning Verifier strategy that picks uniformly among the Green children
// of every Green Verifier node (any child elsewhere).
inline Strategy random_winning_strategy(const SolvedArena& sa, std::mt19937& rng) {
  const Arena& ar = sa.arena();
  Strategy s(Player::Verifier, ar.size());
  for (NodeId id = 0; id < ar.size(); ++id) {
    const ArenaNode& n = ar.nodes()[id];
    if (n.controller != Player::Verifier) continue;
    std::vector<std::size_t> options;
    for (std::size_t k = 0; k < n.children.size(); ++k)
      if (sa.color(id) != Color::Green || sa.color(n.children[k]) == Color::Green) options.push_back(k);
    s.set_choice(id, options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]);
  }
  return s;
}

// Recursive play enumeration for the general-mode operator.
inline void collect_trace(const Arena& ar, const Strategy& s, const ElementSet& a, NodeId id,
                          ElementSet& out) {
  const ArenaNode& n = ar.nodes()[id];
  if (n.children.empty()) return;
  bool quantifier = ar.subformula(id).is_quantifier();
  if (!n.controller) return collect_trace(ar, s, a, n.children[0], out);
  if (*n.controller == s.owner()) {
    NodeId c = n.children.at(*s.choice(id));
    if (quantifier) out.insert(*ar.nodes()[c].element);
    return collect_trace(ar, s, a, c, out);
  }
  for (std::size_t k = 0; k < n.children.size(); ++k)
    if (!quantifier || a.count(k)) collect_trace(ar, s, a, n.children[k], out);
}

// One sentence's contribution to a closure stage, computed without the
// closure module: recursive traces in general mode, and in prenex mode the
// Skolem tables read off the strategy by the transform module.
class SentenceOperator {
 public:
  SentenceOperator(const Structure& m, const Witness& w, ClosureMode mode)
      : m_(m), witness_(w), mode_(mode) {
    if (mode != ClosureMode::Prenex) return;
    PrenexFormula pf = as_prenex(w.arena->formula());
    Structure expanded = skolem_interpretations_from_strategy(m, pf, w.strategy, "op");
    SkolemResult sk = skolemize(pf, m.signature(), "op");
    for (const auto& sym : sk.skolem_symbols) {
      if (sym.arity() == 0)
        tables_.push_back({0, {expanded.constant(sym.name)}});
      else
        tables_.push_back({sym.arity(), expanded.function_values(sym.name)});
    }
  }

  ElementSet apply(const ElementSet& a) const {
    ElementSet out;
    if (mode_ == ClosureMode::General) {
      collect_trace(*witness_.arena, witness_.strategy, a, Arena::root(), out);
      return out;
    }
    std::vector<Element> pool(a.begin(), a.end());
    for (const auto& [arity, values] : tables_)
      for_each_tuple(pool, arity, [&](const Tuple& args) { out.insert(values[m_.encode(args)]); });
    return out;
  }

 private:
  const Structure& m_;
  const Witness& witness_;
  ClosureMode mode_;
  std::vector<std::pair<int, std::vector<Element>>> tables_;
};

inline bool is_subset(const ElementSet& a, const ElementSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Closed under the structure's functions (constants included) and every
// sentence operator.
inline bool is_closed_under(const Structure& m, const std::vector<SentenceOperator>& ops,
                            const ElementSet& s) {
  if (!is_subset(function_image(m, s), s)) return false;
  for (const auto& op : ops)
    if (!is_subset(op.apply(s), s)) return false;
  return true;
}

// Intersection of all closed supersets of `seed`, by enumerating subsets.
inline ElementSet least_closed_superset(const Structure& m, const std::vector<SentenceOperator>& ops,
                                        const ElementSet& seed) {
  ElementSet result;
  for (Element e = 0; e < m.size(); ++e) result.insert(e);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m.size()); ++mask) {
    ElementSet s = mask_set(mask, m.size());
    if (!is_subset(seed, s) || !is_closed_under(m, ops, s)) continue;
    ElementSet meet;
    std::set_intersection(result.begin(), result.end(), s.begin(), s.end(),
                          std::inserter(meet, meet.begin()));
    result = std::move(meet);
  }
  return result;
}

// Both certificate checks for one sentence over the substructure on `n`.
struct SentenceCertificate {
  bool strategy_wins = false;
  bool tarski_holds = false;
};

inline SentenceCertificate certify(const Structure& m, const Formula& sentence,
                                   const Witness& w, const ElementSet& n) {
  auto sub = std::make_shared<const Structure>(restrict(m, n));
  Arena small = build_arena(sub, w.arena->tree());
  Strategy rs = restrict_strategy(*w.arena, w.strategy, small);
  return {verify_strategy(small, rs), tarski_eval(*sub, sentence)};
}

}  // namespace fog::testing
