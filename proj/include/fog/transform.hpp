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

// Normal forms and classical Skolemization, plus the bridge from a winning
// Verifier strategy to interpretations of the Skolem symbols.

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fog/arena.hpp"
#include "fog/error.hpp"
#include "fog/semantics.hpp"
#include "fog/syntax.hpp"

namespace fog {

// One formula per line; '#' comments and blank lines are skipped.
using Theory = std::vector<Formula>;

inline Theory parse_theory(std::string_view text, const Signature& sig) {
  Theory t;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = detail::trim(detail::strip_comment(lines[i]));
    if (line.empty()) continue;
    try {
      t.push_back(parse_formula(line, sig));
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), i + 1);
    }
  }
  return t;
}

inline std::string render_theory(const Theory& t) {
  std::string out;
  for (const auto& f : t) out += render(f) + "\n";
  return out;
}

// Rewrites -> and <-> into ~, |, &.
inline Formula to_game_normal(const Formula& phi) {
  switch (phi.kind) {
    case Connective::Atom:
      return phi;
    case Connective::Implies:
      return Formula::disjunction(Formula::negation(to_game_normal(phi.children[0])),
                                  to_game_normal(phi.children[1]));
    case Connective::Iff: {
      Formula a = to_game_normal(phi.children[0]);
      Formula b = to_game_normal(phi.children[1]);
      return Formula::conjunction(Formula::disjunction(Formula::negation(a), b),
                                  Formula::disjunction(Formula::negation(b), a));
    }
    default: {
      Formula out = phi;
      for (auto& c : out.children) c = to_game_normal(c);
      return out;
    }
  }
}

// ---------------------------------------------------------------------------
// Prenex form

enum class Quantifier { Forall, Exists };

struct PrefixEntry {
  Quantifier quantifier;
  std::string variable;

  bool operator==(const PrefixEntry&) const = default;
};

struct PrenexFormula {
  std::vector<PrefixEntry> prefix;
  Formula matrix;

  Formula to_formula() const {
    Formula f = matrix;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
      f = it->quantifier == Quantifier::Forall ? Formula::forall(it->variable, std::move(f))
                                               : Formula::exists(it->variable, std::move(f));
    return f;
  }

  bool operator==(const PrenexFormula&) const = default;
};

// A quantifier prefix with pairwise distinct variables over a
// quantifier-free matrix.
inline bool is_prenex(const Formula& f) {
  std::set<std::string> seen;
  const Formula* cur = &f;
  while (cur->is_quantifier()) {
    if (!seen.insert(cur->variable).second) return false;
    cur = &cur->children[0];
  }
  return is_quantifier_free(*cur);
}

inline PrenexFormula as_prenex(const Formula& f) {
  if (!is_prenex(f)) throw Error(ErrorCode::NotPrenex, "not in prenex form: " + render(f));
  PrenexFormula pf;
  const Formula* cur = &f;
  while (cur->is_quantifier()) {
    pf.prefix.push_back({cur->kind == Connective::Forall ? Quantifier::Forall : Quantifier::Exists,
                         cur->variable});
    cur = &cur->children[0];
  }
  pf.matrix = *cur;
  return pf;
}

namespace detail {

inline void collect_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.name);
  for (const auto& a : t.args) collect_names(a, out);
}

inline void collect_names(const Formula& f, std::set<std::string>& out) {
  if (!f.relation.empty()) out.insert(f.relation);
  if (!f.variable.empty()) out.insert(f.variable);
  for (const auto& t : f.terms) collect_names(t, out);
  for (const auto& c : f.children) collect_names(c, out);
}

inline Term rename_term(const Term& t, const std::map<std::string, std::string>& env) {
  if (t.kind == Term::Kind::Variable) {
    auto it = env.find(t.name);
    return it == env.end() ? t : Term::variable(it->second);
  }
  Term out = t;
  for (auto& a : out.args) a = rename_term(a, env);
  return out;
}

// Gives every quantifier a distinct variable, keeping the first binder of
// each name as it is.
class BinderRenamer {
 public:
  explicit BinderRenamer(std::set<std::string> taken) : taken_(std::move(taken)) {}

  Formula run(const Formula& f) {
    if (f.is_atom()) {
      Formula out = f;
      for (auto& t : out.terms) t = rename_term(t, env_);
      return out;
    }
    if (f.is_quantifier()) {
      std::string name = f.variable;
      if (used_.count(name)) name = fresh(f.variable);
      used_.insert(name);
      taken_.insert(name);
      auto saved = env_.find(f.variable) == env_.end()
                       ? std::optional<std::string>()
                       : std::optional<std::string>(env_[f.variable]);
      env_[f.variable] = name;
      Formula body = run(f.children[0]);
      if (saved)
        env_[f.variable] = *saved;
      else
        env_.erase(f.variable);
      return f.kind == Connective::Forall ? Formula::forall(name, std::move(body))
                                          : Formula::exists(name, std::move(body));
    }
    Formula out = f;
    for (auto& c : out.children) c = run(c);
    return out;
  }

 private:
  std::string fresh(const std::string& base) {
    for (std::size_t i = 1;; ++i) {
      std::string cand = base + "_" + std::to_string(i);
      if (!taken_.count(cand)) return cand;
    }
  }

  std::set<std::string> taken_;
  std::set<std::string> used_;
  std::map<std::string, std::string> env_;
};

inline PrenexFormula pull_quantifiers(const Formula& f) {
  switch (f.kind) {
    case Connective::Atom:
      return {{}, f};
    case Connective::Not: {
      PrenexFormula inner = pull_quantifiers(f.children[0]);
      for (auto& e : inner.prefix)
        e.quantifier = e.quantifier == Quantifier::Forall ? Quantifier::Exists : Quantifier::Forall;
      inner.matrix = Formula::negation(std::move(inner.matrix));
      return inner;
    }
    case Connective::Exists:
    case Connective::Forall: {
      PrenexFormula inner = pull_quantifiers(f.children[0]);
      inner.prefix.insert(inner.prefix.begin(),
                          {f.kind == Connective::Forall ? Quantifier::Forall : Quantifier::Exists,
                           f.variable});
      return inner;
    }
    case Connective::Or:
    case Connective::And: {
      PrenexFormula lhs = pull_quantifiers(f.children[0]);
      PrenexFormula rhs = pull_quantifiers(f.children[1]);
      lhs.prefix.insert(lhs.prefix.end(), rhs.prefix.begin(), rhs.prefix.end());
      lhs.matrix = f.kind == Connective::Or
                       ? Formula::disjunction(std::move(lhs.matrix), std::move(rhs.matrix))
                       : Formula::conjunction(std::move(lhs.matrix), std::move(rhs.matrix));
      return lhs;
    }
    default:
      throw Error(ErrorCode::NonGameNormal, "prenex form needs connectives among ~, |, &");
  }
}

}  // namespace detail

// Quantifiers are hoisted leftmost-outermost first; a negation flips the
// quantifiers it passes. Repeated binder names are renamed to `<name>_<i>`
// avoiding every name in the formula and in `sig`.
inline PrenexFormula prenexify(const Formula& phi, const Signature& sig = {}) {
  if (!is_game_normal(phi))
    throw Error(ErrorCode::NonGameNormal, "prenex form needs connectives among ~, |, &");
  if (auto free = free_variables(phi); !free.empty())
    throw Error(ErrorCode::FreeVariable, "formula must be closed (free variable " + *free.begin() + ")");
  std::set<std::string> taken;
  detail::collect_names(phi, taken);
  for (const auto& c : sig.constants()) taken.insert(c);
  for (const auto& [f, a] : sig.functions()) taken.insert(f);
  for (const auto& [r, a] : sig.relations()) taken.insert(r);
  Formula renamed = detail::BinderRenamer(std::move(taken)).run(phi);
  return detail::pull_quantifiers(renamed);
}

// ---------------------------------------------------------------------------
// Skolemization

struct SkolemSymbol {
  std::size_t position = 0;  // 1-based index of the existential in the prefix
  std::string variable;
  std::string name;
  std::vector<std::string> universals;  // preceding universal variables, in order

  int arity() const { return static_cast<int>(universals.size()); }

  Term term() const {
    if (universals.empty()) return Term::constant(name);
    std::vector<Term> args;
    for (const auto& u : universals) args.push_back(Term::variable(u));
    return Term::apply(name, std::move(args));
  }
};

struct SkolemResult {
  Signature extended_signature;
  std::vector<SkolemSymbol> skolem_symbols;
  PrenexFormula sigma;  // universal prefix only
  Formula substituted_matrix;
};

namespace detail {

inline Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.kind == Term::Kind::Variable) {
    auto it = sub.find(t.name);
    return it == sub.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, sub);
  return out;
}

inline Formula substitute(const Formula& f, const std::map<std::string, Term>& sub) {
  Formula out = f;
  for (auto& t : out.terms) t = substitute(t, sub);
  for (auto& c : out.children) c = substitute(c, sub);
  return out;
}

}  // namespace detail

// Adds `sk_<tag>_<k>` for the existential at prefix position k, of arity
// equal to the number of universals before it. A name already declared in
// `sig` gets a numeric suffix.
inline SkolemResult skolemize(const PrenexFormula& pf, const Signature& sig, std::string_view tag) {
  if (!is_prenex(pf.to_formula()))
    throw Error(ErrorCode::NotPrenex, "prefix variables must be distinct over a quantifier-free matrix");
  SkolemResult result;
  result.extended_signature = sig;
  std::vector<std::string> universals;
  std::map<std::string, Term> sub;
  for (std::size_t i = 0; i < pf.prefix.size(); ++i) {
    const auto& entry = pf.prefix[i];
    if (entry.quantifier == Quantifier::Forall) {
      universals.push_back(entry.variable);
      result.sigma.prefix.push_back(entry);
      continue;
    }
    SkolemSymbol sym;
    sym.position = i + 1;
    sym.variable = entry.variable;
    sym.universals = universals;
    std::string base = "sk_" + std::string(tag) + "_" + std::to_string(sym.position);
    sym.name = base;
    for (std::size_t n = 1; result.extended_signature.declares(sym.name) ||
                            !is_identifier(sym.name);
         ++n)
      sym.name = base + "_" + std::to_string(n);
    if (sym.arity() == 0)
      result.extended_signature.add_constant(sym.name);
    else
      result.extended_signature.add_function(sym.name, sym.arity());
    sub.emplace(sym.variable, sym.term());
    result.skolem_symbols.push_back(std::move(sym));
  }
  result.substituted_matrix = detail::substitute(pf.matrix, sub);
  result.sigma.matrix = result.substituted_matrix;
  return result;
}

// Copy of `m` over a larger signature; symbols new to `extended` are left
// uninterpreted.
inline Structure expand_signature(const Structure& m, const Signature& extended) {
  Structure out(extended, m.domain());
  const Signature& sig = m.signature();
  for (const auto& c : sig.constants()) out.set_constant(c, m.constant(c));
  for (const auto& [f, a] : sig.functions()) out.set_function(f, m.function_values(f));
  for (const auto& [r, a] : sig.relations()) out.set_relation(r, m.relation(r));
  return out;
}

// The expansion M' of `m` in which every Skolem symbol reads its table off
// `s`: for each tuple of universal choices, walk down the arena of the
// prenex formula and record the element `s` picks at the existential.
inline Structure skolem_interpretations_from_strategy(const Structure& m, const PrenexFormula& pf,
                                                      const Strategy& s,
                                                      std::string_view tag = "phi") {
  Arena ar = build_arena(m, pf.to_formula());
  if (s.owner() != Player::Verifier || !verify_strategy(ar, s))
    throw Error(ErrorCode::StrategyNotWinning, "strategy is not winning for the Verifier");
  SkolemResult sk = skolemize(pf, m.signature(), tag);
  Structure expanded = expand_signature(m, sk.extended_signature);

  for (const auto& sym : sk.skolem_symbols) {
    std::vector<Element> table;
    table.reserve(m.rows(sym.arity()));
    for (std::size_t row = 0; row < m.rows(sym.arity()); ++row) {
      Tuple universal_values = m.decode(row, sym.arity());
      std::size_t next_universal = 0;
      NodeId cur = Arena::root();
      for (std::size_t i = 0; i + 1 < sym.position; ++i) {
        const ArenaNode& n = ar.nodes()[cur];
        cur = pf.prefix[i].quantifier == Quantifier::Forall
                  ? n.children[universal_values[next_universal++]]
                  : n.children[*s.choice(cur)];
      }
      const ArenaNode& at = ar.nodes()[cur];
      table.push_back(*ar.nodes()[at.children[*s.choice(cur)]].element);
    }
    if (sym.arity() == 0)
      expanded.set_constant(sym.name, table.front());
    else
      expanded.set_function(sym.name, std::move(table));
  }

  if (!tarski_eval(expanded, sk.sigma.to_formula()))
    throw Error(ErrorCode::CertificateFailure,
                "strategy-built expansion does not satisfy " + render(sk.sigma.to_formula()));
  return expanded;
}

// Skolem normal forms of a whole theory; formula i is tagged `phi<i>`.
struct SkolemizedTheory {
  Signature signature;
  Theory sigma;
};

inline SkolemizedTheory skolemize_theory(const Theory& t, const Signature& sig) {
  SkolemizedTheory out{sig, {}};
  for (std::size_t i = 0; i < t.size(); ++i) {
    PrenexFormula pf = prenexify(to_game_normal(t[i]), out.signature);
    SkolemResult sk = skolemize(pf, out.signature, "phi" + std::to_string(i + 1));
    out.signature = sk.extended_signature;
    out.sigma.push_back(sk.sigma.to_formula());
  }
  return out;
}

}  // namespace fog
