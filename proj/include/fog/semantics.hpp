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

// Finite first-order structures and classical (Tarski) satisfaction.
//
// Structure file grammar, one declaration per line, '#' comments:
//
//   domain a b c
//   c: a                      constant
//   f: a->b, b->a, c->c       unary function, one entry per element
//   g: (a,b)->c, ...          higher arity
//   P: a b                    unary relation (bare elements)
//   R: (a,b) (b,c)            any arity
//   R:                        empty relation
//
// Elements are ordered by their position on the `domain` line.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fog/error.hpp"
#include "fog/syntax.hpp"

namespace fog {

// Index of an element in its structure's domain.
using Element = std::size_t;
using ElementSet = std::set<Element>;
using Tuple = std::vector<Element>;
using Assignment = std::map<std::string, Element, std::less<>>;

class Structure {
 public:
  Structure(Signature sig, std::vector<std::string> domain)
      : sig_(std::move(sig)), domain_(std::move(domain)) {
    if (domain_.empty()) throw Error(ErrorCode::EmptyDomain, "domain must not be empty");
    for (Element e = 0; e < domain_.size(); ++e) {
      if (!is_identifier(domain_[e]))
        throw Error(ErrorCode::Parse, "invalid element name '" + domain_[e] + "'");
      if (!index_.emplace(domain_[e], e).second)
        throw Error(ErrorCode::Parse, "element " + domain_[e] + " listed twice");
    }
  }

  const Signature& signature() const { return sig_; }
  const std::vector<std::string>& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }

  std::optional<Element> find_element(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Element element(std::string_view name) const {
    if (auto e = find_element(name)) return *e;
    throw Error(ErrorCode::ElementOutsideDomain,
                "element " + std::string(name) + " is not in the domain");
  }

  const std::string& name_of(Element e) const { return domain_.at(e); }

  // Row index of an argument tuple: first argument most significant.
  std::size_t encode(std::span<const Element> args) const {
    std::size_t code = 0;
    for (Element a : args) code = code * domain_.size() + a;
    return code;
  }

  Tuple decode(std::size_t code, int arity) const {
    Tuple t(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = code % domain_.size();
      code /= domain_.size();
    }
    return t;
  }

  std::size_t rows(int arity) const {
    std::size_t r = 1;
    for (int i = 0; i < arity; ++i) r *= domain_.size();
    return r;
  }

  void set_constant(std::string_view c, Element e) {
    require(c, SymbolKind::Constant);
    check_element(e);
    constants_[std::string(c)] = e;
  }

  // `values` is indexed by encode(args).
  void set_function(std::string_view f, std::vector<Element> values) {
    require(f, SymbolKind::Function);
    if (values.size() != rows(sig_.arity(f)))
      throw Error(ErrorCode::PartialFunction, "function " + std::string(f) + " table has " +
                                                  std::to_string(values.size()) + " rows, expected " +
                                                  std::to_string(rows(sig_.arity(f))));
    for (Element v : values) check_element(v);
    functions_[std::string(f)] = std::move(values);
  }

  void set_relation(std::string_view r, const std::set<Tuple>& tuples) {
    require(r, SymbolKind::Relation);
    int arity = sig_.arity(r);
    std::vector<std::size_t> codes;
    for (const auto& t : tuples) {
      if (static_cast<int>(t.size()) != arity)
        throw Error(ErrorCode::ArityMismatch, "tuple of wrong length for " + std::string(r));
      for (Element e : t) check_element(e);
      codes.push_back(encode(t));
    }
    std::sort(codes.begin(), codes.end());
    relations_[std::string(r)] = std::move(codes);
  }

  bool has_interpretation(std::string_view symbol) const {
    return constants_.count(symbol) || functions_.count(symbol) || relations_.count(symbol);
  }

  // Throws MissingInterpretation naming the first uninterpreted symbol.
  void validate() const {
    auto check = [&](const std::string& name) {
      if (!has_interpretation(name))
        throw Error(ErrorCode::MissingInterpretation, "no interpretation for " + name);
    };
    for (const auto& c : sig_.constants()) check(c);
    for (const auto& [f, arity] : sig_.functions()) check(f);
    for (const auto& [r, arity] : sig_.relations()) check(r);
  }

  Element constant(std::string_view c) const {
    auto it = constants_.find(c);
    if (it == constants_.end())
      throw Error(ErrorCode::MissingInterpretation, "no interpretation for " + std::string(c));
    return it->second;
  }

  const std::vector<Element>& function_values(std::string_view f) const {
    auto it = functions_.find(f);
    if (it == functions_.end())
      throw Error(ErrorCode::MissingInterpretation, "no interpretation for " + std::string(f));
    return it->second;
  }

  Element apply(std::string_view f, std::span<const Element> args) const {
    return function_values(f).at(encode(args));
  }

  bool holds_code(std::string_view r, std::size_t code) const {
    auto it = relations_.find(r);
    if (it == relations_.end())
      throw Error(ErrorCode::MissingInterpretation, "no interpretation for " + std::string(r));
    return std::binary_search(it->second.begin(), it->second.end(), code);
  }

  bool holds(std::string_view r, std::span<const Element> args) const {
    return holds_code(r, encode(args));
  }

  std::set<Tuple> relation(std::string_view r) const {
    auto it = relations_.find(r);
    if (it == relations_.end())
      throw Error(ErrorCode::MissingInterpretation, "no interpretation for " + std::string(r));
    std::set<Tuple> out;
    for (std::size_t code : it->second) out.insert(decode(code, sig_.arity(r)));
    return out;
  }

  bool operator==(const Structure&) const = default;

 private:
  void require(std::string_view name, SymbolKind kind) const {
    if (sig_.kind_of(name) != kind)
      throw Error(ErrorCode::UnknownSymbol, "symbol " + std::string(name) +
                                                " is not declared with that kind");
  }

  void check_element(Element e) const {
    if (e >= domain_.size())
      throw Error(ErrorCode::ElementOutsideDomain, "element index out of range");
  }

  Signature sig_;
  std::vector<std::string> domain_;
  std::map<std::string, Element, std::less<>> index_;
  std::map<std::string, Element, std::less<>> constants_;
  std::map<std::string, std::vector<Element>, std::less<>> functions_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> relations_;
};

// ---------------------------------------------------------------------------
// Parsing and printing

namespace detail {

class EntryScanner {
 public:
  EntryScanner(std::string_view text, const Structure& m) : text_(text), m_(m) {}

  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }

  bool accept(std::string_view symbol) {
    skip_space();
    if (text_.substr(pos_, symbol.size()) != symbol) return false;
    pos_ += symbol.size();
    return true;
  }

  void expect(std::string_view symbol) {
    if (!accept(symbol)) throw Error(ErrorCode::Parse, "expected '" + std::string(symbol) + "'");
  }

  Element element() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) throw Error(ErrorCode::Parse, "expected an element name");
    return m_.element(text_.substr(start, pos_ - start));
  }

  // Elements after an opening parenthesis, up to and including ')'.
  Tuple rest_of_tuple() {
    Tuple t{element()};
    while (accept(",")) t.push_back(element());
    expect(")");
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  const Structure& m_;
};

inline std::string tuple_text(const Structure& m, const Tuple& t) {
  if (t.size() == 1) return m.name_of(t[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += m.name_of(t[i]);
  }
  return out + ")";
}

inline void parse_interpretation(Structure& m, std::string_view symbol, std::string_view rest) {
  const Signature& sig = m.signature();
  auto kind = sig.kind_of(symbol);
  if (!kind) throw Error(ErrorCode::UnknownSymbol, "unknown symbol " + std::string(symbol));
  EntryScanner scan(rest, m);
  switch (*kind) {
    case SymbolKind::Constant: {
      Element e = scan.element();
      if (!scan.done()) throw Error(ErrorCode::Parse, "constant takes a single element");
      m.set_constant(symbol, e);
      return;
    }
    case SymbolKind::Function: {
      int arity = sig.arity(symbol);
      std::vector<std::optional<Element>> table(m.rows(arity));
      while (!scan.done()) {
        Tuple args = scan.accept("(") ? scan.rest_of_tuple() : Tuple{scan.element()};
        if (static_cast<int>(args.size()) != arity)
          throw Error(ErrorCode::ArityMismatch, "function " + std::string(symbol) + " expects " +
                                                    std::to_string(arity) + " argument(s)");
        scan.expect("->");
        Element value = scan.element();
        auto& slot = table[m.encode(args)];
        if (slot && *slot != value)
          throw Error(ErrorCode::Parse, "function " + std::string(symbol) + " maps " +
                                            tuple_text(m, args) + " twice");
        slot = value;
        if (!scan.done()) scan.expect(",");
      }
      std::vector<Element> values;
      for (std::size_t row = 0; row < table.size(); ++row) {
        if (!table[row])
          throw Error(ErrorCode::PartialFunction, "function " + std::string(symbol) +
                                                      " is partial: no value for " +
                                                      tuple_text(m, m.decode(row, arity)));
        values.push_back(*table[row]);
      }
      m.set_function(symbol, std::move(values));
      return;
    }
    case SymbolKind::Relation: {
      int arity = sig.arity(symbol);
      std::set<Tuple> tuples;
      while (!scan.done()) {
        Tuple t = scan.accept("(") ? scan.rest_of_tuple() : Tuple{scan.element()};
        if (static_cast<int>(t.size()) != arity)
          throw Error(ErrorCode::ArityMismatch, "relation " + std::string(symbol) + " expects " +
                                                    std::to_string(arity) + "-tuples");
        tuples.insert(std::move(t));
        scan.accept(",");
      }
      m.set_relation(symbol, tuples);
      return;
    }
  }
}

inline bool is_declaration_line(std::string_view line) {
  auto words = split_words(strip_comment(line));
  if (words.empty() || line.find(':') != std::string_view::npos) return false;
  return words[0] == "const" || words[0] == "fun" || words[0] == "rel" || words[0] == "equality";
}

}  // namespace detail

inline Structure parse_structure(std::string_view text, const Signature& sig) {
  auto lines = detail::split_lines(text);
  std::optional<Structure> m;
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    auto line = detail::trim(detail::strip_comment(lines[i]));
    if (line.empty()) continue;
    try {
      auto words = detail::split_words(line);
      if (words[0] == "domain") {
        if (m) throw Error(ErrorCode::Parse, "second domain line");
        std::vector<std::string> domain(words.begin() + 1, words.end());
        m.emplace(sig, std::move(domain));
        continue;
      }
      auto colon = line.find(':');
      if (colon == std::string_view::npos)
        throw Error(ErrorCode::Parse, "expected '<symbol>: ...' or 'domain ...'");
      if (!m) throw Error(ErrorCode::Parse, "the domain line must come first");
      auto symbol = detail::trim(line.substr(0, colon));
      if (!seen.insert(std::string(symbol)).second)
        throw Error(ErrorCode::Parse, "symbol " + std::string(symbol) + " interpreted twice");
      detail::parse_interpretation(*m, symbol, line.substr(colon + 1));
    } catch (const Error& e) {
      if (e.line() != 0) throw;
      throw Error(e.code(), e.what(), line_no);
    }
  }
  if (!m) throw Error(ErrorCode::EmptyDomain, "missing domain line");
  m->validate();
  return std::move(*m);
}

// A structure file that also carries its signature declarations (`const`,
// `fun`, `rel`, `equality` lines) in front of or among the interpretations.
inline Structure parse_model(std::string_view text) {
  std::string sig_text;
  std::string struct_text;
  for (auto line : detail::split_lines(text)) {
    // Both texts keep one line per input line so error line numbers match.
    (detail::is_declaration_line(line) ? sig_text : struct_text) += line;
    sig_text += '\n';
    struct_text += '\n';
  }
  return parse_structure(struct_text, parse_signature(sig_text));
}

inline std::string render_element_set(const Structure& m, const ElementSet& s) {
  std::string out = "{";
  bool first = true;
  for (Element e : s) {
    if (!first) out += ", ";
    out += m.name_of(e);
    first = false;
  }
  return out + "}";
}

inline std::string render_structure(const Structure& m) {
  const Signature& sig = m.signature();
  std::string out = "domain";
  for (const auto& name : m.domain()) out += " " + name;
  out += "\n";
  for (const auto& c : sig.constants()) out += c + ": " + m.name_of(m.constant(c)) + "\n";
  for (const auto& [f, arity] : sig.functions()) {
    out += f + ":";
    const auto& values = m.function_values(f);
    for (std::size_t row = 0; row < values.size(); ++row) {
      Tuple args = m.decode(row, arity);
      std::string lhs = arity == 1 ? m.name_of(args[0]) : detail::tuple_text(m, args);
      if (arity > 1 && args.size() == 1) lhs = "(" + lhs + ")";
      out += (row ? ", " : " ") + lhs + "->" + m.name_of(values[row]);
    }
    out += "\n";
  }
  for (const auto& [r, arity] : sig.relations()) {
    out += r + ":";
    for (const auto& t : m.relation(r)) out += " " + detail::tuple_text(m, t);
    out += "\n";
  }
  return out;
}

inline std::string render_model(const Structure& m) {
  return render_signature(m.signature()) + render_structure(m);
}

// ---------------------------------------------------------------------------
// Evaluation

// `resolve` maps a variable name to its element.
template <typename Resolve>
Element eval_term_with(const Structure& m, const Term& t, Resolve&& resolve) {
  switch (t.kind) {
    case Term::Kind::Variable:
      return resolve(t.name);
    case Term::Kind::Constant:
      return m.constant(t.name);
    case Term::Kind::Application: {
      std::size_t code = 0;
      for (const auto& a : t.args) code = code * m.size() + eval_term_with(m, a, resolve);
      return m.function_values(t.name)[code];
    }
  }
  return 0;
}

template <typename Resolve>
bool atomic_holds_with(const Structure& m, const Formula& atom, Resolve&& resolve) {
  if (!atom.is_atom()) throw Error(ErrorCode::NonAtomic, "not an atomic formula: " + render(atom));
  if (atom.is_equality())
    return eval_term_with(m, atom.terms[0], resolve) == eval_term_with(m, atom.terms[1], resolve);
  std::size_t code = 0;
  for (const auto& t : atom.terms) code = code * m.size() + eval_term_with(m, t, resolve);
  return m.holds_code(atom.relation, code);
}

namespace detail {

struct AssignmentLookup {
  const Assignment& rho;
  Element operator()(const std::string& var) const {
    auto it = rho.find(var);
    if (it == rho.end()) throw Error(ErrorCode::UnassignedVariable, "variable " + var + " is unassigned");
    return it->second;
  }
};

inline bool satisfies_rec(const Structure& m, const Formula& f, Assignment& rho) {
  switch (f.kind) {
    case Connective::Atom:
      return atomic_holds_with(m, f, AssignmentLookup{rho});
    case Connective::Not:
      return !satisfies_rec(m, f.children[0], rho);
    case Connective::Or:
      return satisfies_rec(m, f.children[0], rho) || satisfies_rec(m, f.children[1], rho);
    case Connective::And:
      return satisfies_rec(m, f.children[0], rho) && satisfies_rec(m, f.children[1], rho);
    case Connective::Implies:
      return !satisfies_rec(m, f.children[0], rho) || satisfies_rec(m, f.children[1], rho);
    case Connective::Iff:
      return satisfies_rec(m, f.children[0], rho) == satisfies_rec(m, f.children[1], rho);
    case Connective::Exists:
    case Connective::Forall: {
      bool want = f.kind == Connective::Exists;
      std::optional<Element> saved;
      if (auto it = rho.find(f.variable); it != rho.end()) saved = it->second;
      bool result = !want;
      for (Element e = 0; e < m.size(); ++e) {
        rho[f.variable] = e;
        if (satisfies_rec(m, f.children[0], rho) == want) {
          result = want;
          break;
        }
      }
      if (saved)
        rho[f.variable] = *saved;
      else
        rho.erase(f.variable);
      return result;
    }
  }
  return false;
}

}  // namespace detail

inline Element eval_term(const Structure& m, const Assignment& rho, const Term& t) {
  return eval_term_with(m, t, detail::AssignmentLookup{rho});
}

inline bool atomic_holds(const Structure& m, const Assignment& rho, const Formula& atom) {
  return atomic_holds_with(m, atom, detail::AssignmentLookup{rho});
}

// Satisfaction of a formula whose free variables are assigned by `rho`.
inline bool satisfies(const Structure& m, const Assignment& rho, const Formula& f) {
  Assignment local = rho;
  return detail::satisfies_rec(m, f, local);
}

// Classical satisfaction of a sentence; handles every connective directly.
inline bool tarski_eval(const Structure& m, const Formula& phi) {
  auto free = free_variables(phi);
  if (!free.empty())
    throw Error(ErrorCode::FreeVariable, "formula must be closed (free variable " + *free.begin() + ")");
  Assignment rho;
  return detail::satisfies_rec(m, phi, rho);
}

// ---------------------------------------------------------------------------
// Substructures

// Calls visit(tuple) for every tuple of length `arity` over `pool`, in
// lexicographic order of pool positions.
template <typename Visit>
void for_each_tuple(const std::vector<Element>& pool, int arity, Visit&& visit) {
  if (arity == 0) {
    Tuple empty;
    visit(static_cast<const Tuple&>(empty));
    return;
  }
  if (pool.empty()) return;
  std::vector<std::size_t> pos(static_cast<std::size_t>(arity), 0);
  Tuple t(static_cast<std::size_t>(arity), pool[0]);
  while (true) {
    visit(static_cast<const Tuple&>(t));
    int i = arity - 1;
    while (i >= 0 && ++pos[static_cast<std::size_t>(i)] == pool.size()) {
      pos[static_cast<std::size_t>(i)] = 0;
      t[static_cast<std::size_t>(i)] = pool[0];
      --i;
    }
    if (i < 0) return;
    t[static_cast<std::size_t>(i)] = pool[pos[static_cast<std::size_t>(i)]];
  }
}

namespace detail {

struct Escape {
  std::string symbol;
  Tuple args;
  Element value;
};

inline std::optional<Escape> find_escape(const Structure& m, const ElementSet& subset) {
  for (const auto& c : m.signature().constants()) {
    Element v = m.constant(c);
    if (!subset.count(v)) return Escape{c, {}, v};
  }
  std::vector<Element> pool(subset.begin(), subset.end());
  for (const auto& [f, arity] : m.signature().functions()) {
    const auto& values = m.function_values(f);
    std::optional<Escape> found;
    for_each_tuple(pool, arity, [&](const Tuple& args) {
      if (found) return;
      Element v = values[m.encode(args)];
      if (!subset.count(v)) found = Escape{f, args, v};
    });
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace detail

// Contains every constant and is closed under every function of the signature.
inline bool is_function_closed(const Structure& m, const ElementSet& subset) {
  return !detail::find_escape(m, subset).has_value();
}

// The substructure with domain `subset` (in the original element order).
inline Structure restrict(const Structure& m, const ElementSet& subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptySubset, "cannot restrict to the empty set");
  for (Element e : subset)
    if (e >= m.size()) throw Error(ErrorCode::ElementOutsideDomain, "element index out of range");
  if (auto escape = detail::find_escape(m, subset)) {
    std::string app = escape->symbol;
    if (!escape->args.empty()) {
      app += "(";
      for (std::size_t i = 0; i < escape->args.size(); ++i)
        app += (i ? "," : "") + m.name_of(escape->args[i]);
      app += ")";
    }
    throw Error(ErrorCode::NotClosed,
                "subset is not closed: " + app + " = " + m.name_of(escape->value) + " escapes");
  }

  std::vector<Element> kept(subset.begin(), subset.end());
  std::vector<std::string> names;
  std::map<Element, Element> renumber;
  for (Element e : kept) {
    renumber[e] = names.size();
    names.push_back(m.name_of(e));
  }
  const Signature& sig = m.signature();
  Structure n(sig, std::move(names));
  for (const auto& c : sig.constants()) n.set_constant(c, renumber.at(m.constant(c)));
  for (const auto& [f, arity] : sig.functions()) {
    const auto& values = m.function_values(f);
    std::vector<Element> table;
    table.reserve(n.rows(arity));
    for_each_tuple(kept, arity, [&](const Tuple& args) {
      table.push_back(renumber.at(values[m.encode(args)]));
    });
    n.set_function(f, std::move(table));
  }
  for (const auto& [r, arity] : sig.relations()) {
    std::set<Tuple> tuples;
    for (const auto& t : m.relation(r)) {
      if (!std::all_of(t.begin(), t.end(), [&](Element e) { return subset.count(e) > 0; }))
        continue;
      Tuple mapped;
      for (Element e : t) mapped.push_back(renumber.at(e));
      tuples.insert(std::move(mapped));
    }
    n.set_relation(r, tuples);
  }
  return n;
}

}  // namespace fog
