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

// First-order syntax: signatures, terms, formulas, their concrete ASCII
// syntax and the decomposition tree used to build evaluation games.
//
// Formula grammar, loosest to tightest binding:
//
//   formula := iff
//   iff     := implies ("<->" implies)*          left associative
//   implies := disj ("->" implies)?              right associative
//   disj    := conj ("|" conj)*
//   conj    := unary ("&" unary)*
//   unary   := "~" unary | ("forall"|"exists") VAR "." formula
//            | "(" formula ")" | atom
//   atom    := REL "(" term ("," term)* ")" | term "=" term
//   term    := VAR | CONST | FUN "(" term ("," term)* ")"
//
// A quantifier's scope extends as far right as possible.

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fog/error.hpp"

namespace fog {

using NodeId = std::size_t;

inline bool is_keyword(std::string_view s) { return s == "forall" || s == "exists"; }

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) words.push_back(s.substr(i, j - i));
    i = j;
  }
  return words;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Signature

enum class SymbolKind { Constant, Function, Relation };

class Signature {
 public:
  void add_constant(const std::string& name) {
    check_fresh(name);
    constants_.insert(name);
  }

  void add_function(const std::string& name, int arity) {
    check_fresh(name);
    if (arity < 1) throw Error(ErrorCode::BadArity, "function " + name + " needs arity >= 1");
    functions_.emplace(name, arity);
  }

  void add_relation(const std::string& name, int arity) {
    check_fresh(name);
    if (arity < 1) throw Error(ErrorCode::BadArity, "relation " + name + " needs arity >= 1");
    relations_.emplace(name, arity);
  }

  void set_equality(bool enabled) { equality_ = enabled; }
  bool equality_enabled() const { return equality_; }

  std::optional<SymbolKind> kind_of(std::string_view name) const {
    if (constants_.find(name) != constants_.end()) return SymbolKind::Constant;
    if (functions_.find(name) != functions_.end()) return SymbolKind::Function;
    if (relations_.find(name) != relations_.end()) return SymbolKind::Relation;
    return std::nullopt;
  }

  bool declares(std::string_view name) const { return kind_of(name).has_value(); }

  // Arity of a declared symbol; constants have arity 0.
  int arity(std::string_view name) const {
    if (auto it = functions_.find(name); it != functions_.end()) return it->second;
    if (auto it = relations_.find(name); it != relations_.end()) return it->second;
    if (constants_.find(name) != constants_.end()) return 0;
    throw Error(ErrorCode::UnknownSymbol, "unknown symbol " + std::string(name));
  }

  const std::set<std::string, std::less<>>& constants() const { return constants_; }
  const std::map<std::string, int, std::less<>>& functions() const { return functions_; }
  const std::map<std::string, int, std::less<>>& relations() const { return relations_; }

  bool empty() const { return constants_.empty() && functions_.empty() && relations_.empty(); }

  bool operator==(const Signature&) const = default;

 private:
  void check_fresh(const std::string& name) const {
    if (!is_identifier(name) || is_keyword(name))
      throw Error(ErrorCode::Parse, "invalid symbol name '" + name + "'");
    if (declares(name)) throw Error(ErrorCode::DuplicateSymbol, "duplicate symbol " + name);
  }

  std::set<std::string, std::less<>> constants_;
  std::map<std::string, int, std::less<>> functions_;
  std::map<std::string, int, std::less<>> relations_;
  bool equality_ = false;
};

// Lines: `const <name>`, `fun <name>/<arity>`, `rel <name>/<arity>` and the
// flag line `equality`. '#' starts a comment.
inline Signature parse_signature(std::string_view text) {
  Signature sig;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    auto words = detail::split_words(detail::strip_comment(lines[i]));
    if (words.empty()) continue;
    auto keyword = words[0];
    try {
      if (keyword == "equality" && words.size() == 1) {
        sig.set_equality(true);
      } else if (keyword == "const" && words.size() == 2) {
        sig.add_constant(std::string(words[1]));
      } else if ((keyword == "fun" || keyword == "rel") && words.size() == 2) {
        auto decl = words[1];
        auto slash = decl.find('/');
        if (slash == std::string_view::npos)
          throw Error(ErrorCode::Parse, "expected <name>/<arity> in '" + std::string(decl) + "'");
        std::string name(decl.substr(0, slash));
        std::string arity_text(decl.substr(slash + 1));
        if (arity_text.empty() ||
            !std::all_of(arity_text.begin(), arity_text.end(), [](char c) {
              return c == '-' || std::isdigit(static_cast<unsigned char>(c));
            }))
          throw Error(ErrorCode::Parse, "malformed arity '" + arity_text + "'");
        int arity = 0;
        try {
          arity = std::stoi(arity_text);
        } catch (const std::exception&) {
          throw Error(ErrorCode::Parse, "malformed arity '" + arity_text + "'");
        }
        if (keyword == "fun")
          sig.add_function(name, arity);
        else
          sig.add_relation(name, arity);
      } else {
        throw Error(ErrorCode::Parse, "malformed declaration '" +
                                          std::string(detail::trim(lines[i])) + "'");
      }
    } catch (const Error& e) {
      if (e.line() != 0) throw;
      throw Error(e.code(), e.what(), line_no);
    }
  }
  return sig;
}

inline std::string render_signature(const Signature& sig) {
  std::string out;
  if (sig.equality_enabled()) out += "equality\n";
  for (const auto& c : sig.constants()) out += "const " + c + "\n";
  for (const auto& [name, arity] : sig.functions())
    out += "fun " + name + "/" + std::to_string(arity) + "\n";
  for (const auto& [name, arity] : sig.relations())
    out += "rel " + name + "/" + std::to_string(arity) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Terms and formulas

struct Term {
  enum class Kind { Variable, Constant, Application };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string name) { return Term{Kind::Variable, std::move(name), {}}; }
  static Term constant(std::string name) { return Term{Kind::Constant, std::move(name), {}}; }
  static Term apply(std::string name, std::vector<Term> args) {
    return Term{Kind::Application, std::move(name), std::move(args)};
  }

  bool operator==(const Term&) const = default;
};

enum class Connective { Atom, Not, Or, And, Implies, Iff, Exists, Forall };

inline constexpr std::string_view kEqualityRelation = "=";

struct Formula {
  Connective kind = Connective::Atom;
  // Relation name of an atom; "=" for equality atoms.
  std::string relation;
  std::vector<Term> terms;
  // Bound variable of a quantifier.
  std::string variable;
  std::vector<Formula> children;

  static Formula atom(std::string relation, std::vector<Term> terms) {
    Formula f;
    f.relation = std::move(relation);
    f.terms = std::move(terms);
    return f;
  }
  static Formula equals(Term lhs, Term rhs) {
    return atom(std::string(kEqualityRelation), {std::move(lhs), std::move(rhs)});
  }
  static Formula negation(Formula f) { return unary(Connective::Not, std::move(f)); }
  static Formula disjunction(Formula a, Formula b) {
    return binary(Connective::Or, std::move(a), std::move(b));
  }
  static Formula conjunction(Formula a, Formula b) {
    return binary(Connective::And, std::move(a), std::move(b));
  }
  static Formula implication(Formula a, Formula b) {
    return binary(Connective::Implies, std::move(a), std::move(b));
  }
  static Formula biconditional(Formula a, Formula b) {
    return binary(Connective::Iff, std::move(a), std::move(b));
  }
  static Formula exists(std::string var, Formula body) {
    return quantified(Connective::Exists, std::move(var), std::move(body));
  }
  static Formula forall(std::string var, Formula body) {
    return quantified(Connective::Forall, std::move(var), std::move(body));
  }

  bool is_atom() const { return kind == Connective::Atom; }
  bool is_equality() const { return is_atom() && relation == kEqualityRelation; }
  bool is_quantifier() const { return kind == Connective::Exists || kind == Connective::Forall; }
  bool is_binary() const {
    return kind == Connective::Or || kind == Connective::And || kind == Connective::Implies ||
           kind == Connective::Iff;
  }

  bool operator==(const Formula&) const = default;

 private:
  static Formula unary(Connective kind, Formula child) {
    Formula f;
    f.kind = kind;
    f.children.push_back(std::move(child));
    return f;
  }
  static Formula binary(Connective kind, Formula a, Formula b) {
    Formula f;
    f.kind = kind;
    f.children.reserve(2);
    f.children.push_back(std::move(a));
    f.children.push_back(std::move(b));
    return f;
  }
  static Formula quantified(Connective kind, std::string var, Formula body) {
    Formula f = unary(kind, std::move(body));
    f.variable = std::move(var);
    return f;
  }
};

// Number of formula nodes on the longest root-to-leaf path. Terms do not count.
inline std::size_t formula_depth(const Formula& f) {
  std::size_t deepest = 0;
  for (const auto& c : f.children) deepest = std::max(deepest, formula_depth(c));
  return deepest + 1;
}

// Only {~, |, &, exists, forall} and atoms.
inline bool is_game_normal(const Formula& f) {
  if (f.kind == Connective::Implies || f.kind == Connective::Iff) return false;
  return std::all_of(f.children.begin(), f.children.end(), is_game_normal);
}

inline bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  return std::all_of(f.children.begin(), f.children.end(), is_quantifier_free);
}

// ---------------------------------------------------------------------------
// Free variables

namespace detail {

inline void collect_term_variables(const Term& t, std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Variable) {
    out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_term_variables(a, out);
}

inline void collect_free(const Formula& f, std::multiset<std::string>& bound,
                         std::set<std::string>& free) {
  if (f.is_atom()) {
    std::vector<std::string> vars;
    for (const auto& t : f.terms) collect_term_variables(t, vars);
    for (auto& v : vars)
      if (bound.find(v) == bound.end()) free.insert(std::move(v));
    return;
  }
  if (f.is_quantifier()) {
    auto it = bound.insert(f.variable);
    collect_free(f.children.front(), bound, free);
    bound.erase(it);
    return;
  }
  for (const auto& c : f.children) collect_free(c, bound, free);
}

}  // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
  std::multiset<std::string> bound;
  std::set<std::string> free;
  detail::collect_free(f, bound, free);
  return free;
}

inline bool is_closed(const Formula& f) { return free_variables(f).empty(); }

inline std::set<std::string> term_variables(const Term& t) {
  std::vector<std::string> vars;
  detail::collect_term_variables(t, vars);
  return {vars.begin(), vars.end()};
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline int precedence(Connective kind) {
  switch (kind) {
    case Connective::Iff: return 1;
    case Connective::Implies: return 2;
    case Connective::Or: return 3;
    case Connective::And: return 4;
    default: return 5;
  }
}

inline std::string_view operator_text(Connective kind) {
  switch (kind) {
    case Connective::Iff: return " <-> ";
    case Connective::Implies: return " -> ";
    case Connective::Or: return " | ";
    case Connective::And: return " & ";
    default: return "";
  }
}

inline void render_term_into(std::string& out, const Term& t) {
  out += t.name;
  if (t.kind != Term::Kind::Application) return;
  out += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    render_term_into(out, t.args[i]);
  }
  out += ')';
}

// `trailing` is true when more input follows this subformula at the same
// parenthesis level; a quantifier there must be wrapped, otherwise its scope
// would swallow the rest.
inline void render_into(std::string& out, const Formula& f, int min_prec, bool trailing) {
  int prec = precedence(f.kind);
  bool paren = prec < min_prec || (f.is_quantifier() && trailing);
  if (paren) {
    out += '(';
    trailing = false;
  }
  switch (f.kind) {
    case Connective::Atom:
      if (f.is_equality()) {
        render_term_into(out, f.terms[0]);
        out += " = ";
        render_term_into(out, f.terms[1]);
      } else {
        out += f.relation;
        out += '(';
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
          if (i) out += ", ";
          render_term_into(out, f.terms[i]);
        }
        out += ')';
      }
      break;
    case Connective::Not:
      out += '~';
      render_into(out, f.children[0], 5, trailing);
      break;
    case Connective::Exists:
    case Connective::Forall: {
      out += f.kind == Connective::Forall ? "forall " : "exists ";
      out += f.variable;
      out += ". ";
      const Formula& body = f.children[0];
      if (body.is_binary()) {
        out += '(';
        render_into(out, body, 0, false);
        out += ')';
      } else {
        render_into(out, body, 5, trailing);
      }
      break;
    }
    case Connective::Implies:
      render_into(out, f.children[0], prec + 1, true);
      out += operator_text(f.kind);
      render_into(out, f.children[1], prec, trailing);
      break;
    case Connective::Or:
    case Connective::And:
    case Connective::Iff:
      render_into(out, f.children[0], prec, true);
      out += operator_text(f.kind);
      render_into(out, f.children[1], prec + 1, trailing);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

inline std::string render(const Term& t) {
  std::string out;
  detail::render_term_into(out, t);
  return out;
}

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_into(out, f, 0, false);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Not, And, Or, Implies, Iff, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> lex_formula(std::string_view src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto at = [&](std::size_t k) { return k < src.size() ? src[k] : '\0'; };
  while (i < src.size()) {
    char c = src[i];
    std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      tokens.push_back({Tok::Ident, std::string(src.substr(i, j - i)), col});
      i = j;
      continue;
    }
    switch (c) {
      case '(': tokens.push_back({Tok::LParen, "(", col}); ++i; continue;
      case ')': tokens.push_back({Tok::RParen, ")", col}); ++i; continue;
      case ',': tokens.push_back({Tok::Comma, ",", col}); ++i; continue;
      case '.': tokens.push_back({Tok::Dot, ".", col}); ++i; continue;
      case '~': tokens.push_back({Tok::Not, "~", col}); ++i; continue;
      case '&': tokens.push_back({Tok::And, "&", col}); ++i; continue;
      case '|': tokens.push_back({Tok::Or, "|", col}); ++i; continue;
      case '=': tokens.push_back({Tok::Equals, "=", col}); ++i; continue;
      case '-':
        if (at(i + 1) == '>') {
          tokens.push_back({Tok::Implies, "->", col});
          i += 2;
          continue;
        }
        break;
      case '<':
        if (at(i + 1) == '-' && at(i + 2) == '>') {
          tokens.push_back({Tok::Iff, "<->", col});
          i += 3;
          continue;
        }
        break;
      default:
        break;
    }
    throw Error(ErrorCode::Parse,
                "column " + std::to_string(col) + ": unexpected character '" + c + "'");
  }
  tokens.push_back({Tok::End, "", src.size() + 1});
  return tokens;
}

class FormulaParser {
 public:
  FormulaParser(std::string_view src, const Signature& sig) : tokens_(lex_formula(src)), sig_(sig) {}

  Formula parse() {
    Formula f = parse_iff();
    if (peek().kind == Tok::RParen)
      throw Error(ErrorCode::UnbalancedParens, where() + "unmatched ')'");
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  Token next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }
  std::string where() const { return "column " + std::to_string(peek().column) + ": "; }
  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::Parse, where() + msg); }

  void expect(Tok kind, std::string_view what) {
    if (accept(kind)) return;
    if (kind == Tok::RParen)
      throw Error(ErrorCode::UnbalancedParens, where() + "expected ')'");
    fail("expected " + std::string(what));
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept(Tok::Iff)) lhs = Formula::biconditional(std::move(lhs), parse_implies());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept(Tok::Implies)) return Formula::implication(std::move(lhs), parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept(Tok::Or)) lhs = Formula::disjunction(std::move(lhs), parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept(Tok::And)) lhs = Formula::conjunction(std::move(lhs), parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    if (accept(Tok::Not)) return Formula::negation(parse_unary());
    if (accept(Tok::LParen)) {
      Formula inner = parse_iff();
      expect(Tok::RParen, "')'");
      return inner;
    }
    const Token& tok = peek();
    if (tok.kind == Tok::Ident && is_keyword(tok.text)) {
      bool universal = tok.text == "forall";
      next();
      if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected a variable");
      std::string var = next().text;
      if (sig_.declares(var)) fail("'" + var + "' is a declared symbol, not a variable");
      expect(Tok::Dot, "'.' after quantified variable");
      Formula body = parse_iff();
      return universal ? Formula::forall(std::move(var), std::move(body))
                       : Formula::exists(std::move(var), std::move(body));
    }
    return parse_atom();
  }

  Formula parse_atom() {
    const Token& tok = peek();
    if (tok.kind != Tok::Ident) {
      if (tok.kind == Tok::End) fail("unexpected end of formula");
      if (tok.kind == Tok::RParen)
        throw Error(ErrorCode::UnbalancedParens, where() + "unexpected ')'");
      fail("unexpected '" + tok.text + "'");
    }
    if (sig_.kind_of(tok.text) == SymbolKind::Relation) {
      std::string rel = next().text;
      auto args = parse_arguments(rel);
      int arity = sig_.arity(rel);
      if (static_cast<int>(args.size()) != arity)
        throw Error(ErrorCode::ArityMismatch, "relation " + rel + " expects " +
                                                  std::to_string(arity) + " argument(s), got " +
                                                  std::to_string(args.size()));
      return Formula::atom(std::move(rel), std::move(args));
    }
    Term lhs = parse_term();
    if (peek().kind != Tok::Equals) fail("expected a relation atom or an equation");
    if (!sig_.equality_enabled()) fail("equality is not enabled in this signature");
    next();
    Term rhs = parse_term();
    return Formula::equals(std::move(lhs), std::move(rhs));
  }

  std::vector<Term> parse_arguments(const std::string& symbol) {
    if (peek().kind != Tok::LParen) {
      int arity = sig_.arity(symbol);
      throw Error(ErrorCode::ArityMismatch, symbol + " expects " + std::to_string(arity) +
                                                " argument(s)");
    }
    next();
    std::vector<Term> args;
    args.push_back(parse_term());
    while (accept(Tok::Comma)) args.push_back(parse_term());
    expect(Tok::RParen, "')'");
    return args;
  }

  Term parse_term() {
    const Token& tok = peek();
    if (tok.kind != Tok::Ident || is_keyword(tok.text)) fail("expected a term");
    std::string name = next().text;
    auto kind = sig_.kind_of(name);
    if (!kind) {
      if (peek().kind == Tok::LParen) throw Error(ErrorCode::UnknownSymbol, "unknown symbol " + name);
      return Term::variable(std::move(name));
    }
    switch (*kind) {
      case SymbolKind::Constant:
        if (peek().kind == Tok::LParen)
          throw Error(ErrorCode::ArityMismatch, "constant " + name + " takes no arguments");
        return Term::constant(std::move(name));
      case SymbolKind::Function: {
        auto args = parse_arguments(name);
        int arity = sig_.arity(name);
        if (static_cast<int>(args.size()) != arity)
          throw Error(ErrorCode::ArityMismatch, "function " + name + " expects " +
                                                    std::to_string(arity) + " argument(s), got " +
                                                    std::to_string(args.size()));
        return Term::apply(std::move(name), std::move(args));
      }
      case SymbolKind::Relation:
        break;
    }
    fail("relation " + name + " used as a term");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, const Signature& sig) {
  return detail::FormulaParser(text, sig).parse();
}

// ---------------------------------------------------------------------------
// Decomposition tree

struct VariableOccurrence {
  std::string variable;
  // Quantifier node binding this occurrence; empty when the occurrence is free.
  std::optional<NodeId> binder;
};

struct DecompNode {
  NodeId id = 0;
  std::optional<NodeId> parent;
  const Formula* formula = nullptr;
  std::vector<NodeId> children;
  std::size_t depth = 0;  // root has depth 0
  // Variable occurrences of an atom, left to right.
  std::vector<VariableOccurrence> occurrences;
};

// The formula tree with nodes numbered in preorder (root = 0, every child has
// a larger id than its parent). Copies share the same immutable nodes.
class DecompTree {
 public:
  explicit DecompTree(Formula f) : impl_(std::make_shared<Impl>()) {
    impl_->formula = std::move(f);
    add(impl_->formula, std::nullopt, 0);
    for (auto& node : impl_->nodes) {
      if (!node.formula->is_atom()) continue;
      std::vector<std::string> vars;
      for (const auto& t : node.formula->terms) detail::collect_term_variables(t, vars);
      for (auto& v : vars) {
        auto binder = resolve_binder(node.id, v);
        node.occurrences.push_back({std::move(v), binder});
      }
    }
  }

  const Formula& formula() const { return impl_->formula; }
  const std::vector<DecompNode>& nodes() const { return impl_->nodes; }
  const DecompNode& node(NodeId id) const { return impl_->nodes.at(id); }
  std::size_t size() const { return impl_->nodes.size(); }

  // Number of nodes on the longest root-to-leaf path.
  std::size_t height() const {
    std::size_t h = 0;
    for (const auto& n : impl_->nodes) h = std::max(h, n.depth + 1);
    return h;
  }

  // Walks from `from` towards the root; the first quantifier over `var`
  // met on the way binds it.
  std::optional<NodeId> resolve_binder(NodeId from, std::string_view var) const {
    std::optional<NodeId> cur = impl_->nodes.at(from).parent;
    while (cur) {
      const auto& n = impl_->nodes[*cur];
      if (n.formula->is_quantifier() && n.formula->variable == var) return n.id;
      cur = n.parent;
    }
    return std::nullopt;
  }

  // Binder of `var` as seen from the atom node `leaf`.
  std::optional<NodeId> binder_of(NodeId leaf, std::string_view var) const {
    for (const auto& occ : impl_->nodes.at(leaf).occurrences)
      if (occ.variable == var) return occ.binder;
    return resolve_binder(leaf, var);
  }

 private:
  struct Impl {
    Formula formula;
    std::vector<DecompNode> nodes;
  };

  void add(const Formula& f, std::optional<NodeId> parent, std::size_t depth) {
    NodeId id = impl_->nodes.size();
    impl_->nodes.push_back(DecompNode{id, parent, &f, {}, depth, {}});
    if (parent) impl_->nodes[*parent].children.push_back(id);
    for (const auto& c : f.children) add(c, id, depth + 1);
  }

  std::shared_ptr<Impl> impl_;
};

inline DecompTree decomposition_tree(const Formula& f) { return DecompTree(f); }

}  // namespace fog
