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

// Evaluation games EV(M, phi): the arena tree, backward induction, positional
// strategies and Graphviz export.
//
// Roles are tracked with a parity bit instead of swapping player names: a
// node under an odd number of negations has its controller flipped. Colors
// always speak for the players as named at the root (Green = the root
// Verifier wins from here).

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fog/error.hpp"
#include "fog/semantics.hpp"
#include "fog/syntax.hpp"

namespace fog {

enum class Player { Verifier, Falsifier };

constexpr Player opponent(Player p) {
  return p == Player::Verifier ? Player::Falsifier : Player::Verifier;
}

inline std::string_view to_string(Player p) {
  return p == Player::Verifier ? "Verifier" : "Falsifier";
}

inline std::optional<Player> parse_player(std::string_view s) {
  if (s == "Verifier" || s == "verifier" || s == "V") return Player::Verifier;
  if (s == "Falsifier" || s == "falsifier" || s == "F") return Player::Falsifier;
  return std::nullopt;
}

enum class Color { Green, Red };

constexpr Color winning_color(Player p) { return p == Player::Verifier ? Color::Green : Color::Red; }

inline std::string_view to_string(Color c) { return c == Color::Green ? "green" : "red"; }

struct ArenaNode {
  NodeId formula_node = 0;  // id in the decomposition tree
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  // Element picked on the edge into this node, when the parent is a quantifier.
  std::optional<Element> element;
  unsigned parity = 0;  // negations strictly above, mod 2
  std::optional<Player> controller;
};

struct Position {
  NodeId formula_node = 0;
  Assignment assignment;
  unsigned parity = 0;
};

struct Move {
  NodeId child = 0;
  std::string label;

  bool operator==(const Move&) const = default;
};

struct ArenaOptions {
  std::size_t node_cap = 1'000'000;
};

inline std::optional<Player> controller_of(Connective kind, unsigned parity) {
  switch (kind) {
    case Connective::Or:
    case Connective::Exists:
      return parity == 0 ? Player::Verifier : Player::Falsifier;
    case Connective::And:
    case Connective::Forall:
      return parity == 0 ? Player::Falsifier : Player::Verifier;
    default:
      return std::nullopt;
  }
}

class Arena {
 public:
  const Structure& structure() const { return *structure_; }
  const std::shared_ptr<const Structure>& structure_ptr() const { return structure_; }
  const DecompTree& tree() const { return tree_; }
  const Formula& formula() const { return tree_.formula(); }
  const std::vector<ArenaNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  static constexpr NodeId root() { return 0; }

  const ArenaNode& node(NodeId id) const {
    if (id >= nodes_.size())
      throw Error(ErrorCode::UnknownNode, "no arena node " + std::to_string(id));
    return nodes_[id];
  }

  bool is_leaf(NodeId id) const { return node(id).children.empty(); }

  const Formula& subformula(NodeId id) const { return *tree_.node(node(id).formula_node).formula; }

  // Element bound by the quantifier `binder` (a decomposition-tree node) on
  // the path from the root to `id`.
  std::optional<Element> binding(NodeId id, NodeId binder) const {
    NodeId cur = id;
    while (auto parent = nodes_[cur].parent) {
      if (nodes_[*parent].formula_node == binder) return nodes_[cur].element;
      cur = *parent;
    }
    return std::nullopt;
  }

  // Visible bindings at `id`, outermost quantifier first; a shadowed
  // variable is listed once, at its innermost binding.
  std::vector<std::pair<std::string, Element>> bindings(NodeId id) const {
    std::vector<std::pair<std::string, Element>> inner_first;
    node(id);
    NodeId cur = id;
    while (auto parent = nodes_[cur].parent) {
      const Formula& f = subformula(*parent);
      if (f.is_quantifier()) {
        bool shadowed = false;
        for (const auto& b : inner_first) shadowed = shadowed || b.first == f.variable;
        if (!shadowed) inner_first.emplace_back(f.variable, *nodes_[cur].element);
      }
      cur = *parent;
    }
    return {inner_first.rbegin(), inner_first.rend()};
  }

  Assignment assignment(NodeId id) const {
    Assignment rho;
    for (auto& [var, e] : bindings(id)) rho.emplace(var, e);
    return rho;
  }

  Position position(NodeId id) const {
    return Position{node(id).formula_node, assignment(id), node(id).parity};
  }

  // Truth of the atom at a leaf under the leaf's assignment.
  bool atom_holds(NodeId leaf) const {
    NodeId fnode = node(leaf).formula_node;
    return atomic_holds_with(structure(), subformula(leaf), [&](const std::string& var) {
      auto binder = tree_.binder_of(fnode, var);
      if (!binder) throw Error(ErrorCode::FreeVariable, "formula must be closed (free variable " + var + ")");
      return *binding(leaf, *binder);
    });
  }

  // Label of the move leading into `child`.
  std::string move_label(NodeId child) const {
    auto parent = node(child).parent;
    if (!parent) return "";
    const Formula& f = subformula(*parent);
    if (f.is_quantifier()) return structure().name_of(*nodes_[child].element);
    if (f.kind == Connective::Not) return "enter";
    return nodes_[*parent].children.front() == child ? "left" : "right";
  }

  // "P(x) | R(x, y) [x:=a, y:=b]"
  std::string node_label(NodeId id) const {
    std::string label = render(subformula(id));
    auto b = bindings(id);
    if (b.empty()) return label;
    label += " [";
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) label += ", ";
      label += b[i].first + ":=" + structure().name_of(b[i].second);
    }
    return label + "]";
  }

  // Nodes on the longest root-to-leaf path.
  std::size_t height() const {
    std::vector<std::size_t> depth(nodes_.size(), 1);
    std::size_t h = 0;
    for (NodeId id = 0; id < nodes_.size(); ++id) {
      if (auto p = nodes_[id].parent) depth[id] = depth[*p] + 1;
      h = std::max(h, depth[id]);
    }
    return h;
  }

 private:
  friend Arena build_arena(std::shared_ptr<const Structure>, const DecompTree&, const ArenaOptions&);

  Arena(std::shared_ptr<const Structure> m, DecompTree tree)
      : structure_(std::move(m)), tree_(std::move(tree)) {}

  NodeId grow(NodeId fnode, std::optional<NodeId> parent, std::optional<Element> element,
              unsigned parity) {
    NodeId id = nodes_.size();
    const Formula& f = *tree_.node(fnode).formula;
    nodes_.push_back(ArenaNode{fnode, parent, {}, element, parity, controller_of(f.kind, parity)});
    const auto& kids = tree_.node(fnode).children;
    std::vector<NodeId> children;
    switch (f.kind) {
      case Connective::Atom:
        break;
      case Connective::Not:
        children.push_back(grow(kids[0], id, std::nullopt, parity ^ 1u));
        break;
      case Connective::Exists:
      case Connective::Forall:
        children.reserve(structure_->size());
        for (Element e = 0; e < structure_->size(); ++e)
          children.push_back(grow(kids[0], id, e, parity));
        break;
      default:
        for (NodeId k : kids) children.push_back(grow(k, id, std::nullopt, parity));
        break;
    }
    nodes_[id].children = std::move(children);
    return id;
  }

  std::shared_ptr<const Structure> structure_;
  DecompTree tree_;
  std::vector<ArenaNode> nodes_;
};

namespace detail {

// Arena size for the subtree at `fnode`, saturating at cap + 1.
inline std::size_t arena_size(const DecompTree& tree, NodeId fnode, std::size_t n, std::size_t cap) {
  const auto& dn = tree.node(fnode);
  std::size_t total = 1;
  for (NodeId k : dn.children) {
    std::size_t sub = arena_size(tree, k, n, cap);
    if (dn.formula->is_quantifier()) sub = (sub > (cap + 1) / n) ? cap + 1 : sub * n;
    total = std::min(cap + 1, total + sub);
  }
  return total;
}

}  // namespace detail

inline Arena build_arena(std::shared_ptr<const Structure> m, const DecompTree& tree,
                         const ArenaOptions& options = {}) {
  const Formula& phi = tree.formula();
  if (!is_game_normal(phi))
    throw Error(ErrorCode::NonGameNormal, "evaluation games need connectives among ~, |, &");
  for (const auto& n : tree.nodes())
    for (const auto& occ : n.occurrences)
      if (!occ.binder)
        throw Error(ErrorCode::FreeVariable, "formula must be closed (free variable " + occ.variable + ")");
  std::size_t size = detail::arena_size(tree, 0, m->size(), options.node_cap);
  if (size > options.node_cap)
    throw Error(ErrorCode::ArenaTooLarge,
                "arena exceeds the cap of " + std::to_string(options.node_cap) + " nodes");
  Arena ar(std::move(m), tree);
  ar.nodes_.reserve(size);
  ar.grow(0, std::nullopt, std::nullopt, 0);
  return ar;
}

inline Arena build_arena(const Structure& m, const Formula& phi, const ArenaOptions& options = {}) {
  return build_arena(std::make_shared<const Structure>(m), DecompTree(phi), options);
}

// ---------------------------------------------------------------------------
// Backward induction

class SolvedArena {
 public:
  SolvedArena(Arena arena, std::vector<Color> colors)
      : arena_(std::move(arena)), colors_(std::move(colors)) {}

  const Arena& arena() const { return arena_; }
  const std::vector<Color>& colors() const { return colors_; }
  Color color(NodeId id) const {
    arena_.node(id);
    return colors_[id];
  }

 private:
  Arena arena_;
  std::vector<Color> colors_;
};

inline Color leaf_color(const Arena& ar, NodeId leaf) {
  bool holds = ar.atom_holds(leaf);
  return (holds != (ar.nodes()[leaf].parity == 1)) ? Color::Green : Color::Red;
}

inline SolvedArena solve(Arena ar) {
  const auto& nodes = ar.nodes();
  std::vector<Color> colors(nodes.size(), Color::Red);
  // Children always carry larger ids than their parent.
  for (NodeId id = nodes.size(); id-- > 0;) {
    const ArenaNode& n = nodes[id];
    if (n.children.empty()) {
      colors[id] = leaf_color(ar, id);
    } else if (!n.controller) {
      colors[id] = colors[n.children.front()];
    } else {
      Color want = winning_color(*n.controller);
      bool reachable = false;
      for (NodeId c : n.children) reachable = reachable || colors[c] == want;
      colors[id] = reachable ? want : (want == Color::Green ? Color::Red : Color::Green);
    }
  }
  return SolvedArena(std::move(ar), std::move(colors));
}

inline Player winner(const SolvedArena& sa) {
  return sa.color(Arena::root()) == Color::Green ? Player::Verifier : Player::Falsifier;
}

// ---------------------------------------------------------------------------
// Strategies

// Positional strategy: for nodes the owner controls, the index of the chosen
// child.
class Strategy {
 public:
  Strategy(Player owner, std::size_t arena_size) : owner_(owner), choices_(arena_size) {}

  Player owner() const { return owner_; }
  std::size_t arena_size() const { return choices_.size(); }

  std::optional<std::size_t> choice(NodeId id) const {
    if (id >= choices_.size() || !choices_[id]) return std::nullopt;
    return *choices_[id];
  }

  void set_choice(NodeId id, std::size_t child_index) {
    choices_.at(id) = static_cast<std::uint32_t>(child_index);
  }

  void clear_choice(NodeId id) { choices_.at(id).reset(); }

  std::size_t defined_count() const {
    std::size_t n = 0;
    for (const auto& c : choices_) n += c.has_value();
    return n;
  }

  bool operator==(const Strategy&) const = default;

 private:
  Player owner_;
  std::vector<std::optional<std::uint32_t>> choices_;
};

// Lowest-index child of the owner's winning color, else the first child.
inline Strategy extract_strategy(const SolvedArena& sa, Player who) {
  const auto& nodes = sa.arena().nodes();
  Strategy s(who, nodes.size());
  Color want = winning_color(who);
  for (NodeId id = 0; id < nodes.size(); ++id) {
    if (nodes[id].controller != who) continue;
    const auto& kids = nodes[id].children;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (sa.colors()[kids[i]] == want) {
        pick = i;
        break;
      }
    }
    s.set_choice(id, pick);
  }
  return s;
}

// Every play in which the owner follows `s` and the opponent moves freely
// ends in a leaf of the owner's color. A reached owner node without a
// choice fails the check.
inline bool verify_strategy(const Arena& ar, const Strategy& s) {
  if (s.arena_size() != ar.size()) return false;
  const auto& nodes = ar.nodes();
  Color want = winning_color(s.owner());
  std::vector<NodeId> stack{Arena::root()};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const ArenaNode& n = nodes[id];
    if (n.children.empty()) {
      if (leaf_color(ar, id) != want) return false;
    } else if (n.controller == s.owner()) {
      auto pick = s.choice(id);
      if (!pick || *pick >= n.children.size()) return false;
      stack.push_back(n.children[*pick]);
    } else {
      stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
  }
  return true;
}

inline std::vector<Move> legal_moves(const Arena& ar, NodeId pos) {
  std::vector<Move> moves;
  for (NodeId c : ar.node(pos).children) moves.push_back({c, ar.move_label(c)});
  return moves;
}

// ---------------------------------------------------------------------------
// Graphviz

namespace detail {

inline std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Nodes filled green/red; edges the strategy picks are drawn in blue.
inline std::string export_dot(const SolvedArena& sa, const Strategy* strategy = nullptr) {
  const Arena& ar = sa.arena();
  std::string out = "digraph arena {\n";
  out += "  node [shape=box, style=\"rounded,filled\", fontname=\"Helvetica\"];\n";
  out += "  edge [fontname=\"Helvetica\"];\n";
  for (NodeId id = 0; id < ar.size(); ++id) {
    const ArenaNode& n = ar.nodes()[id];
    out += "  n" + std::to_string(id) + " [label=\"" + detail::dot_escape(ar.node_label(id)) + "\"";
    if (n.controller) out += ", xlabel=\"" + std::string(n.controller == Player::Verifier ? "V" : "F") + "\"";
    out += std::string(", fillcolor=\"") +
           (sa.colors()[id] == Color::Green ? "palegreen" : "lightcoral") + "\"];\n";
  }
  for (NodeId id = 0; id < ar.size(); ++id) {
    const ArenaNode& n = ar.nodes()[id];
    std::optional<std::size_t> picked;
    if (strategy && n.controller == strategy->owner()) picked = strategy->choice(id);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      NodeId c = n.children[i];
      out += "  n" + std::to_string(id) + " -> n" + std::to_string(c) + " [label=\"" +
             detail::dot_escape(ar.move_label(c)) + "\"";
      if (picked == i) out += ", color=\"blue\", penwidth=2";
      out += "];\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace fog
