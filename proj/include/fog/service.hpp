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

// Interactive evaluation games: a human plays one role, the engine plays the
// other with its backward-induction strategy. GameService keeps the live
// sessions and speaks JSON; http.hpp puts it on the wire.

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fog/arena.hpp"
#include "fog/error.hpp"
#include "fog/semantics.hpp"
#include "fog/syntax.hpp"
#include "fog/transform.hpp"

namespace fog {

struct HistoryEntry {
  NodeId from = 0;
  std::string label;
  std::string actor;  // "human", "engine" or "auto" (negation nodes)
};

class GameSession {
 public:
  // The formula is normalized to {~, |, &}; it must be closed. Engine and
  // automatic moves are applied until the human is to move or the game ends.
  GameSession(std::string id, const Structure& m, const Formula& phi, Player human,
              const ArenaOptions& arena_options = {})
      : id_(std::move(id)),
        solved_(std::make_shared<const SolvedArena>(
            solve(build_arena(m, to_game_normal(phi), arena_options)))),
        human_(human),
        engine_strategy_(extract_strategy(*solved_, opponent(human))),
        winner_strategy_(extract_strategy(*solved_, winner(*solved_))) {
    advance();
  }

  const std::string& id() const { return id_; }
  const SolvedArena& solved() const { return *solved_; }
  const Arena& arena() const { return solved_->arena(); }
  NodeId current() const { return current_; }
  Player human() const { return human_; }
  Player engine() const { return opponent(human_); }
  const Strategy& engine_strategy() const { return engine_strategy_; }
  const std::vector<HistoryEntry>& history() const { return history_; }

  bool finished() const { return arena().is_leaf(current_); }

  // Empty once the game is over.
  std::optional<Player> to_move() const {
    if (finished()) return std::nullopt;
    return arena().nodes()[current_].controller;
  }

  std::optional<Player> outcome() const {
    if (!finished()) return std::nullopt;
    return solved_->color(current_) == Color::Green ? Player::Verifier : Player::Falsifier;
  }

  bool roles_swapped() const { return arena().nodes()[current_].parity == 1; }

  void play(std::string_view label) {
    if (to_move() != human_)
      throw Error(ErrorCode::NotYourTurn,
                  finished() ? "the game is over" : "it is not the human player's turn");
    const auto& kids = arena().nodes()[current_].children;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (arena().move_label(kids[i]) == label) {
        step(i, "human");
        advance();
        return;
      }
    }
    throw Error(ErrorCode::IllegalMove, "illegal move '" + std::string(label) + "'");
  }

  nlohmann::json state() const {
    nlohmann::json j;
    auto mover = to_move();
    j["node"] = current_;
    j["to_move"] = mover ? nlohmann::json(std::string(to_string(*mover))) : nlohmann::json(nullptr);
    j["human_role"] = std::string(to_string(human_));
    j["roles_swapped"] = roles_swapped();
    j["residual_formula"] = render(arena().subformula(current_));
    nlohmann::json rho = nlohmann::json::object();
    for (const auto& [var, e] : arena().bindings(current_)) rho[var] = arena().structure().name_of(e);
    j["assignment"] = rho;
    j["legal_moves"] = nlohmann::json::array();
    for (const auto& mv : legal_moves(arena(), current_)) j["legal_moves"].push_back(mv.label);
    if (auto who = outcome()) j["outcome"] = std::string(to_string(*who)) + " wins";
    j["history"] = nlohmann::json::array();
    for (const auto& h : history_)
      j["history"].push_back({{"node", h.from}, {"label", h.label}, {"actor", h.actor}});
    return j;
  }

  // The solved arena for rendering, with the winner's strategy marked.
  nlohmann::json tree() const {
    const Arena& ar = arena();
    nlohmann::json nodes = nlohmann::json::array();
    nlohmann::json edges = nlohmann::json::array();
    for (NodeId id = 0; id < ar.size(); ++id) {
      const ArenaNode& n = ar.nodes()[id];
      nlohmann::json node{{"id", id},
                          {"label", ar.node_label(id)},
                          {"formula", render(ar.subformula(id))},
                          {"color", std::string(to_string(solved_->color(id)))},
                          {"parity", n.parity},
                          {"leaf", n.children.empty()}};
      node["parent"] = n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr);
      node["controller"] =
          n.controller ? nlohmann::json(std::string(to_string(*n.controller))) : nlohmann::json(nullptr);
      nodes.push_back(std::move(node));
      auto pick = n.controller == winner_strategy_.owner() ? winner_strategy_.choice(id) : std::nullopt;
      for (std::size_t i = 0; i < n.children.size(); ++i)
        edges.push_back({{"from", id},
                         {"to", n.children[i]},
                         {"label", ar.move_label(n.children[i])},
                         {"strategy", pick == i}});
    }
    return {{"nodes", std::move(nodes)},
            {"edges", std::move(edges)},
            {"strategy_owner", std::string(to_string(winner_strategy_.owner()))},
            {"winner", std::string(to_string(winner(*solved_)))},
            {"current", current_}};
  }

 private:
  void step(std::size_t child_index, const char* actor) {
    NodeId next = arena().nodes()[current_].children.at(child_index);
    history_.push_back({current_, arena().move_label(next), actor});
    current_ = next;
  }

  // Negations are entered automatically; the engine follows its strategy
  // even from lost positions.
  void advance() {
    while (!finished()) {
      const ArenaNode& n = arena().nodes()[current_];
      if (!n.controller) {
        step(0, "auto");
      } else if (*n.controller == engine()) {
        step(*engine_strategy_.choice(current_), "engine");
      } else {
        return;
      }
    }
  }

  std::string id_;
  std::shared_ptr<const SolvedArena> solved_;
  Player human_;
  Strategy engine_strategy_;
  Strategy winner_strategy_;
  NodeId current_ = Arena::root();
  std::vector<HistoryEntry> history_;
};

struct ServiceOptions {
  std::size_t max_sessions = 1000;
  std::chrono::seconds idle_timeout{30 * 60};
  ArenaOptions arena;
};

// Thread-safe session table. Each session is mutated under its own lock.
class GameService {
 public:
  explicit GameService(ServiceOptions options = {})
      : options_(options), rng_(std::random_device{}()) {}

  // Body: {structure, formula, human_role[, signature]}. `structure` may
  // carry its own signature declarations.
  nlohmann::json create(const nlohmann::json& body) {
    auto text = [&](const char* key) -> std::string {
      if (!body.is_object() || !body.contains(key) || !body[key].is_string())
        throw Error(ErrorCode::BadRequest, std::string("missing string field '") + key + "'");
      return body[key].get<std::string>();
    };
    std::string structure_text = text("structure");
    std::string formula_text = text("formula");
    auto role = parse_player(text("human_role"));
    if (!role) throw Error(ErrorCode::BadRequest, "human_role must be Verifier or Falsifier");
    Structure m = body.contains("signature")
                      ? parse_structure(structure_text, parse_signature(text("signature")))
                      : parse_model(structure_text);
    Formula phi = parse_formula(formula_text, m.signature());
    if (auto free = free_variables(phi); !free.empty())
      throw Error(ErrorCode::FreeVariable, "formula must be closed (free variable " + *free.begin() + ")");

    auto entry = std::make_shared<Entry>(GameSession(new_id(), m, phi, *role, options_.arena));
    std::lock_guard<std::mutex> lock(mutex_);
    evict_locked();
    std::string id = entry->session.id();
    entry->touched = Clock::now();
    sessions_.emplace(id, entry);
    std::lock_guard<std::mutex> session_lock(entry->mutex);
    return {{"session_id", id}, {"state", entry->session.state()}};
  }

  nlohmann::json state(const std::string& id) {
    auto entry = find(id);
    std::lock_guard<std::mutex> lock(entry->mutex);
    return entry->session.state();
  }

  nlohmann::json move(const std::string& id, const nlohmann::json& body) {
    if (!body.is_object() || !body.contains("label") || !body["label"].is_string())
      throw Error(ErrorCode::BadRequest, "missing string field 'label'");
    auto entry = find(id);
    std::lock_guard<std::mutex> lock(entry->mutex);
    entry->session.play(body["label"].get<std::string>());
    return entry->session.state();
  }

  nlohmann::json tree(const std::string& id) {
    auto entry = find(id);
    std::lock_guard<std::mutex> lock(entry->mutex);
    return entry->session.tree();
  }

  void remove(const std::string& id) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (sessions_.erase(id) == 0) throw Error(ErrorCode::SessionNotFound, "no session " + id);
  }

  std::size_t session_count() {
    std::lock_guard<std::mutex> lock(mutex_);
    return sessions_.size();
  }

 private:
  using Clock = std::chrono::steady_clock;

  struct Entry {
    explicit Entry(GameSession s) : session(std::move(s)) {}
    std::mutex mutex;
    GameSession session;
    Clock::time_point touched;
  };

  std::shared_ptr<Entry> find(const std::string& id) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::SessionNotFound, "no session " + id);
    it->second->touched = Clock::now();
    return it->second;
  }

  // Drops idle sessions, then the least recently used ones while full.
  void evict_locked() {
    auto now = Clock::now();
    for (auto it = sessions_.begin(); it != sessions_.end();)
      it = now - it->second->touched > options_.idle_timeout ? sessions_.erase(it) : std::next(it);
    while (!sessions_.empty() && sessions_.size() >= options_.max_sessions) {
      auto oldest = sessions_.begin();
      for (auto it = sessions_.begin(); it != sessions_.end(); ++it)
        if (it->second->touched < oldest->second->touched) oldest = it;
      sessions_.erase(oldest);
    }
  }

  std::string new_id() {
    std::lock_guard<std::mutex> lock(mutex_);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string id;
    do {
      id.clear();
      auto bits = rng_();
      for (int i = 0; i < 16; ++i, bits >>= 4) id += kHex[bits & 0xf];
    } while (sessions_.count(id));
    return id;
  }

  ServiceOptions options_;
  std::mutex mutex_;
  std::mt19937_64 rng_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace fog
