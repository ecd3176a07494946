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

// The `fog` command line.
//
//   fog eval      -s M -f PHI         truth value and game winner
//   fog solve     -s M -f PHI         solved arena with the winner's strategy
//   fog prenex    -s M|--sig S -f PHI
//   fog skolemize -s M|--sig S (-f PHI | -t T) [-o PREFIX]
//   fog closure   -s M -t T [--seed a,b] [--mode prenex|general] [-o JSON]
//   fog lsdown    -s M -t T [--seed a,b] [--mode prenex|general] [-o JSON]
//   fog dot       -s M -f PHI [-o FILE]
//   fog serve     [--port N]
//
// Exit status: 0 success, 1 domain error, 2 usage or input error.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fog/arena.hpp"
#include "fog/error.hpp"
#include "fog/http.hpp"
#include "fog/lowenheim.hpp"
#include "fog/semantics.hpp"
#include "fog/service.hpp"
#include "fog/syntax.hpp"
#include "fog/transform.hpp"

namespace fog {

namespace cli {

struct Options {
  std::string structure_file;
  std::string signature_file;
  std::string formula;
  std::string theory_file;
  std::string seed;
  std::string mode = "general";
  std::string output;
  int port = 8080;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path);
  out << text;
}

inline Structure load_structure(const Options& o) {
  if (o.structure_file.empty()) throw Error(ErrorCode::BadRequest, "a structure file (-s) is required");
  std::string text = read_file(o.structure_file);
  if (!o.signature_file.empty()) return parse_structure(text, parse_signature(read_file(o.signature_file)));
  return parse_model(text);
}

inline Signature load_signature(const Options& o) {
  if (!o.signature_file.empty()) return parse_signature(read_file(o.signature_file));
  return load_structure(o).signature();
}

inline Formula load_formula(const Options& o, const Signature& sig) {
  if (o.formula.empty()) throw Error(ErrorCode::BadRequest, "a formula (-f) is required");
  return parse_formula(o.formula, sig);
}

inline Theory load_theory(const Options& o, const Signature& sig) {
  if (o.theory_file.empty()) throw Error(ErrorCode::BadRequest, "a theory file (-t) is required");
  return parse_theory(read_file(o.theory_file), sig);
}

inline Formula closed_game_formula(const Formula& phi) {
  if (auto free = free_variables(phi); !free.empty())
    throw Error(ErrorCode::FreeVariable, "formula must be closed (free variable " + *free.begin() + ")");
  return to_game_normal(phi);
}

inline ElementSet parse_seed(const std::string& text, const Structure& m) {
  ElementSet seed;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto name = detail::trim(item);
    if (!name.empty()) seed.insert(m.element(name));
  }
  return seed;
}

inline ClosureMode parse_mode(const std::string& mode) {
  if (mode == "prenex") return ClosureMode::Prenex;
  if (mode == "general") return ClosureMode::General;
  throw Error(ErrorCode::BadRequest, "--mode must be prenex or general");
}

inline int eval(const Options& o, std::ostream& out) {
  Structure m = load_structure(o);
  Formula phi = load_formula(o, m.signature());
  bool truth = tarski_eval(m, phi);
  SolvedArena sa = solve(build_arena(m, closed_game_formula(phi)));
  if ((winner(sa) == Player::Verifier) != truth)
    throw Error(ErrorCode::CertificateFailure, "game and Tarski semantics disagree");
  out << (truth ? "true" : "false") << "\n";
  out << "winner: " << to_string(winner(sa)) << "\n";
  return 0;
}

inline void print_tree(std::ostream& out, const SolvedArena& sa, const Strategy& s, NodeId id,
                       std::size_t indent) {
  const Arena& ar = sa.arena();
  const ArenaNode& n = ar.nodes()[id];
  out << std::string(indent * 2, ' ');
  if (n.parent) out << ar.move_label(id) << ": ";
  out << "[" << to_string(sa.color(id)) << "] " << ar.node_label(id);
  if (n.controller) {
    out << "   (" << to_string(*n.controller) << " moves";
    if (*n.controller == s.owner())
      if (auto pick = s.choice(id)) out << ", plays " << ar.move_label(n.children[*pick]);
    out << ")";
  }
  out << "\n";
  for (NodeId c : n.children) print_tree(out, sa, s, c, indent + 1);
}

inline int solve_cmd(const Options& o, std::ostream& out) {
  Structure m = load_structure(o);
  Formula phi = closed_game_formula(load_formula(o, m.signature()));
  SolvedArena sa = solve(build_arena(m, phi));
  Player who = winner(sa);
  Strategy s = extract_strategy(sa, who);
  out << "arena: " << sa.arena().size() << " nodes, height " << sa.arena().height() << "\n";
  print_tree(out, sa, s, Arena::root(), 0);
  out << "winner: " << to_string(who) << "\n";
  out << "strategy verified: " << (verify_strategy(sa.arena(), s) ? "yes" : "no") << "\n";
  return 0;
}

inline int prenex_cmd(const Options& o, std::ostream& out) {
  Signature sig = load_signature(o);
  PrenexFormula pf = prenexify(closed_game_formula(load_formula(o, sig)), sig);
  out << "prefix:";
  for (std::size_t i = 0; i < pf.prefix.size(); ++i)
    out << (i ? ", " : " ") << (pf.prefix[i].quantifier == Quantifier::Forall ? "forall " : "exists ")
        << pf.prefix[i].variable;
  out << "\nmatrix: " << render(pf.matrix) << "\n";
  out << "prenex: " << render(pf.to_formula()) << "\n";
  return 0;
}

inline int skolemize_cmd(const Options& o, std::ostream& out) {
  Signature sig = load_signature(o);
  SkolemizedTheory result;
  if (!o.formula.empty()) {
    PrenexFormula pf = prenexify(closed_game_formula(load_formula(o, sig)), sig);
    SkolemResult sk = skolemize(pf, sig, "phi");
    result = {sk.extended_signature, {sk.sigma.to_formula()}};
  } else {
    Theory t = load_theory(o, sig);
    for (const auto& phi : t) closed_game_formula(phi);
    result = skolemize_theory(t, sig);
  }
  std::string sig_text = render_signature(result.signature);
  std::string theory_text = render_theory(result.sigma);
  if (!o.output.empty()) {
    write_file(o.output + ".sig", sig_text);
    write_file(o.output + ".thy", theory_text);
    out << "wrote " << o.output << ".sig and " << o.output << ".thy\n";
  } else {
    out << "# signature\n" << sig_text << "# theory\n" << theory_text;
  }
  return 0;
}

inline int closure_cmd(const Options& o, std::ostream& out) {
  auto m = std::make_shared<const Structure>(load_structure(o));
  Theory t = load_theory(o, m->signature());
  ClosureMode mode = parse_mode(o.mode);
  ElementSet seed = parse_seed(o.seed, *m);
  auto games = winning_strategies(m, t, mode);
  ClosureReport report = closure(*m, games.witnesses, seed, mode);
  out << "mode: " << to_string(mode) << "\n" << stage_log(report, *m);
  out << "result: " << render_element_set(*m, report.result) << "\n";
  if (!o.output.empty()) write_file(o.output, summary_json(report, *m).dump(2) + "\n");
  return 0;
}

inline int lsdown_cmd(const Options& o, std::ostream& out) {
  Structure m = load_structure(o);
  Theory t = load_theory(o, m.signature());
  ClosureMode mode = parse_mode(o.mode);
  LsResult r = ls_down(m, t, parse_seed(o.seed, m), mode);
  out << "mode: " << to_string(mode) << "\n" << stage_log(r.report, m);
  out << "final domain: " << render_element_set(m, r.report.result) << "\n";
  std::size_t ok = 0;
  for (const auto& e : r.certificate.entries) ok += e.strategy_wins && e.tarski_holds;
  out << "certificate: " << (r.certificate.all_ok() ? "OK" : "FAILED") << " (" << ok << "/"
      << r.certificate.entries.size() << " formulas)\n";
  for (const auto& e : r.certificate.entries)
    out << "  " << render(e.formula) << ": strategy " << (e.strategy_wins ? "wins" : "loses")
        << ", tarski " << (e.tarski_holds ? "true" : "false") << "\n";
  out << "substructure:\n" << render_structure(r.substructure);
  if (!o.output.empty()) write_file(o.output, summary_json(r.report, m, &r.certificate).dump(2) + "\n");
  return 0;
}

inline int dot_cmd(const Options& o, std::ostream& out) {
  Structure m = load_structure(o);
  Formula phi = closed_game_formula(load_formula(o, m.signature()));
  SolvedArena sa = solve(build_arena(m, phi));
  Strategy s = extract_strategy(sa, winner(sa));
  std::string dot = export_dot(sa, &s);
  if (o.output.empty())
    out << dot;
  else
    write_file(o.output, dot);
  return 0;
}

inline int serve_cmd(const Options& o, std::ostream& out) {
  GameService service;
  httplib::Server server;
  mount_routes(server, service);
  out << "listening on http://0.0.0.0:" << o.port << std::endl;
  if (!server.listen("0.0.0.0", o.port)) throw Error(ErrorCode::BadRequest, "cannot listen on port " + std::to_string(o.port));
  return 0;
}

}  // namespace cli

// `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluation games, Skolemization and Loewenheim-Skolem closures over finite structures",
               "fog"};
  app.require_subcommand(1);
  cli::Options o;

  auto add_structure = [&](CLI::App* sub) {
    sub->add_option("-s,--structure", o.structure_file, "structure file (may declare its signature)");
    sub->add_option("--sig", o.signature_file, "separate signature file");
  };
  auto* eval = app.add_subcommand("eval", "decide M |= phi by the evaluation game and by Tarski semantics");
  auto* solve_sub = app.add_subcommand("solve", "print the solved arena and the winner's strategy");
  auto* prenex = app.add_subcommand("prenex", "prenex normal form");
  auto* skolem = app.add_subcommand("skolemize", "Skolem normal form of a formula or theory");
  auto* closure_sub = app.add_subcommand("closure", "strategy closure of a seed set");
  auto* lsdown = app.add_subcommand("lsdown", "certified substructure model of a theory");
  auto* dot = app.add_subcommand("dot", "Graphviz rendering of the solved arena");
  auto* serve = app.add_subcommand("serve", "HTTP service for interactive games");
  for (auto* sub : {eval, solve_sub, prenex, skolem, closure_sub, lsdown, dot}) add_structure(sub);
  for (auto* sub : {eval, solve_sub, prenex, skolem, dot})
    sub->add_option("-f,--formula", o.formula, "formula");
  for (auto* sub : {skolem, closure_sub, lsdown})
    sub->add_option("-t,--theory", o.theory_file, "theory file, one formula per line");
  for (auto* sub : {closure_sub, lsdown}) {
    sub->add_option("--seed", o.seed, "comma-separated seed elements");
    sub->add_option("--mode", o.mode, "prenex or general")->check(CLI::IsMember({"prenex", "general"}));
  }
  for (auto* sub : {skolem, closure_sub, lsdown, dot}) sub->add_option("-o,--output", o.output, "output file");
  serve->add_option("--port", o.port, "port to listen on");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (eval->parsed()) return cli::eval(o, out);
    if (solve_sub->parsed()) return cli::solve_cmd(o, out);
    if (prenex->parsed()) return cli::prenex_cmd(o, out);
    if (skolem->parsed()) return cli::skolemize_cmd(o, out);
    if (closure_sub->parsed()) return cli::closure_cmd(o, out);
    if (lsdown->parsed()) return cli::lsdown_cmd(o, out);
    if (dot->parsed()) return cli::dot_cmd(o, out);
    if (serve->parsed()) return cli::serve_cmd(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_input_error() ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace fog
