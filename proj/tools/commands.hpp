#pragma once

// Subcommand implementations behind the adversynth and slinfer entry
// points.  Kept in a header so the test suite can drive the exact CLI code
// paths in process.  Exit codes: 0 success, 1 negative result, 2 usage or
// input error.  Output files are built in memory and written in one step,
// so a failing run leaves no partial artifacts.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adversynth/adaptive.hpp"
#include "adversynth/automata.hpp"
#include "adversynth/casestudy.hpp"
#include "adversynth/game.hpp"
#include "adversynth/inference.hpp"
#include "adversynth/io_json.hpp"
#include "adversynth/weaksim.hpp"

namespace adversynth::cli {

inline void emit(const std::optional<std::string>& path, const std::string& contents,
                 std::ostream& out) {
  if (path)
    write_file(*path, contents);
  else
    out << contents;
}

// Splits a word against an alphabet: single characters unless the alphabet
// needs segmentation.
inline Word parse_word(const Alphabet& sigma, const std::string& text) {
  Factor f = parse_factor(sigma, text);
  Word w;
  for (FactorSym s : f) {
    if (s == kLeftBound || s == kRightBound)
      throw std::invalid_argument("word '" + text + "': boundary markers are reserved");
    w.push_back(static_cast<SymbolId>(s));
  }
  return w;
}

inline std::string render_word(const Alphabet& sigma, const Word& w) {
  std::string out;
  for (SymbolId s : w) out += sigma.name(s);
  return out;
}

// --- solve -------------------------------------------------------------------

inline std::string solve_report(const GameAutomaton& g) {
  AttractorResult attr = attractor(g);
  std::size_t enabled_edges = 0;
  for (const GameEdge& e : g.all_edges()) enabled_edges += g.edge_enabled(e);
  std::size_t attr_size = 0;
  for (StateId q = 0; q < g.state_count(); ++q) attr_size += attr.contains(q);

  std::ostringstream out;
  out << "game: " << g.state_count() << " states, " << g.all_edges().size() << " transitions ("
      << enabled_edges << " enabled)\n";
  out << "attractor: " << attr_size << " states, max rank " << attr.max_rank << "\n";

  auto wins = winning_initials(g, attr);
  if (wins.empty()) {
    out << "no winning initial states (0/" << g.initials().size() << ")\n";
  } else {
    out << "winning initial states (" << wins.size() << "/" << g.initials().size() << "):\n";
    for (StateId q : wins) out << "  " << g.state_name(q) << "  rank=" << attr.rank[q] << "\n";
  }

  Strategy ws = optimal_strategy(g, attr);
  out << "strategy:\n";
  for (const auto& [q, moves] : ws.moves) {
    out << "  " << g.state_name(q) << ":";
    for (SymbolId s : moves) out << " " << g.lambda()->name(s);
    out << "\n";
  }
  return out.str();
}

inline int cmd_solve(const std::string& game_path, const std::optional<std::string>& dot_path,
                     std::ostream& out) {
  GameAutomaton g = game_from_json(parse_json_file(game_path));
  out << solve_report(g);
  if (dot_path) {
    AttractorResult attr = attractor(g);
    write_file(*dot_path, to_dot(g, &attr, std::filesystem::path(game_path).stem().string()));
  }
  return 0;
}

// --- casestudy ---------------------------------------------------------------

inline int cmd_casestudy(const std::string& regime_name, const std::string& emit_kind,
                         const std::optional<std::string>& out_path, std::ostream& out) {
  auto regime = parse_regime(regime_name);
  if (!regime) throw CLI::ValidationError("--regime", "unknown regime '" + regime_name + "'");
  Scenario sc = build_scenario(*regime);

  if (emit_kind == "game" || emit_kind == "game.json") {
    emit(out_path, dump_json(to_json(sc.true_game)), out);
    return 0;
  }
  if (emit_kind == "dot") {
    AttractorResult attr = attractor(sc.true_game);
    emit(out_path, to_dot(sc.true_game, &attr, regime_name), out);
    return 0;
  }
  if (emit_kind == "winning-set") {
    AttractorResult attr = attractor(sc.true_game);
    std::ostringstream text;
    for (StateId q : winning_initials(sc.true_game, attr))
      text << sc.true_game.state_name(q) << "\n";
    emit(out_path, text.str(), out);
    return 0;
  }
  throw CLI::ValidationError("--emit", "unknown artifact '" + emit_kind + "'");
}

// --- play --------------------------------------------------------------------

struct PlayOptions {
  std::string regime = "opposite";
  std::string agent = "learning";
  std::string adversary = "optimal";
  std::uint64_t seed = 0;
  std::uint32_t games = 300;
  std::uint64_t max_turns = 1000000;
  std::uint32_t max_game_turns = 100;
  std::string agent_tie = "symbol-order";
  std::string adversary_tie = "random";
  std::optional<std::string> out_csv;
  std::optional<std::string> trace_dir;
};

inline std::optional<TieBreak> parse_tie(const std::string& s) {
  if (s == "symbol-order") return TieBreak::SymbolOrder;
  if (s == "random") return TieBreak::SeededRandom;
  return std::nullopt;
}

inline Json trace_to_json(const GameAutomaton& g, const GameTrace& t) {
  Json doc;
  doc["initial"] = g.state_name(t.initial);
  doc["outcome"] = outcome_name(t.outcome);
  Json steps = Json::array();
  for (const TraceStep& s : t.steps) {
    Json step;
    step["mover"] = s.agent_move ? "agent" : "adversary";
    step["symbol"] = g.lambda()->name(s.sym);
    step["to"] = g.state_name(s.to);
    step["model_changed"] = s.model_changed;
    steps.push_back(std::move(step));
  }
  doc["steps"] = std::move(steps);
  return doc;
}

inline int cmd_play(const PlayOptions& opt, std::ostream& out) {
  auto regime = parse_regime(opt.regime);
  if (!regime) throw CLI::ValidationError("--regime", "unknown regime '" + opt.regime + "'");
  auto agent = parse_agent_kind(opt.agent);
  if (!agent) throw CLI::ValidationError("--agent", "unknown agent kind '" + opt.agent + "'");
  auto adversary = parse_adversary_kind(opt.adversary);
  if (!adversary)
    throw CLI::ValidationError("--adversary", "unknown adversary kind '" + opt.adversary + "'");
  auto agent_tie = parse_tie(opt.agent_tie);
  auto adversary_tie = parse_tie(opt.adversary_tie);
  if (!agent_tie || !adversary_tie)
    throw CLI::ValidationError("--tie", "tie-break must be symbol-order or random");

  Scenario sc = build_scenario(*regime);
  SimConfig cfg;
  cfg.agent = *agent;
  cfg.adversary = *adversary;
  cfg.seed = opt.seed;
  cfg.games = opt.games;
  cfg.max_total_turns = opt.max_turns;
  cfg.max_game_turns = opt.max_game_turns;
  cfg.agent_tie = *agent_tie;
  cfg.adversary_tie = *adversary_tie;
  cfg.keep_traces = opt.trace_dir.has_value();

  SimResult res = run_repeated(sc.true_game, sc.sw_naive, cfg);
  const Metrics& m = res.metrics;

  emit(opt.out_csv, metrics_csv(m, cfg.seed, sc.true_game), out);
  if (opt.trace_dir) {
    std::filesystem::create_directories(*opt.trace_dir);
    for (std::size_t i = 0; i < res.traces.size(); ++i) {
      std::ostringstream name;
      name << "game_" << std::setw(4) << std::setfill('0') << i << ".json";
      write_file((std::filesystem::path(*opt.trace_dir) / name.str()).string(),
                 dump_json(trace_to_json(sc.true_game, res.traces[i])));
    }
  }

  std::ostringstream summary;
  summary.setf(std::ios::fixed);
  summary.precision(6);
  summary << "games=" << m.games_played << " wins=" << m.wins << " resigns=" << m.resigns
          << " turn_limits=" << m.turn_limits << " turns=" << m.turns_total << " win_rate="
          << (m.games_played ? static_cast<double>(m.wins) / m.games_played : 0.0)
          << " discovery_ratio="
          << (m.ratio_by_turn.empty() ? 0.0 : m.ratio_by_turn.back());
  if (m.convergence_turn) summary << " convergence_turn=" << *m.convergence_turn;
  summary << "\n";
  out << summary.str();
  return 0;
}

// --- inference commands --------------------------------------------------------

inline int cmd_learn(std::uint32_t k, const std::string& corpus_path,
                     const std::optional<std::string>& alphabet_csv,
                     const std::optional<std::string>& out_path, std::ostream& out) {
  std::istringstream corpus(read_file(corpus_path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(corpus, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }

  AlphabetPtr sigma;
  if (alphabet_csv) {
    std::vector<std::string> names;
    std::istringstream in(*alphabet_csv);
    std::string tok;
    while (std::getline(in, tok, ','))
      if (!tok.empty()) names.push_back(tok);
    sigma = make_alphabet(names);
  } else {
    std::set<char> chars;
    for (const std::string& l : lines)
      if (l != "#")
        for (char c : l) chars.insert(c);
    std::vector<std::string> names;
    for (char c : chars) names.push_back(std::string(1, c));
    sigma = make_alphabet(names);
  }

  LearnerState st{SlGrammar(k, sigma), 0};
  for (const std::string& l : lines) {
    if (l == "#")
      st = learner_update(st, std::nullopt);
    else
      st = learner_update(st, parse_word(*sigma, l));
  }
  emit(out_path, dump_json(to_json(st.grammar)), out);
  return 0;
}

inline int cmd_member(const std::string& grammar_path, const std::string& word_text,
                      std::ostream& out) {
  SlGrammar g = grammar_from_json(parse_json_file(grammar_path));
  Word w = parse_word(*g.sigma, word_text);
  bool in = sl_membership(g, w);
  out << (in ? "yes" : "no") << "\n";
  return in ? 0 : 1;
}

inline int cmd_decide_sl(const std::string& machine_path,
                         const std::optional<std::string>& grammar_out, std::ostream& out) {
  Fsa fsa = automaton_from_json(parse_json_file(machine_path)).fsa();
  SlDecision d = is_strictly_local(fsa);
  if (d.k) {
    out << "SL, k = " << *d.k << " (bound " << d.bound << ")\n";
    if (grammar_out) write_file(*grammar_out, dump_json(to_json(*d.grammar)));
    return 0;
  }
  out << "not SL (bound " << d.bound << ")\n";
  return 1;
}

// --- weaksim -------------------------------------------------------------------

inline int cmd_weaksim(const std::string& left_path, const std::string& right_path,
                       const std::string& silent_csv, bool general, std::ostream& out) {
  Semiautomaton left = automaton_from_json(parse_json_file(left_path)).sa;
  Semiautomaton right = automaton_from_json(parse_json_file(right_path)).sa;
  if (*left.alphabet() != *right.alphabet())
    throw std::invalid_argument("weaksim: the two automata must declare the same alphabet");

  std::vector<std::string> silent_names;
  std::istringstream in(silent_csv);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) silent_names.push_back(tok);
  SilentSplit split = SilentSplit::from_names(*left.alphabet(), silent_names);
  CompositeMode mode = general ? CompositeMode::SilentClosure : CompositeMode::SingleSilentStep;

  auto rel = largest_weak_simulation(left, right, split, mode);
  if (!rel) {
    out << "none\n";
    return 1;
  }
  for (const auto& [q1, q2] : *rel)
    out << "(" << left.state_name(q1) << "," << right.state_name(q2) << ")\n";
  return 0;
}

// --- entry point ----------------------------------------------------------------

// `which` selects the surface: the full adversynth tool or the slinfer
// subset (learn/member/decide-sl only).
inline int run_cli(const std::string& which, std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  const bool full = which != "slinfer";
  CLI::App app{full ? "reachability-game synthesis against a learned adversary"
                    : "strictly local grammar inference"};
  app.name(which);
  app.require_subcommand(1);

  // solve
  std::string game_path;
  std::optional<std::string> dot_path;
  CLI::App* solve = nullptr;
  if (full) {
    solve = app.add_subcommand("solve", "solve a game file: winning initials, ranks, strategy");
    solve->add_option("--game", game_path, "game JSON document")->required();
    solve->add_option("--dot", dot_path, "write the attractor-annotated graph to this file");
  }

  // casestudy
  std::string regime = "opposite", emit_kind = "game";
  std::optional<std::string> cs_out;
  CLI::App* casestudy = nullptr;
  if (full) {
    casestudy = app.add_subcommand("casestudy", "emit the doors-and-rooms scenario");
    casestudy->add_option("--regime", regime, "opposite|adjacent|general");
    casestudy->add_option("--emit", emit_kind, "game|dot|winning-set");
    casestudy->add_option("-o,--out", cs_out, "output file (default stdout)");
  }

  // play
  PlayOptions play_opt;
  CLI::App* play = nullptr;
  if (full) {
    play = app.add_subcommand("play", "run repeated games and emit per-game CSV metrics");
    play->add_option("--regime", play_opt.regime, "opposite|adjacent|general");
    play->add_option("--agent", play_opt.agent, "learning|full-knowledge|no-learning");
    play->add_option("--adversary", play_opt.adversary, "optimal|random|withholding");
    play->add_option("--seed", play_opt.seed, "master seed")->envname("ADVERSYNTH_SEED");
    play->add_option("--games", play_opt.games, "number of games");
    play->add_option("--max-turns", play_opt.max_turns, "total turn budget");
    play->add_option("--max-game-turns", play_opt.max_game_turns, "per-game turn cap");
    play->add_option("--agent-tie", play_opt.agent_tie, "symbol-order|random");
    play->add_option("--adversary-tie", play_opt.adversary_tie, "symbol-order|random");
    play->add_option("--out", play_opt.out_csv, "CSV output file (default stdout)");
    play->add_option("--traces", play_opt.trace_dir, "directory for per-game JSON traces");
  }

  // weaksim
  std::string left_path, right_path, silent_csv;
  bool general_mode = false;
  CLI::App* weaksim = nullptr;
  if (full) {
    weaksim = app.add_subcommand("weaksim", "largest weak simulation between two automata");
    weaksim->add_option("--left", left_path, "left automaton JSON")->required();
    weaksim->add_option("--right", right_path, "right automaton JSON")->required();
    weaksim->add_option("--silent", silent_csv, "comma-separated silent labels");
    weaksim->add_flag("--general", general_mode, "silent-closure composite transitions");
  }

  // learn / member / decide-sl
  std::uint32_t k = 2;
  std::string corpus_path;
  std::optional<std::string> alphabet_csv, learn_out;
  CLI::App* learn = app.add_subcommand("learn", "learn an SL_k grammar from a corpus");
  learn->add_option("--k", k, "factor width")->required();
  learn->add_option("corpus", corpus_path, "corpus file, one word per line, '#' pauses")
      ->required();
  learn->add_option("--alphabet", alphabet_csv, "comma-separated symbols (default: corpus chars)");
  learn->add_option("-o,--out", learn_out, "grammar output file (default stdout)");

  std::string grammar_path, word_text;
  CLI::App* member = app.add_subcommand("member", "test a word against a grammar");
  member->add_option("--grammar", grammar_path, "grammar JSON")->required();
  member->add_option("word", word_text, "word to test")->required();

  std::string machine_path;
  std::optional<std::string> decide_grammar_out;
  CLI::App* decide = app.add_subcommand("decide-sl", "decide strict locality of an automaton");
  decide->add_option("machine", machine_path, "FSA JSON document")->required();
  decide->add_option("--grammar-out", decide_grammar_out, "write the witness grammar here");

  try {
    std::vector<const char*> argv;
    argv.push_back(which.c_str());
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (solve && solve->parsed()) return cmd_solve(game_path, dot_path, out);
    if (casestudy && casestudy->parsed()) return cmd_casestudy(regime, emit_kind, cs_out, out);
    if (play && play->parsed()) return cmd_play(play_opt, out);
    if (weaksim && weaksim->parsed())
      return cmd_weaksim(left_path, right_path, silent_csv, general_mode, out);
    if (learn->parsed()) return cmd_learn(k, corpus_path, alphabet_csv, learn_out, out);
    if (member->parsed()) return cmd_member(grammar_path, word_text, out);
    if (decide->parsed()) return cmd_decide_sl(machine_path, decide_grammar_out, out);
    err << which << ": no subcommand\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << which << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << which << ": " << e.what() << "\n";
    return 2;
  }
}

}  // namespace adversynth::cli
