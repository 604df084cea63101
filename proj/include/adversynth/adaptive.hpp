#pragma once

// Repeated games between an agent with a theory of mind and the true
// adversary.  The agent plans on its hypothesis game (the scaffold masked
// by its own switching function) and resigns when that hypothesis says it
// is trapped; a learning agent feeds every adversary action into a string
// extension learner and switches the corresponding transition on.  Games
// restart from a fresh random initial state with all knowledge retained.

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adversynth/automata.hpp"
#include "adversynth/game.hpp"
#include "adversynth/inference.hpp"
#include "adversynth/rng.hpp"

namespace adversynth {

enum class AgentKind { Learning, FullKnowledge, NoLearning };
enum class AdversaryKind { OptimalDelay, UniformRandom, Withholding, Foresight };
enum class TieBreak { SymbolOrder, SeededRandom };

inline std::optional<AgentKind> parse_agent_kind(const std::string& s) {
  if (s == "learning") return AgentKind::Learning;
  if (s == "full-knowledge" || s == "full_knowledge") return AgentKind::FullKnowledge;
  if (s == "no-learning" || s == "no_learning") return AgentKind::NoLearning;
  return std::nullopt;
}
inline std::optional<AdversaryKind> parse_adversary_kind(const std::string& s) {
  if (s == "optimal") return AdversaryKind::OptimalDelay;
  if (s == "random") return AdversaryKind::UniformRandom;
  if (s == "withholding") return AdversaryKind::Withholding;
  if (s == "foresight") return AdversaryKind::Foresight;
  return std::nullopt;
}

// Restriction of a play to the adversary's symbols.
inline Word project_adversary(const GameAutomaton& g, const Word& play, bool include_epsilon) {
  Word out;
  for (SymbolId s : play) {
    if (s < g.p1_sym_count()) continue;
    if (!include_epsilon && g.epsilon() && s == *g.epsilon()) continue;
    out.push_back(s);
  }
  return out;
}

// The agent's policy: its kind, its hypothesis game (own switching-function
// overlay on the shared scaffold) and, when learning, the string extension
// learner fed with the adversary's moves.
class Agent {
 public:
  // The scaffold must use the learner convention: player-2 state i plays
  // symbol i, with the pass action as the last player-2 symbol.
  Agent(AgentKind kind, const GameAutomaton& true_game, const SwitchingFunction& sw_naive,
        std::uint32_t learner_k = 2)
      : kind_(kind), game_(true_game) {
    if (!true_game.epsilon() ||
        *true_game.epsilon() != true_game.lambda()->size() - 1 ||
        true_game.p2_names().size() + 1 != true_game.lambda()->size() - true_game.p1_sym_count())
      throw std::invalid_argument("agent: scaffold must carry the pass action last");
    for (std::size_t i = 0; i < true_game.p2_names().size(); ++i)
      if (true_game.p2_names()[i] != true_game.lambda()->name(true_game.p1_sym_count() + i))
        throw std::invalid_argument("agent: adversary states must mirror its symbols");

    switch (kind_) {
      case AgentKind::FullKnowledge:
        game_.set_sw(true_game.sw());
        break;
      case AgentKind::Learning:
      case AgentKind::NoLearning:
        game_.set_sw(sw_naive);
        break;
    }
    if (kind_ == AgentKind::Learning) {
      learner_ = LearnerState{SlGrammar(learner_k, make_alphabet(true_game.p2_names())), 0};
    }
  }

  AgentKind kind() const { return kind_; }
  const GameAutomaton& hypothesis() const { return game_; }
  const SwitchingFunction& sw() const { return game_.sw(); }
  const std::optional<LearnerState>& learner() const { return learner_; }
  std::uint64_t model_version() const { return version_; }

  const AttractorResult& attr() {
    if (dirty_) {
      attr_ = attractor(game_);
      dirty_ = false;
    }
    return attr_;
  }

  // A restart: the next game's adversary word begins with the closed pair
  // observed at initialization (a round played blindly).
  void start_game(StateId q2_initial) {
    if (kind_ != AgentKind::Learning) return;
    word_.clear();
    word_.push_back(static_cast<SymbolId>(q2_initial));
    learner_ = learner_update(*learner_, word_);
  }

  // Feeds one adversary action; returns true when the theory of mind
  // changed (a transition switched on).
  bool observe(StateId q2_before, SymbolId sym) {
    if (sym < game_.p1_sym_count() || sym >= game_.lambda()->size())
      throw std::invalid_argument("observe: symbol outside the adversary alphabet");
    if (kind_ != AgentKind::Learning) return false;
    SymbolId local = sym - game_.p1_sym_count();
    if (game_.epsilon() && sym == *game_.epsilon()) return false;  // the pass action carries no content

    if (!word_.empty() && word_.back() != static_cast<SymbolId>(q2_before))
      throw std::logic_error("observe: state does not continue the adversary word");
    word_.push_back(local);
    learner_ = learner_update(*learner_, word_);
    if (!game_.sw().enabled(q2_before, local)) {
      game_.set_sw(game_.sw().updated(q2_before, local));
      dirty_ = true;
      version_ += 1;
      return true;
    }
    return false;
  }

  // The rank-decreasing move set on the hypothesis; empty when the state is
  // hypothesis-trapped (resignation) or already won.
  std::vector<SymbolId> ws_moves(StateId q) {
    const AttractorResult& a = attr();
    std::vector<SymbolId> moves;
    if (!a.contains(q) || a.rank[q] == 0) return moves;
    game_.for_each_enabled(q, [&](const GameEdge& e) {
      if (a.rank[e.to] != kNoRank && a.rank[e.to] + 1 == a.rank[q]) moves.push_back(e.sym);
    });
    return moves;
  }

  // Either a move of the optimal strategy on the hypothesis, or resignation
  // when the hypothesis classifies the state as trapped (or no move is
  // available at all).
  std::optional<SymbolId> choose(StateId q, TieBreak tie, std::mt19937_64& rng) {
    std::vector<SymbolId> moves = ws_moves(q);
    if (moves.empty()) return std::nullopt;
    if (tie == TieBreak::SymbolOrder) return moves.front();
    return moves[pick_index(rng, moves.size())];
  }

 private:
  AgentKind kind_;
  GameAutomaton game_;  // hypothesis: shared structure, own switching function
  std::optional<LearnerState> learner_;
  Word word_;  // adversary word of the current game, in learner symbols
  bool dirty_ = true;
  std::uint64_t version_ = 0;
  AttractorResult attr_;
};

// An intelligent adversary with full knowledge of the agent's
// capabilities.  Against an agent whose move choice is a function of the
// game state (its current theory of mind is known and its tie-break
// deterministic), the adversary can compute exactly from which states the
// agent is bound to reach the finals, and steer away from them.
//
// win(q) is the least fixpoint of: finals win; a player-1 state wins when
// some move of the agent's current strategy set wins; a player-2 state wins
// when it has moves and all of them win.  Everything outside win() can be
// kept outside forever.
class ForesightAdversary {
 public:
  ForesightAdversary(const GameAutomaton& true_game, const AttractorResult& attr_true)
      : g_(true_game), attr_(attr_true) {}

  void refresh(Agent& agent, TieBreak agent_tie) {
    if (fresh_ && agent.model_version() == seen_version_ && agent_tie == seen_tie_) return;
    fresh_ = true;
    seen_version_ = agent.model_version();
    seen_tie_ = agent_tie;

    const std::size_t n = g_.state_count();
    std::vector<std::vector<SymbolId>> policy(n);
    std::vector<std::uint32_t> pending(n, 0);
    win_.assign(n, false);

    for (StateId q = 0; q < n; ++q) {
      if (g_.vertex(q).p1_turn) {
        policy[q] = agent.ws_moves(q);
        // A deterministic opponent is predictable move for move; an agent
        // with randomized tie-breaks has to be covered choice by choice.
        if (agent_tie == TieBreak::SymbolOrder && policy[q].size() > 1)
          policy[q].resize(1);
      } else {
        std::uint32_t cnt = 0;
        g_.for_each_enabled(q, [&](const GameEdge&) { ++cnt; });
        pending[q] = cnt;
      }
    }
    auto in_policy = [&](StateId q, SymbolId sym) {
      for (SymbolId m : policy[q])
        if (m == sym) return true;
      return false;
    };

    std::vector<StateId> queue;
    for (StateId q = 0; q < n; ++q)
      if (g_.is_final(q)) {
        win_[q] = true;
        queue.push_back(q);
      }
    const auto& edges = g_.all_edges();
    const auto& bwd_off = g_.bwd_off();
    const auto& bwd = g_.bwd_edges();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      StateId q = queue[head];
      for (std::size_t i = bwd_off[q]; i < bwd_off[q + 1]; ++i) {
        const GameEdge& e = edges[bwd[i]];
        StateId p = e.from;
        if (win_[p]) continue;
        if (g_.vertex(p).p1_turn) {
          if (in_policy(p, e.sym)) {
            win_[p] = true;
            queue.push_back(p);
          }
        } else {
          if (!g_.edge_enabled(e)) continue;
          if (--pending[p] == 0) {
            win_[p] = true;
            queue.push_back(p);
          }
        }
      }
    }
  }

  SymbolId move(StateId q, TieBreak tie, std::mt19937_64& rng) const {
    std::vector<GameEdge> enabled = g_.enabled_out(q);
    if (enabled.empty()) throw std::logic_error("foresight: no enabled action");
    std::vector<SymbolId> avoid;
    for (const GameEdge& e : enabled)
      if (!win_[e.to]) avoid.push_back(e.sym);
    std::vector<SymbolId> candidates;
    if (!avoid.empty()) {
      candidates = std::move(avoid);
    } else {
      // The agent wins whichever way; fall back to maximal delay.
      std::uint32_t best = 0;
      for (const GameEdge& e : enabled)
        if (attr_.contains(e.to)) best = std::max(best, attr_.rank[e.to]);
      for (const GameEdge& e : enabled)
        if (attr_.contains(e.to) && attr_.rank[e.to] == best) candidates.push_back(e.sym);
      if (candidates.empty())
        for (const GameEdge& e : enabled) candidates.push_back(e.sym);
    }
    if (tie == TieBreak::SymbolOrder) return candidates.front();
    return candidates[pick_index(rng, candidates.size())];
  }

  bool agent_bound_to_win(StateId q) const { return win_.at(q); }

 private:
  const GameAutomaton& g_;
  const AttractorResult& attr_;
  std::vector<bool> win_;
  bool fresh_ = false;
  std::uint64_t seen_version_ = 0;
  TieBreak seen_tie_ = TieBreak::SymbolOrder;
};

// One adversary move in the true game.  Optimal delay keeps the agent in
// the trap when possible and otherwise maximizes the successor rank;
// withholding prefers moves the agent has already seen.
inline SymbolId adversary_move(AdversaryKind kind, const GameAutomaton& true_game,
                               const AttractorResult& attr_true, StateId q,
                               const SwitchingFunction* agent_sw, TieBreak tie,
                               std::mt19937_64& rng) {
  std::vector<GameEdge> enabled = true_game.enabled_out(q);
  if (enabled.empty()) throw std::logic_error("adversary_move: no enabled action");
  if (kind == AdversaryKind::Foresight)
    throw std::invalid_argument("adversary_move: the foresight policy needs its cache");

  std::vector<SymbolId> candidates;
  switch (kind) {
    case AdversaryKind::OptimalDelay: {
      if (!attr_true.contains(q)) {
        for (const GameEdge& e : enabled)
          if (!attr_true.contains(e.to)) candidates.push_back(e.sym);
      } else {
        std::uint32_t best = 0;
        for (const GameEdge& e : enabled) best = std::max(best, attr_true.rank[e.to]);
        for (const GameEdge& e : enabled)
          if (attr_true.rank[e.to] == best) candidates.push_back(e.sym);
      }
      break;
    }
    case AdversaryKind::UniformRandom:
      for (const GameEdge& e : enabled) candidates.push_back(e.sym);
      break;
    case AdversaryKind::Withholding: {
      for (const GameEdge& e : enabled) {
        bool pass = true_game.epsilon() && e.sym == *true_game.epsilon();
        SymbolId local = e.sym - true_game.p1_sym_count();
        if (pass || (agent_sw && agent_sw->enabled(true_game.vertex(q).q2, local)))
          candidates.push_back(e.sym);
      }
      break;
    }
    case AdversaryKind::Foresight:
      break;  // handled above
  }
  if (candidates.empty())
    throw std::logic_error("adversary_move: trap-preserving move missing");
  if (tie == TieBreak::SymbolOrder) return candidates.front();
  return candidates[pick_index(rng, candidates.size())];
}

enum class Outcome { Win, Resign, TurnLimit };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Win: return "WIN";
    case Outcome::Resign: return "RESIGN";
    case Outcome::TurnLimit: return "TURN_LIMIT";
  }
  return "?";
}

struct TraceStep {
  bool agent_move = false;
  SymbolId sym = 0;
  StateId to = 0;
  bool model_changed = false;
};

struct GameTrace {
  StateId initial = 0;
  std::vector<TraceStep> steps;
  Outcome outcome = Outcome::TurnLimit;
};

struct GameRow {
  std::uint32_t game_id = 0;
  StateId initial = 0;
  Outcome outcome = Outcome::TurnLimit;
  std::uint32_t agent_turns = 0;
  std::uint32_t adversary_turns = 0;
  std::uint64_t cumulative_turns = 0;
  double discovery_ratio = 0.0;
};

struct Metrics {
  std::uint64_t turns_total = 0;
  std::uint32_t games_played = 0;
  std::uint32_t wins = 0;
  std::uint32_t resigns = 0;
  std::uint32_t turn_limits = 0;
  std::vector<GameRow> rows;
  std::vector<double> ratio_by_turn;           // discovery ratio after each turn
  std::optional<std::uint64_t> convergence_turn;  // first turn with ratio 1.0
};

struct SimConfig {
  AgentKind agent = AgentKind::Learning;
  AdversaryKind adversary = AdversaryKind::OptimalDelay;
  std::uint64_t seed = 0;
  std::uint32_t games = 300;
  std::uint64_t max_total_turns = 1000000;
  std::uint32_t max_game_turns = 100;  // per-game cap so trapped games end
  TieBreak agent_tie = TieBreak::SymbolOrder;
  TieBreak adversary_tie = TieBreak::SeededRandom;
  std::uint32_t learner_k = 2;
  bool keep_traces = false;
};

struct SimResult {
  Metrics metrics;
  std::vector<GameTrace> traces;
};

// The repeated-game loop.  Randomness is split per game: game i draws from
// substream(seed, i) regardless of the history, so runs with the same seed
// draw the same initial states for every agent kind.
inline SimResult run_repeated(const GameAutomaton& true_game, const SwitchingFunction& sw_naive,
                              const SimConfig& cfg) {
  SimResult out;
  AttractorResult attr_true = attractor(true_game);
  Agent agent(cfg.agent, true_game, sw_naive, cfg.learner_k);
  ForesightAdversary foresight(true_game, attr_true);

  const double true_on = static_cast<double>(true_game.sw().on_count());
  auto ratio = [&]() {
    if (true_on == 0) return 1.0;
    return static_cast<double>(agent.sw().on_count()) / true_on;
  };

  bool out_of_turns = false;
  for (std::uint32_t game = 0; game < cfg.games && !out_of_turns; ++game) {
    std::mt19937_64 rng = substream(cfg.seed, game);
    StateId q = true_game.initials()[pick_index(rng, true_game.initials().size())];

    GameTrace trace;
    trace.initial = q;
    agent.start_game(true_game.vertex(q).q2);

    GameRow row;
    row.game_id = game;
    row.initial = q;
    Outcome outcome = Outcome::TurnLimit;

    while (true) {
      if (out.metrics.turns_total >= cfg.max_total_turns) {
        outcome = Outcome::TurnLimit;
        out_of_turns = true;
        break;
      }
      if (row.agent_turns + row.adversary_turns >= cfg.max_game_turns) {
        outcome = Outcome::TurnLimit;
        break;
      }

      // Player 1's turn.
      auto move = agent.choose(q, cfg.agent_tie, rng);
      if (!move) {
        outcome = Outcome::Resign;
        break;
      }
      auto next = true_game.step(q, *move);
      if (!next) throw std::logic_error("run_repeated: hypothesis suggested an illegal move");
      q = *next;
      ++row.agent_turns;
      ++out.metrics.turns_total;
      out.metrics.ratio_by_turn.push_back(ratio());
      if (cfg.keep_traces) trace.steps.push_back({true, *move, q, false});
      if (true_game.is_final(q)) {
        outcome = Outcome::Win;
        break;
      }

      if (out.metrics.turns_total >= cfg.max_total_turns) {
        outcome = Outcome::TurnLimit;
        out_of_turns = true;
        break;
      }

      // Player 2's turn.
      StateId q2_before = true_game.vertex(q).q2;
      SymbolId reply;
      if (cfg.adversary == AdversaryKind::Foresight) {
        foresight.refresh(agent, cfg.agent_tie);
        reply = foresight.move(q, cfg.adversary_tie, rng);
      } else {
        const SwitchingFunction* agent_view =
            cfg.adversary == AdversaryKind::Withholding ? &agent.sw() : nullptr;
        reply = adversary_move(cfg.adversary, true_game, attr_true, q, agent_view,
                               cfg.adversary_tie, rng);
      }
      next = true_game.step(q, reply);
      if (!next) throw std::logic_error("run_repeated: adversary move not enabled");
      q = *next;
      bool changed = agent.observe(q2_before, reply);
      ++row.adversary_turns;
      ++out.metrics.turns_total;
      out.metrics.ratio_by_turn.push_back(ratio());
      if (cfg.keep_traces) trace.steps.push_back({false, reply, q, changed});
    }

    row.outcome = outcome;
    row.cumulative_turns = out.metrics.turns_total;
    row.discovery_ratio = ratio();
    out.metrics.rows.push_back(row);
    out.metrics.games_played += 1;
    switch (outcome) {
      case Outcome::Win: out.metrics.wins += 1; break;
      case Outcome::Resign: out.metrics.resigns += 1; break;
      case Outcome::TurnLimit: out.metrics.turn_limits += 1; break;
    }
    trace.outcome = outcome;
    if (cfg.keep_traces) out.traces.push_back(std::move(trace));
  }

  for (std::size_t t = 0; t < out.metrics.ratio_by_turn.size(); ++t)
    if (out.metrics.ratio_by_turn[t] >= 1.0) {
      out.metrics.convergence_turn = t + 1;
      break;
    }
  return out;
}

// Plays one game from a fixed initial state with deterministic tie-breaks;
// used to compare agents outcome for outcome.
inline Outcome play_single_game(Agent& agent, const GameAutomaton& true_game,
                                const AttractorResult& attr_true, AdversaryKind adversary,
                                StateId q0, std::uint32_t max_turns = 200) {
  std::mt19937_64 rng(0);
  ForesightAdversary foresight(true_game, attr_true);
  StateId q = q0;
  agent.start_game(true_game.vertex(q).q2);
  for (std::uint32_t turn = 0; turn < max_turns;) {
    auto move = agent.choose(q, TieBreak::SymbolOrder, rng);
    if (!move) return Outcome::Resign;
    q = *true_game.step(q, *move);
    ++turn;
    if (true_game.is_final(q)) return Outcome::Win;
    StateId q2_before = true_game.vertex(q).q2;
    SymbolId reply;
    if (adversary == AdversaryKind::Foresight) {
      foresight.refresh(agent, TieBreak::SymbolOrder);
      reply = foresight.move(q, TieBreak::SymbolOrder, rng);
    } else {
      reply = adversary_move(adversary, true_game, attr_true, q, &agent.sw(),
                             TieBreak::SymbolOrder, rng);
    }
    q = *true_game.step(q, reply);
    agent.observe(q2_before, reply);
    ++turn;
  }
  return Outcome::TurnLimit;
}

// CSV rendering of per-game rows (one run).
inline std::string metrics_csv(const Metrics& m, std::uint64_t seed,
                               const GameAutomaton& game) {
  std::ostringstream out;
  out << "game_id,seed,initial_state,outcome,agent_turns,adversary_turns,cumulative_turns,"
         "discovery_ratio\n";
  out.setf(std::ios::fixed);
  out.precision(6);
  for (const GameRow& r : m.rows)
    out << r.game_id << ',' << seed << ',' << '"' << game.state_name(r.initial) << '"' << ','
        << outcome_name(r.outcome) << ',' << r.agent_turns << ',' << r.adversary_turns << ','
        << r.cumulative_turns << ',' << r.discovery_ratio << '\n';
  return out.str();
}

}  // namespace adversynth
