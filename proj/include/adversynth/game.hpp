#pragma once

// Two-player turn-based reachability games on automata.
//
// The turn-based product interleaves two semiautomata under interaction
// constraints (each player can forbid moves of the other, depending on the
// current state pair).  Multiplying with a specification FSA yields the game
// automaton; player 1 wins a play iff it reaches a final state.  The solver
// computes the attractor of the final set by the backward counting
// algorithm, which runs in time linear in states plus transitions.
//
// A switching function overlays the game: every player-2 transition carries
// an on/off bit keyed by (adversary state, symbol).  The game graph is
// materialized once over the full scaffold; masking bits on or off never
// requires recomputing any product.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adversynth/automata.hpp"
#include "adversynth/rng.hpp"

namespace adversynth {

inline constexpr std::uint32_t kNoRank = static_cast<std::uint32_t>(-1);

// One player's side of the game: a semiautomaton, its legitimate initial
// states, and optionally a silent pass action (required to self-loop at
// every state).
struct PlayerSpec {
  Semiautomaton sa;
  std::vector<StateId> initials;
  std::optional<SymbolId> epsilon;

  PlayerSpec() = default;
  PlayerSpec(Semiautomaton s, std::vector<StateId> init, std::optional<SymbolId> eps = std::nullopt)
      : sa(std::move(s)), initials(std::move(init)), epsilon(eps) {
    std::sort(initials.begin(), initials.end());
    initials.erase(std::unique(initials.begin(), initials.end()), initials.end());
    for (StateId q : initials) (void)sa.state_name(q);
    if (epsilon) {
      for (StateId q = 0; q < sa.state_count(); ++q) {
        auto t = sa.target(q, *epsilon);
        if (!t || *t != q)
          throw std::invalid_argument("player: pass action must self-loop at every state");
      }
    }
  }
};

// U_i(q_i, q_j): the other player's actions forbidden at q_j, as a
// membership predicate over the other player's local symbol ids.
struct InteractionFn {
  std::function<bool(StateId own, StateId other, SymbolId other_sym)> forbids;

  static InteractionFn none() {
    return InteractionFn{[](StateId, StateId, SymbolId) { return false; }};
  }
  bool operator()(StateId own, StateId other, SymbolId other_sym) const {
    return forbids && forbids(own, other, other_sym);
  }
};

// On/off mask over player-2 transitions, keyed by (adversary state, local
// symbol).  The pass action is always on; updates are monotone 0 -> 1.
class SwitchingFunction {
 public:
  SwitchingFunction() = default;
  SwitchingFunction(std::uint32_t q2_count, std::uint32_t p2_sym_count,
                    std::optional<SymbolId> eps_local, bool initially_on)
      : q2_count_(q2_count),
        sym_count_(p2_sym_count),
        eps_local_(eps_local),
        on_(static_cast<std::size_t>(q2_count) * p2_sym_count, initially_on ? 1 : 0) {
    if (!initially_on && eps_local_)
      for (std::uint32_t q = 0; q < q2_count_; ++q) on_[index(q, *eps_local_)] = 1;
  }

  bool enabled(StateId q2, SymbolId local_sym) const { return on_[index(q2, local_sym)] != 0; }

  SwitchingFunction updated(StateId q2, SymbolId local_sym) const {
    SwitchingFunction next = *this;
    next.on_[index(q2, local_sym)] = 1;
    return next;
  }

  // Enabled (q2, sym) pairs, excluding the pass action.
  std::size_t on_count() const {
    std::size_t n = 0;
    for (std::uint32_t q = 0; q < q2_count_; ++q)
      for (std::uint32_t s = 0; s < sym_count_; ++s)
        if (!(eps_local_ && s == *eps_local_) && on_[index(q, s)]) ++n;
    return n;
  }

  std::uint32_t q2_count() const { return q2_count_; }
  std::uint32_t sym_count() const { return sym_count_; }
  std::optional<SymbolId> eps_local() const { return eps_local_; }

  bool operator==(const SwitchingFunction& o) const {
    return q2_count_ == o.q2_count_ && sym_count_ == o.sym_count_ && on_ == o.on_;
  }

 private:
  std::size_t index(StateId q2, SymbolId s) const {
    if (q2 >= q2_count_ || s >= sym_count_)
      throw std::invalid_argument("switching function: index out of range");
    return static_cast<std::size_t>(q2) * sym_count_ + s;
  }

  std::uint32_t q2_count_ = 0;
  std::uint32_t sym_count_ = 0;
  std::optional<SymbolId> eps_local_;
  std::vector<std::uint8_t> on_;
};

// A game state: player states, whose turn it is, and the specification
// state (absent in the bare product).
struct GameVertex {
  StateId q1 = 0;
  StateId q2 = 0;
  bool p1_turn = true;
  StateId qs = kNoState;
};

struct GameEdge {
  StateId from;
  SymbolId sym;  // id in the joint alphabet
  StateId to;
};

// Turn-based product of two players.  States are (q1, q2, turn) triples
// over the joint alphabet; a move flips the turn.
struct TurnProduct {
  AlphabetPtr lambda;
  std::uint32_t p1_sym_count = 0;
  std::optional<SymbolId> epsilon;  // joint id
  PlayerSpec p1, p2;
  std::vector<GameVertex> states;  // qs unset
  std::vector<GameEdge> edges;     // sorted by (from, sym)
  std::vector<StateId> legit_initials;

  StateId index_of(StateId q1, StateId q2, bool p1_turn) const {
    return static_cast<StateId>((q1 * p2.sa.state_count() + q2) * 2 + (p1_turn ? 1 : 0));
  }
  std::string state_name(StateId q) const {
    const GameVertex& v = states.at(q);
    return "(" + p1.sa.state_name(v.q1) + "," + p2.sa.state_name(v.q2) + "," +
           (v.p1_turn ? "1" : "0") + ")";
  }
};

inline TurnProduct turn_based_product(PlayerSpec p1, PlayerSpec p2, const InteractionFn& u1,
                                      const InteractionFn& u2) {
  for (const std::string& name : p1.sa.alphabet()->names())
    if (p2.sa.alphabet()->find(name))
      throw std::invalid_argument("turn-based product: alphabets must be disjoint ('" + name + "')");

  TurnProduct p;
  std::vector<std::string> names = p1.sa.alphabet()->names();
  const std::uint32_t n1 = static_cast<std::uint32_t>(names.size());
  for (const std::string& n : p2.sa.alphabet()->names()) names.push_back(n);
  p.lambda = make_alphabet(std::move(names));
  p.p1_sym_count = n1;
  if (p2.epsilon) p.epsilon = *p2.epsilon + n1;
  if (p1.epsilon) throw std::invalid_argument("turn-based product: player 1 cannot pass");
  p.p1 = std::move(p1);
  p.p2 = std::move(p2);

  const std::size_t nq1 = p.p1.sa.state_count();
  const std::size_t nq2 = p.p2.sa.state_count();
  p.states.resize(nq1 * nq2 * 2);
  for (StateId q1 = 0; q1 < nq1; ++q1)
    for (StateId q2 = 0; q2 < nq2; ++q2)
      for (int turn = 0; turn < 2; ++turn) {
        GameVertex v;
        v.q1 = q1;
        v.q2 = q2;
        v.p1_turn = (turn == 1);
        p.states[p.index_of(q1, q2, v.p1_turn)] = v;
      }

  for (StateId q = 0; q < p.states.size(); ++q) {
    const GameVertex& v = p.states[q];
    if (v.p1_turn) {
      for (SymbolId s = 0; s < p.p1.sa.alphabet()->size(); ++s) {
        auto t = p.p1.sa.target(v.q1, s);
        if (!t) continue;
        if (u2(v.q2, v.q1, s)) continue;
        p.edges.push_back({q, s, p.index_of(*t, v.q2, false)});
      }
    } else {
      for (SymbolId s = 0; s < p.p2.sa.alphabet()->size(); ++s) {
        auto t = p.p2.sa.target(v.q2, s);
        if (!t) continue;
        bool is_eps = p.p2.epsilon && s == *p.p2.epsilon;
        if (!is_eps && u1(v.q1, v.q2, s)) continue;  // the pass action is never forbidden
        p.edges.push_back({q, s + n1, p.index_of(v.q1, *t, true)});
      }
    }
  }

  for (StateId q1 : p.p1.initials)
    for (StateId q2 : p.p2.initials) p.legit_initials.push_back(p.index_of(q1, q2, true));
  std::sort(p.legit_initials.begin(), p.legit_initials.end());
  return p;
}

// The game automaton: product states extended with a specification state.
// Finals are the player-2-turn states whose specification component is
// accepting.  Edges are stored in CSR form, forward and backward, with the
// switching function consulted at query time.
class GameAutomaton {
 public:
  GameAutomaton() = default;

  // Assembled parts; used by the product construction, the JSON loader and
  // the random generators.  Validates turn alternation, label sides and
  // per-state determinism.
  static GameAutomaton from_parts(AlphabetPtr lambda, std::uint32_t p1_sym_count,
                                  std::optional<SymbolId> epsilon,
                                  std::vector<std::string> p1_names,
                                  std::vector<std::string> p2_names,
                                  std::vector<std::string> spec_names,
                                  std::vector<GameVertex> states, std::vector<GameEdge> edges,
                                  std::vector<StateId> initials, std::vector<StateId> finals,
                                  SwitchingFunction sw) {
    GameAutomaton g;
    g.lambda_ = std::move(lambda);
    g.p1_sym_count_ = p1_sym_count;
    g.epsilon_ = epsilon;
    g.p1_names_ = std::move(p1_names);
    g.p2_names_ = std::move(p2_names);
    g.spec_names_ = std::move(spec_names);
    g.states_ = std::move(states);
    g.initials_ = std::move(initials);
    g.sw_ = std::move(sw);
    std::sort(g.initials_.begin(), g.initials_.end());
    g.final_.assign(g.states_.size(), false);
    for (StateId q : finals) g.final_.at(q) = true;

    if (g.sw_.q2_count() != g.p2_names_.size() ||
        g.sw_.sym_count() != g.lambda_->size() - g.p1_sym_count_)
      throw std::invalid_argument("game: switching function shape mismatch");

    std::set<std::pair<StateId, SymbolId>> seen;
    for (const GameEdge& e : edges) {
      const GameVertex& from = g.states_.at(e.from);
      const GameVertex& to = g.states_.at(e.to);
      bool p1_label = e.sym < g.p1_sym_count_;
      if (e.sym >= g.lambda_->size()) throw std::invalid_argument("game: bad edge label");
      if (from.p1_turn != p1_label || to.p1_turn == from.p1_turn)
        throw std::invalid_argument("game: edge violates turn alternation");
      if (!seen.insert({e.from, e.sym}).second)
        throw std::invalid_argument("game: nondeterministic edge");
    }
    std::sort(edges.begin(), edges.end(), [](const GameEdge& a, const GameEdge& b) {
      if (a.from != b.from) return a.from < b.from;
      return a.sym < b.sym;
    });
    g.edges_ = std::move(edges);
    g.build_csr();
    g.refresh_solve_cache();
    return g;
  }

  std::size_t state_count() const { return states_.size(); }
  const GameVertex& vertex(StateId q) const { return states_.at(q); }
  const AlphabetPtr& lambda() const { return lambda_; }
  std::uint32_t p1_sym_count() const { return p1_sym_count_; }
  std::optional<SymbolId> epsilon() const { return epsilon_; }
  const std::vector<StateId>& initials() const { return initials_; }
  bool is_final(StateId q) const { return final_.at(q); }
  const std::vector<std::string>& p1_names() const { return p1_names_; }
  const std::vector<std::string>& p2_names() const { return p2_names_; }
  const std::vector<std::string>& spec_names() const { return spec_names_; }
  const std::vector<GameEdge>& all_edges() const { return edges_; }
  const SwitchingFunction& sw() const { return sw_; }

  void set_sw(SwitchingFunction sw) {
    if (sw.q2_count() != sw_.q2_count() || sw.sym_count() != sw_.sym_count())
      throw std::invalid_argument("game: switching function shape mismatch");
    sw_ = std::move(sw);
    refresh_solve_cache();
  }

  bool edge_enabled(const GameEdge& e) const {
    if (e.sym < p1_sym_count_) return true;
    return sw_.enabled(states_[e.from].q2, e.sym - p1_sym_count_);
  }

  // Enabled out-edges of q under the current switching function, in symbol
  // order.
  template <typename Fn>
  void for_each_enabled(StateId q, Fn&& fn) const {
    for (std::size_t i = fwd_off_[q]; i < fwd_off_[q + 1]; ++i)
      if (edge_enabled(edges_[i])) fn(edges_[i]);
  }

  std::vector<GameEdge> enabled_out(StateId q) const {
    std::vector<GameEdge> out;
    for_each_enabled(q, [&](const GameEdge& e) { out.push_back(e); });
    return out;
  }

  std::optional<StateId> step(StateId q, SymbolId sym) const {
    std::optional<StateId> to;
    for_each_enabled(q, [&](const GameEdge& e) {
      if (e.sym == sym) to = e.to;
    });
    return to;
  }

  std::string state_name(StateId q) const {
    const GameVertex& v = states_.at(q);
    std::string out = "(" + p1_names_.at(v.q1) + "," + p2_names_.at(v.q2) + "," +
                      (v.p1_turn ? "1" : "0");
    if (v.qs != kNoState) out += "," + spec_names_.at(v.qs);
    return out + ")";
  }

  std::optional<StateId> find_state(StateId q1, StateId q2, bool turn, StateId qs) const {
    for (StateId q = 0; q < states_.size(); ++q) {
      const GameVertex& v = states_[q];
      if (v.q1 == q1 && v.q2 == q2 && v.p1_turn == turn && v.qs == qs) return q;
    }
    return std::nullopt;
  }

  const std::vector<std::size_t>& fwd_off() const { return fwd_off_; }
  const std::vector<std::size_t>& bwd_off() const { return bwd_off_; }
  const std::vector<std::uint32_t>& bwd_edges() const { return bwd_edge_; }
  const std::vector<StateId>& bwd_froms() const { return bwd_from_; }

  static constexpr std::uint32_t kAlwaysOn = static_cast<std::uint32_t>(-1);
  const std::vector<std::uint8_t>& turn_tags() const { return turn1_; }

  // Solve-time views derived from the switching function, rebuilt whenever
  // it changes; solving itself is a pure read.  Backward predecessors are
  // packed as (from | kEnabledBit) so the solver streams one word per edge.
  static constexpr std::uint32_t kEnabledBit = 0x80000000u;
  const std::vector<std::uint32_t>& bwd_packed() const { return bwd_packed_; }
  const std::vector<std::uint32_t>& bwd_off32() const { return bwd_off32_; }
  const std::vector<std::uint32_t>& p2_enabled_counts() const { return pending0_; }

 private:
  void build_csr() {
    const std::size_t n = states_.size();
    fwd_off_.assign(n + 1, 0);
    for (const GameEdge& e : edges_) ++fwd_off_[e.from + 1];
    for (std::size_t i = 0; i < n; ++i) fwd_off_[i + 1] += fwd_off_[i];

    bwd_off_.assign(n + 1, 0);
    for (const GameEdge& e : edges_) ++bwd_off_[e.to + 1];
    for (std::size_t i = 0; i < n; ++i) bwd_off_[i + 1] += bwd_off_[i];
    bwd_edge_.assign(edges_.size(), 0);
    bwd_from_.assign(edges_.size(), 0);
    std::vector<std::size_t> cursor(bwd_off_.begin(), bwd_off_.end() - 1);
    for (std::uint32_t i = 0; i < edges_.size(); ++i) {
      std::size_t slot = cursor[edges_[i].to]++;
      bwd_edge_[slot] = i;
      bwd_from_[slot] = edges_[i].from;
    }

    // Flattened switching-function keys per edge (kAlwaysOn for player-1
    // labels), in forward and backward order, so the solver can stream them
    // without touching the edge records.
    const std::uint32_t symc = static_cast<std::uint32_t>(lambda_->size() - p1_sym_count_);
    auto sw_key = [&](const GameEdge& e) -> std::uint32_t {
      if (e.sym < p1_sym_count_) return kAlwaysOn;
      return states_[e.from].q2 * symc + (e.sym - p1_sym_count_);
    };
    fwd_sw_key_.resize(edges_.size());
    bwd_sw_key_.resize(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      fwd_sw_key_[i] = sw_key(edges_[i]);
      bwd_sw_key_[i] = sw_key(edges_[bwd_edge_[i]]);
    }
    turn1_.resize(n);
    for (StateId q = 0; q < n; ++q) turn1_[q] = states_[q].p1_turn;
    bwd_off32_.assign(bwd_off_.begin(), bwd_off_.end());
  }

  AlphabetPtr lambda_;
  std::uint32_t p1_sym_count_ = 0;
  std::optional<SymbolId> epsilon_;
  std::vector<std::string> p1_names_, p2_names_, spec_names_;
  std::vector<GameVertex> states_;
  void refresh_solve_cache() {
    const std::uint32_t symc = static_cast<std::uint32_t>(lambda_->size() - p1_sym_count_);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(sw_.q2_count()) * symc, 1);
    for (StateId q2 = 0; q2 < sw_.q2_count(); ++q2)
      for (SymbolId s = 0; s < symc; ++s)
        bits[static_cast<std::size_t>(q2) * symc + s] = sw_.enabled(q2, s);
    bwd_packed_.resize(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      bool on = (bwd_sw_key_[i] == kAlwaysOn) ? true : bits[bwd_sw_key_[i]] != 0;
      bwd_packed_[i] = bwd_from_[i] | (on ? kEnabledBit : 0);
    }
    pending0_.assign(states_.size(), 0);
    for (StateId q = 0; q < states_.size(); ++q) {
      if (turn1_[q]) continue;
      std::uint32_t cnt = 0;
      for (std::size_t i = fwd_off_[q]; i < fwd_off_[q + 1]; ++i)
        cnt += (fwd_sw_key_[i] == kAlwaysOn) ? 1 : bits[fwd_sw_key_[i]];
      pending0_[q] = cnt;
    }
  }

  std::vector<GameEdge> edges_;  // sorted by (from, sym)
  std::vector<std::size_t> fwd_off_, bwd_off_;
  std::vector<std::uint32_t> bwd_edge_;
  std::vector<StateId> bwd_from_;
  std::vector<std::uint32_t> fwd_sw_key_, bwd_sw_key_;
  std::vector<std::uint8_t> turn1_;
  std::vector<std::uint32_t> bwd_packed_;
  std::vector<std::uint32_t> bwd_off32_;
  std::vector<std::uint32_t> pending0_;
  std::vector<StateId> initials_;
  std::vector<bool> final_;
  SwitchingFunction sw_;
};

// Builds the game automaton as the synchronous product of the turn-based
// product with the specification FSA.  init_link assigns a specification
// initial state to every legitimate product initial.
inline GameAutomaton game_automaton(
    const TurnProduct& p, const Fsa& spec,
    const std::function<std::optional<StateId>(const GameVertex&)>& init_link,
    SwitchingFunction sw) {
  if (*spec.sa.alphabet() != *p.lambda)
    throw std::invalid_argument("game: specification alphabet must equal the joint alphabet");

  const std::size_t nspec = spec.sa.state_count();
  std::vector<GameVertex> states(p.states.size() * nspec);
  auto idx = [&](StateId prod, StateId qs) {
    return static_cast<StateId>(prod * nspec + qs);
  };
  for (StateId pi = 0; pi < p.states.size(); ++pi)
    for (StateId qs = 0; qs < nspec; ++qs) {
      GameVertex v = p.states[pi];
      v.qs = qs;
      states[idx(pi, qs)] = v;
    }

  std::vector<GameEdge> edges;
  for (const GameEdge& e : p.edges)
    for (StateId qs = 0; qs < nspec; ++qs)
      if (auto t = spec.sa.target(qs, e.sym))
        edges.push_back({idx(e.from, qs), e.sym, idx(e.to, *t)});

  std::vector<StateId> initials;
  for (StateId pi : p.legit_initials) {
    auto qs = init_link(p.states[pi]);
    if (!qs) throw std::invalid_argument("game: init_link undefined for a legitimate initial");
    if (!spec.is_initial(*qs))
      throw std::invalid_argument("game: init_link must map to a specification initial state");
    initials.push_back(idx(pi, *qs));
  }

  std::vector<StateId> finals;
  for (StateId pi = 0; pi < p.states.size(); ++pi) {
    if (p.states[pi].p1_turn) continue;
    for (StateId qs : spec.final_states) finals.push_back(idx(pi, qs));
  }

  std::vector<std::string> p1n = p.p1.sa.state_names();
  std::vector<std::string> p2n = p.p2.sa.state_names();
  std::vector<std::string> sn = spec.sa.state_names();
  std::optional<SymbolId> eps_local;
  if (p.epsilon) eps_local = *p.epsilon - p.p1_sym_count;
  if (sw.q2_count() == 0)
    sw = SwitchingFunction(static_cast<std::uint32_t>(p2n.size()),
                           static_cast<std::uint32_t>(p.lambda->size() - p.p1_sym_count),
                           eps_local, true);
  return GameAutomaton::from_parts(p.lambda, p.p1_sym_count, p.epsilon, std::move(p1n),
                                   std::move(p2n), std::move(sn), std::move(states),
                                   std::move(edges), std::move(initials), std::move(finals),
                                   std::move(sw));
}

// Attractor of the final set with the rank function.  rank(q) is the index
// of the first backward layer containing q; kNoRank marks the trap.
struct AttractorResult {
  std::vector<std::uint32_t> rank;
  std::uint32_t max_rank = 0;

  bool contains(StateId q) const { return rank.at(q) != kNoRank; }

  std::vector<std::vector<StateId>> layers() const {
    std::vector<std::vector<StateId>> out(max_rank + 1);
    for (StateId q = 0; q < rank.size(); ++q)
      if (rank[q] != kNoRank) out[rank[q]].push_back(q);
    return out;
  }
};

// Backward counting: every player-2 state carries a counter of enabled
// out-edges not yet known to lead into the attractor; it joins when the
// counter reaches zero.  A player-1 state joins on its first attracted
// successor.  Runs in O(states + transitions).
inline AttractorResult attractor(const GameAutomaton& g) {
  const std::size_t n = g.state_count();
  const std::size_t m = g.all_edges().size();
  AttractorResult res;
  res.rank.assign(n, kNoRank);

  // The switching-dependent edge words and counters were precompiled when
  // the mask was installed; solving only streams over them.  Per state the
  // solver keeps rank and the pending counter side by side, so a visit
  // costs one cache line.
  (void)m;
  const auto& turn1 = g.turn_tags();
  const auto& bwd_off = g.bwd_off32();
  const auto& bwd = g.bwd_packed();
  const auto& pending0 = g.p2_enabled_counts();

  struct Cell {
    std::uint32_t rank;
    std::uint32_t pending;
  };
  std::vector<Cell> cell(n);
  for (StateId q = 0; q < n; ++q) cell[q] = {kNoRank, pending0[q]};

  std::vector<StateId> queue;
  queue.reserve(n);
  for (StateId q = 0; q < n; ++q)
    if (g.is_final(q)) {
      cell[q].rank = 0;
      queue.push_back(q);
    }
  // Player-2 states with no enabled move at all satisfy the universal
  // condition vacuously and join the first layer.
  for (StateId q = 0; q < n; ++q)
    if (!turn1[q] && cell[q].pending == 0 && cell[q].rank == kNoRank) {
      cell[q].rank = 1;
      queue.push_back(q);
    }

  for (std::size_t head = 0; head < queue.size(); ++head) {
    StateId q = queue[head];
    std::uint32_t next_rank = cell[q].rank + 1;
    res.max_rank = std::max(res.max_rank, cell[q].rank);
    const std::uint32_t end = bwd_off[q + 1];
    for (std::uint32_t i = bwd_off[q]; i < end; ++i) {
      if (i + 8 < end)  // predecessor cells are scattered; fetch ahead
        __builtin_prefetch(&cell[bwd[i + 8] & ~GameAutomaton::kEnabledBit]);
      std::uint32_t packed = bwd[i];
      if (!(packed & GameAutomaton::kEnabledBit)) continue;
      StateId p = packed & ~GameAutomaton::kEnabledBit;
      Cell& c = cell[p];
      if (c.rank != kNoRank) continue;
      if (turn1[p]) {
        c.rank = next_rank;
        queue.push_back(p);
      } else {
        if (--c.pending == 0) {
          c.rank = next_rank;
          queue.push_back(p);
        }
      }
    }
  }
  for (StateId q = 0; q < n; ++q) res.rank[q] = cell[q].rank;
  return res;
}

inline std::vector<StateId> winning_initials(const GameAutomaton& g, const AttractorResult& attr) {
  std::vector<StateId> out;
  for (StateId q : g.initials())
    if (attr.contains(q)) out.push_back(q);
  return out;
}

// Rank-decreasing moves for player 1: at a state of rank i >= 1 every
// suggested action lands exactly in layer i-1.  Undefined outside the
// attractor and at rank-0 states.
struct Strategy {
  std::map<StateId, std::vector<SymbolId>> moves;

  const std::vector<SymbolId>* at(StateId q) const {
    auto it = moves.find(q);
    return it == moves.end() ? nullptr : &it->second;
  }
};

inline Strategy optimal_strategy(const GameAutomaton& g, const AttractorResult& attr) {
  Strategy ws;
  for (StateId q = 0; q < g.state_count(); ++q) {
    if (!g.vertex(q).p1_turn || !attr.contains(q) || attr.rank[q] == 0) continue;
    std::vector<SymbolId> moves;
    g.for_each_enabled(q, [&](const GameEdge& e) {
      if (attr.rank[e.to] != kNoRank && attr.rank[e.to] + 1 == attr.rank[q])
        moves.push_back(e.sym);
    });
    if (moves.empty())
      throw std::logic_error("optimal_strategy: attractor state without rank-decreasing move");
    ws.moves.emplace(q, std::move(moves));
  }
  return ws;
}

// Termination signal of a solve: either the state is winning with its rank,
// or the fixpoint has closed without it and the player sits in the trap.
struct Classification {
  bool winning = false;
  std::uint32_t rank = kNoRank;
};

inline Classification classify(const AttractorResult& attr, StateId q) {
  if (attr.contains(q)) return {true, attr.rank[q]};
  return {false, kNoRank};
}

inline SwitchingFunction sw_update(const SwitchingFunction& sw, StateId q2, SymbolId local_sym) {
  return sw.updated(q2, local_sym);
}

// DOT rendering of a game automaton, attractor-annotated when given.
inline std::string to_dot(const GameAutomaton& g, const AttractorResult* attr,
                          const std::string& title = "game") {
  std::ostringstream out;
  out << "digraph \"" << detail::dot_escape(title) << "\" {\n  rankdir=LR;\n";
  for (StateId q = 0; q < g.state_count(); ++q) {
    out << "  q" << q << " [label=\"" << detail::dot_escape(g.state_name(q));
    if (attr && attr->contains(q)) out << "\\nrank=" << attr->rank[q];
    out << "\", shape=" << (g.is_final(q) ? "doublecircle" : (g.vertex(q).p1_turn ? "circle" : "box"));
    if (attr && attr->contains(q)) out << ", style=filled, fillcolor=lightgrey";
    out << "];\n";
  }
  for (std::size_t i = 0; i < g.initials().size(); ++i) {
    out << "  __init" << i << " [shape=point];\n";
    out << "  __init" << i << " -> q" << g.initials()[i] << ";\n";
  }
  for (const GameEdge& e : g.all_edges()) {
    if (!g.edge_enabled(e)) continue;
    out << "  q" << e.from << " -> q" << e.to << " [label=\""
        << detail::dot_escape(g.lambda()->name(e.sym)) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace adversynth
