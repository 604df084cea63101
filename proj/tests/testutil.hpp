#pragma once

// Seeded random instance generators shared by the unit and acceptance
// suites.

#include <random>
#include <string>
#include <vector>

#include "adversynth/automata.hpp"
#include "adversynth/game.hpp"
#include "adversynth/inference.hpp"
#include "adversynth/rng.hpp"

namespace adversynth::testutil {

inline AlphabetPtr small_alphabet(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return make_alphabet(names);
}

// Random partial DFA with random initial and final sets.
inline Fsa random_fsa(std::mt19937_64& rng, std::size_t max_states, std::size_t nsym,
                      double edge_prob = 0.6) {
  std::uniform_int_distribution<std::size_t> nstates(1, max_states);
  std::size_t n = nstates(rng);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  Semiautomaton sa(small_alphabet(nsym), names);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<StateId> pick(0, static_cast<StateId>(n - 1));
  for (StateId q = 0; q < n; ++q)
    for (SymbolId s = 0; s < nsym; ++s)
      if (coin(rng) < edge_prob) sa.add_transition(q, s, pick(rng));
  std::vector<StateId> initial, fin;
  for (StateId q = 0; q < n; ++q) {
    if (coin(rng) < 0.3 || q == 0) {
      if (coin(rng) < 0.5) initial.push_back(q);
    }
    if (coin(rng) < 0.35) fin.push_back(q);
  }
  if (initial.empty()) initial.push_back(pick(rng));
  return Fsa(std::move(sa), std::move(initial), std::move(fin));
}

inline Word random_word(std::mt19937_64& rng, std::size_t nsym, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<SymbolId> sym(0, static_cast<SymbolId>(nsym - 1));
  Word w(len(rng));
  for (SymbolId& s : w) s = sym(rng);
  return w;
}

// Random SL grammar built from the factors of a handful of random words,
// so it is never trivially empty, plus occasional extra factors that may be
// useless.
inline SlGrammar random_grammar(std::mt19937_64& rng, std::uint32_t max_k, std::size_t max_sigma) {
  std::uniform_int_distribution<std::uint32_t> kd(1, max_k);
  std::uniform_int_distribution<std::size_t> sd(1, max_sigma);
  std::uint32_t k = kd(rng);
  AlphabetPtr sigma = small_alphabet(sd(rng));
  FactorSet factors;
  std::uniform_int_distribution<int> words(1, 5);
  int n = words(rng);
  for (int i = 0; i < n; ++i) {
    Word w = random_word(rng, sigma->size(), k + 3);
    for (Factor f : k_factors(w, k, true)) factors.insert(std::move(f));
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < 0.4) {
    // An interior factor nothing may license end to end.
    Word w = random_word(rng, sigma->size(), k);
    if (w.size() == k && k >= 1) factors.insert(Factor(w.begin(), w.end()));
  }
  return SlGrammar(k, sigma, std::move(factors));
}

// Arbitrary turn-alternating game graph: states carry their own index as
// both player components, so the switching function is keyed by the state
// itself.  No pass action; player-2 states may end up with no enabled move
// (the vacuous case of the attractor step).
inline GameAutomaton random_game(std::mt19937_64& rng, std::size_t n_states,
                                 std::size_t syms_per_side, double edge_prob = 0.5,
                                 double sw_on_prob = 0.8, bool ensure_p2_moves = false) {
  std::vector<std::string> p1_syms, p2_syms;
  for (std::size_t i = 0; i < syms_per_side; ++i) {
    p1_syms.push_back("m" + std::to_string(i));
    p2_syms.push_back("e" + std::to_string(i));
  }
  std::vector<std::string> all = p1_syms;
  all.insert(all.end(), p2_syms.begin(), p2_syms.end());
  AlphabetPtr lambda = make_alphabet(all);

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<GameVertex> states(n_states);
  std::vector<std::string> names;
  std::vector<StateId> turn1, turn0;
  for (StateId q = 0; q < n_states; ++q) {
    states[q].q1 = q;
    states[q].q2 = q;
    states[q].qs = kNoState;
    states[q].p1_turn = coin(rng) < 0.5;
    (states[q].p1_turn ? turn1 : turn0).push_back(q);
    names.push_back("s" + std::to_string(q));
  }
  if (turn1.empty()) {
    states[0].p1_turn = true;
    turn1.push_back(0);
    turn0.erase(turn0.begin());
  }
  if (turn0.empty()) {
    states[n_states - 1].p1_turn = false;
    turn0.push_back(static_cast<StateId>(n_states - 1));
    turn1.pop_back();
  }

  auto pick = [&](const std::vector<StateId>& v) {
    std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
    return v[d(rng)];
  };
  std::vector<GameEdge> edges;
  for (StateId q = 0; q < n_states; ++q) {
    for (SymbolId s = 0; s < syms_per_side; ++s) {
      if (coin(rng) >= edge_prob) continue;
      if (states[q].p1_turn)
        edges.push_back({q, s, pick(turn0)});
      else
        edges.push_back({q, static_cast<SymbolId>(s + syms_per_side), pick(turn1)});
    }
  }

  std::vector<StateId> initials, finals;
  for (StateId q : turn1)
    if (coin(rng) < 0.4) initials.push_back(q);
  for (StateId q : turn0)
    if (coin(rng) < 0.25) finals.push_back(q);
  if (initials.empty()) initials.push_back(turn1.front());

  SwitchingFunction sw(static_cast<std::uint32_t>(n_states),
                       static_cast<std::uint32_t>(syms_per_side), std::nullopt, false);
  for (StateId q = 0; q < n_states; ++q)
    for (SymbolId s = 0; s < syms_per_side; ++s)
      if (coin(rng) < sw_on_prob) sw = sw.updated(q, s);

  if (ensure_p2_moves) {
    // Guarantee every player-2 state at least one enabled move, the way a
    // pass action would.
    for (StateId q : turn0) {
      bool has = false;
      for (const GameEdge& e : edges)
        if (e.from == q && sw.enabled(q, e.sym - static_cast<SymbolId>(syms_per_side))) has = true;
      if (has) continue;
      bool wired = false;
      for (const GameEdge& e : edges)
        if (e.from == q && !wired) {
          sw = sw.updated(q, e.sym - static_cast<SymbolId>(syms_per_side));
          wired = true;
        }
      if (!wired) {
        edges.push_back({q, static_cast<SymbolId>(syms_per_side), pick(turn1)});
        sw = sw.updated(q, 0);
      }
    }
  }

  return GameAutomaton::from_parts(lambda, static_cast<std::uint32_t>(syms_per_side), std::nullopt,
                                   names, names, {}, std::move(states), std::move(edges),
                                   std::move(initials), std::move(finals), std::move(sw));
}

}  // namespace adversynth::testutil
