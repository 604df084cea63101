#pragma once

// Weak (observable) simulation between labeled semiautomata.
//
// Part of the alphabet is declared silent.  A composite transition carries
// exactly one observable label; by the default convention it is at most one
// silent step followed by the observable one, the general mode closes over
// silent steps on both sides.  A relation is a weak simulation when it is
// total on the left state set and every composite step on the left can be
// matched on the right into a related pair.  Note the matching clause only
// quantifies over observable labels; silent left steps are absorbed into
// the composite transitions themselves.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "adversynth/automata.hpp"

namespace adversynth {

struct SilentSplit {
  std::vector<bool> silent;  // per symbol id

  static SilentSplit from_names(const Alphabet& alphabet,
                                const std::vector<std::string>& silent_names) {
    SilentSplit s;
    s.silent.assign(alphabet.size(), false);
    for (const std::string& n : silent_names) s.silent[alphabet.require(n)] = true;
    return s;
  }
  bool is_silent(SymbolId sym) const { return silent.at(sym); }
};

enum class CompositeMode {
  SingleSilentStep,  // optional silent step, then the observable one
  SilentClosure,     // silent* observable silent*
};

using Relation = std::set<std::pair<StateId, StateId>>;

namespace detail {
inline std::set<StateId> silent_closure(const Semiautomaton& sa, const SilentSplit& split,
                                        StateId q) {
  std::set<StateId> seen{q};
  std::vector<StateId> stack{q};
  while (!stack.empty()) {
    StateId cur = stack.back();
    stack.pop_back();
    for (SymbolId s = 0; s < sa.alphabet()->size(); ++s) {
      if (!split.is_silent(s)) continue;
      if (auto t = sa.target(cur, s))
        if (seen.insert(*t).second) stack.push_back(*t);
    }
  }
  return seen;
}
}  // namespace detail

// States reachable by a composite transition labeled with the observable
// symbol obs.
inline std::set<StateId> composite_successors(const Semiautomaton& sa, const SilentSplit& split,
                                              StateId q, SymbolId obs,
                                              CompositeMode mode = CompositeMode::SingleSilentStep) {
  if (split.is_silent(obs))
    throw std::invalid_argument("composite_successors: label must be observable");
  std::set<StateId> out;
  if (mode == CompositeMode::SingleSilentStep) {
    if (auto t = sa.target(q, obs)) out.insert(*t);
    for (SymbolId s = 0; s < sa.alphabet()->size(); ++s) {
      if (!split.is_silent(s)) continue;
      if (auto mid = sa.target(q, s))
        if (auto t = sa.target(*mid, obs)) out.insert(*t);
    }
  } else {
    for (StateId pre : detail::silent_closure(sa, split, q))
      if (auto t = sa.target(pre, obs))
        for (StateId post : detail::silent_closure(sa, split, *t)) out.insert(post);
  }
  return out;
}

inline bool is_weak_simulation(const Relation& r, const Semiautomaton& a1,
                               const Semiautomaton& a2, const SilentSplit& split,
                               CompositeMode mode = CompositeMode::SingleSilentStep) {
  if (*a1.alphabet() != *a2.alphabet())
    throw std::invalid_argument("weak simulation: automata must share the alphabet");
  std::vector<bool> covered(a1.state_count(), false);
  for (const auto& [q1, q2] : r) {
    (void)a1.state_name(q1);
    (void)a2.state_name(q2);
    covered[q1] = true;
  }
  for (bool c : covered)
    if (!c) return false;  // not total

  for (const auto& [q1, q2] : r) {
    for (SymbolId s = 0; s < a1.alphabet()->size(); ++s) {
      if (split.is_silent(s)) continue;
      for (StateId q1p : composite_successors(a1, split, q1, s, mode)) {
        bool matched = false;
        for (StateId q2p : composite_successors(a2, split, q2, s, mode))
          if (r.count({q1p, q2p})) {
            matched = true;
            break;
          }
        if (!matched) return false;
      }
    }
  }
  return true;
}

// Greatest fixpoint: start from the full relation and delete pairs that
// violate the matching clause until stable.  Returns the result when it is
// total on the left states, nothing otherwise.
inline std::optional<Relation> largest_weak_simulation(
    const Semiautomaton& a1, const Semiautomaton& a2, const SilentSplit& split,
    CompositeMode mode = CompositeMode::SingleSilentStep) {
  if (*a1.alphabet() != *a2.alphabet())
    throw std::invalid_argument("weak simulation: automata must share the alphabet");

  // Composite successor tables.
  const std::size_t nsym = a1.alphabet()->size();
  std::vector<std::vector<std::vector<StateId>>> succ1(a1.state_count()), succ2(a2.state_count());
  for (StateId q = 0; q < a1.state_count(); ++q) {
    succ1[q].resize(nsym);
    for (SymbolId s = 0; s < nsym; ++s)
      if (!split.is_silent(s)) {
        auto set = composite_successors(a1, split, q, s, mode);
        succ1[q][s].assign(set.begin(), set.end());
      }
  }
  for (StateId q = 0; q < a2.state_count(); ++q) {
    succ2[q].resize(nsym);
    for (SymbolId s = 0; s < nsym; ++s)
      if (!split.is_silent(s)) {
        auto set = composite_successors(a2, split, q, s, mode);
        succ2[q][s].assign(set.begin(), set.end());
      }
  }

  Relation r;
  for (StateId q1 = 0; q1 < a1.state_count(); ++q1)
    for (StateId q2 = 0; q2 < a2.state_count(); ++q2) r.insert({q1, q2});

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = r.begin(); it != r.end();) {
      auto [q1, q2] = *it;
      bool bad = false;
      for (SymbolId s = 0; s < nsym && !bad; ++s) {
        if (split.is_silent(s)) continue;
        for (StateId q1p : succ1[q1][s]) {
          bool matched = false;
          for (StateId q2p : succ2[q2][s])
            if (r.count({q1p, q2p})) {
              matched = true;
              break;
            }
          if (!matched) {
            bad = true;
            break;
          }
        }
      }
      if (bad) {
        it = r.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  std::vector<bool> covered(a1.state_count(), false);
  for (const auto& [q1, q2] : r) covered[q1] = true;
  for (bool c : covered)
    if (!c) return std::nullopt;
  return r;
}

// True when no two silent transitions can occur back to back anywhere in
// the automaton (the split property of induced transition systems).  A bare
// semiautomaton has no initial states, so every state counts as a start.
inline bool check_alternation(const Semiautomaton& sa, const SilentSplit& split) {
  for (StateId q = 0; q < sa.state_count(); ++q)
    for (SymbolId s = 0; s < sa.alphabet()->size(); ++s) {
      if (!split.is_silent(s)) continue;
      auto mid = sa.target(q, s);
      if (!mid) continue;
      for (SymbolId s2 = 0; s2 < sa.alphabet()->size(); ++s2)
        if (split.is_silent(s2) && sa.target(*mid, s2)) return false;
    }
  return true;
}

}  // namespace adversynth
