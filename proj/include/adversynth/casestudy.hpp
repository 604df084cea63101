#pragma once

// The triangle-apartment scenario: a robot visiting four mutually connected
// rooms while an adversary closes pairs of doors under one of three rule
// regimes.  Every pair of rooms shares exactly one of the six doors a..f;
// the door/room incidence is a fixed bijection (see kDoorMap below and the
// reconstruction search in find_door_maps).

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adversynth/automata.hpp"
#include "adversynth/game.hpp"

namespace adversynth {

inline constexpr int kRoomCount = 4;
inline constexpr int kDoorCount = 6;

// Unordered room pair, rooms numbered 1..4.
struct RoomPair {
  int lo = 0, hi = 0;
  RoomPair() = default;
  RoomPair(int a, int b) : lo(std::min(a, b)), hi(std::max(a, b)) {}
  bool contains(int r) const { return r == lo || r == hi; }
  bool operator==(const RoomPair& o) const { return lo == o.lo && hi == o.hi; }
  bool operator<(const RoomPair& o) const { return std::pair(lo, hi) < std::pair(o.lo, o.hi); }
};

// door index 0..5 <-> letters a..f; kDoorMap[d] is the room pair door d sits
// between.
using DoorMap = std::array<RoomPair, kDoorCount>;

inline char door_letter(int d) { return static_cast<char>('a' + d); }

inline int door_between(const DoorMap& doors, int room_a, int room_b) {
  RoomPair p(room_a, room_b);
  for (int d = 0; d < kDoorCount; ++d)
    if (doors[d] == p) return d;
  throw std::logic_error("door map: no door between rooms");
}

enum class Regime { Opposite, Adjacent, General };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Opposite: return "opposite";
    case Regime::Adjacent: return "adjacent";
    case Regime::General: return "general";
  }
  return "?";
}

inline std::optional<Regime> parse_regime(const std::string& s) {
  if (s == "opposite") return Regime::Opposite;
  if (s == "adjacent") return Regime::Adjacent;
  if (s == "general") return Regime::General;
  return std::nullopt;
}

// Closed-door pairs per rule regime; the lists are the authoritative data.
inline std::vector<std::pair<int, int>> regime_pairs(Regime r) {
  switch (r) {
    case Regime::Opposite:
      return {{0, 3}, {0, 4}, {0, 5}, {1, 5}, {2, 4}, {4, 5}};  // ad ae af bf ce ef
    case Regime::Adjacent:
      return {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 5}, {3, 4}, {3, 5}};
    case Regime::General: {
      std::vector<std::pair<int, int>> all;
      for (int i = 0; i < kDoorCount; ++i)
        for (int j = i + 1; j < kDoorCount; ++j) all.push_back({i, j});
      return all;
    }
  }
  return {};
}

inline std::string pair_name(std::pair<int, int> p) {
  return std::string{door_letter(p.first), door_letter(p.second)};
}

inline constexpr const char* kEpsilonName = "eps";

// Agent semiautomaton: states are the rooms, action j enters room j, every
// room reaches every other room.  The agent cannot pass.
inline PlayerSpec build_agent_sa() {
  std::vector<std::string> rooms;
  for (int r = 1; r <= kRoomCount; ++r) rooms.push_back(std::to_string(r));
  Semiautomaton sa(make_alphabet(rooms), rooms);
  for (StateId i = 0; i < kRoomCount; ++i)
    for (SymbolId j = 0; j < kRoomCount; ++j)
      if (i != j) sa.add_transition(i, j, j);
  std::vector<StateId> initials{0, 1, 2, 3};
  return PlayerSpec(std::move(sa), std::move(initials));
}

namespace detail {
inline std::vector<std::string> regime_pair_names(Regime r) {
  std::vector<std::string> names;
  for (auto p : regime_pairs(r)) names.push_back(pair_name(p));
  return names;
}
}  // namespace detail

// True adversary: states are the currently closed pairs, a move opens one
// door of the pair and closes one, i.e. the pairs share exactly one door.
// The adversary may always pass.
inline PlayerSpec build_adversary_sa(Regime regime) {
  auto pairs = regime_pairs(regime);
  auto names = detail::regime_pair_names(regime);
  std::vector<std::string> symbols = names;
  symbols.push_back(kEpsilonName);
  Semiautomaton sa(make_alphabet(symbols), names);
  const SymbolId eps = static_cast<SymbolId>(pairs.size());
  for (StateId u = 0; u < pairs.size(); ++u) {
    sa.add_transition(u, eps, u);
    for (SymbolId v = 0; v < pairs.size(); ++v) {
      std::set<int> a{pairs[u].first, pairs[u].second};
      int shared = a.count(pairs[v].first) + a.count(pairs[v].second);
      if (shared == 1) sa.add_transition(u, v, v);
    }
  }
  std::vector<StateId> initials(pairs.size());
  for (StateId i = 0; i < pairs.size(); ++i) initials[i] = i;
  return PlayerSpec(std::move(sa), std::move(initials), eps);
}

// The learning scaffold: same states and symbols, but every door move is
// wired everywhere.  The switching function decides which of these edges a
// given theory of mind admits.
inline PlayerSpec build_adversary_scaffold(Regime regime) {
  auto pairs = regime_pairs(regime);
  auto names = detail::regime_pair_names(regime);
  std::vector<std::string> symbols = names;
  symbols.push_back(kEpsilonName);
  Semiautomaton sa(make_alphabet(symbols), names);
  const SymbolId eps = static_cast<SymbolId>(pairs.size());
  for (StateId u = 0; u < pairs.size(); ++u) {
    sa.add_transition(u, eps, u);
    for (SymbolId v = 0; v < pairs.size(); ++v) sa.add_transition(u, v, v);
  }
  std::vector<StateId> initials(pairs.size());
  for (StateId i = 0; i < pairs.size(); ++i) initials[i] = i;
  return PlayerSpec(std::move(sa), std::move(initials), eps);
}

// Switching function of the true adversary over the scaffold.
inline SwitchingFunction true_switching(Regime regime) {
  auto pairs = regime_pairs(regime);
  const std::uint32_t n = static_cast<std::uint32_t>(pairs.size());
  SwitchingFunction sw(n, n + 1, n, false);
  for (StateId u = 0; u < n; ++u)
    for (SymbolId v = 0; v < n; ++v) {
      std::set<int> a{pairs[u].first, pairs[u].second};
      int shared = a.count(pairs[v].first) + a.count(pairs[v].second);
      if (shared == 1) sw = sw.updated(u, v);
    }
  return sw;
}

inline SwitchingFunction naive_switching(Regime regime) {
  auto pairs = regime_pairs(regime);
  const std::uint32_t n = static_cast<std::uint32_t>(pairs.size());
  return SwitchingFunction(n, n + 1, n, false);
}

// Visited-rooms specification over the joint alphabet: states are the
// nonempty room subsets, agent moves add the entered room, every adversary
// symbol self-loops.  Final state is the full set.
inline Fsa build_spec_fsa(const AlphabetPtr& lambda, std::uint32_t p1_sym_count) {
  std::vector<std::string> names;
  std::vector<std::vector<int>> subsets;
  for (int mask = 1; mask < (1 << kRoomCount); ++mask) {
    std::vector<int> rooms;
    std::string name;
    for (int r = 0; r < kRoomCount; ++r)
      if (mask & (1 << r)) {
        rooms.push_back(r);
        name += std::to_string(r + 1);
      }
    subsets.push_back(rooms);
    names.push_back(name);
  }
  std::map<std::string, StateId> by_name;
  for (StateId i = 0; i < names.size(); ++i) by_name.emplace(names[i], i);

  Semiautomaton sa(lambda, names);
  for (StateId i = 0; i < subsets.size(); ++i) {
    int mask = 0;
    for (int r : subsets[i]) mask |= 1 << r;
    for (SymbolId s = 0; s < lambda->size(); ++s) {
      if (s < p1_sym_count) {
        int room = static_cast<int>(s);  // symbol "j" enters room j
        int next_mask = mask | (1 << room);
        std::string next_name;
        for (int r = 0; r < kRoomCount; ++r)
          if (next_mask & (1 << r)) next_name += std::to_string(r + 1);
        sa.add_transition(i, s, by_name.at(next_name));
      } else {
        sa.add_transition(i, s, i);
      }
    }
  }
  std::vector<StateId> initials{by_name.at("1"), by_name.at("2"), by_name.at("3"),
                                by_name.at("4")};
  std::vector<StateId> finals{by_name.at("1234")};
  return Fsa(std::move(sa), std::move(initials), std::move(finals));
}

// U2: with door pair {d1,d2} closed, the agent cannot enter a room whose
// connecting door from its current room is in the pair.  U1 is empty.
inline InteractionFn build_u2(const DoorMap& doors, Regime regime) {
  auto pairs = regime_pairs(regime);
  return InteractionFn{[doors, pairs](StateId q2, StateId q1_room, SymbolId room_sym) {
    int from_room = static_cast<int>(q1_room) + 1;
    int to_room = static_cast<int>(room_sym) + 1;
    if (from_room == to_room) return false;
    int d = door_between(doors, from_room, to_room);
    return d == pairs[q2].first || d == pairs[q2].second;
  }};
}

// The door/room incidence.  The apartment layout is only available as a
// drawing, so the map is pinned by find_door_maps(), which searches all
// assignments for the unique one reproducing the reference game facts
// (winning set, rank, optimal play, move availability).
inline DoorMap door_map() {
  return DoorMap{RoomPair(1, 2), RoomPair(1, 3), RoomPair(2, 3),
                 RoomPair(3, 4), RoomPair(1, 4), RoomPair(2, 4)};
}

struct Scenario {
  Regime regime;
  DoorMap doors;
  TurnProduct product;
  GameAutomaton true_game;       // scaffold game masked by the true switching function
  SwitchingFunction sw_true;
  SwitchingFunction sw_naive;
};

inline Scenario build_scenario(Regime regime, const DoorMap& doors) {
  Scenario sc;
  sc.regime = regime;
  sc.doors = doors;
  PlayerSpec agent = build_agent_sa();
  PlayerSpec scaffold = build_adversary_scaffold(regime);
  sc.product = turn_based_product(std::move(agent), std::move(scaffold), InteractionFn::none(),
                                  build_u2(doors, regime));
  Fsa spec = build_spec_fsa(sc.product.lambda, sc.product.p1_sym_count);
  sc.sw_true = true_switching(regime);
  sc.sw_naive = naive_switching(regime);

  auto init_link = [&spec](const GameVertex& v) -> std::optional<StateId> {
    return spec.sa.find_state(std::to_string(v.q1 + 1));
  };
  sc.true_game = game_automaton(sc.product, spec, init_link, sc.sw_true);
  return sc;
}

inline Scenario build_scenario(Regime regime) { return build_scenario(regime, door_map()); }

// --- reconstruction oracle -------------------------------------------------

// All the game facts the reconstruction must reproduce simultaneously.
inline bool door_map_consistent(const DoorMap& doors) {
  // Text constraint: with doors a and b closed, room 1 loses access to
  // rooms 2 and 3.
  {
    std::set<RoomPair> ab{doors[0], doors[1]};
    if (!ab.count(RoomPair(1, 2)) || !ab.count(RoomPair(1, 3))) return false;
  }

  Scenario sc = build_scenario(Regime::Opposite, doors);
  const GameAutomaton& g = sc.true_game;
  AttractorResult attr = attractor(g);

  auto state = [&](const std::string& name) -> std::optional<StateId> {
    for (StateId q = 0; q < g.state_count(); ++q)
      if (g.state_name(q) == name) return q;
    return std::nullopt;
  };

  // Winning initials, exactly.
  std::set<std::string> expect{"(1,ad,1,1)", "(1,ce,1,1)", "(2,ad,1,2)",
                               "(2,bf,1,2)", "(4,ce,1,4)", "(4,bf,1,4)"};
  std::set<std::string> got;
  for (StateId q : winning_initials(g, attr)) got.insert(g.state_name(q));
  if (got != expect) return false;

  // Rank of the featured initial state.
  auto q0 = state("(1,ad,1,1)");
  if (!q0 || attr.rank[*q0] != 7) return false;

  // The reference optimal play, transition by transition.
  std::vector<std::pair<std::string, std::string>> play{
      {"4", "(4,ad,0,14)"},  {"ae", "(4,ae,1,14)"},  {"2", "(2,ae,0,124)"},
      {"ce", "(2,ce,1,124)"}, {"1", "(1,ce,0,124)"},  {"ef", "(1,ef,1,124)"},
      {"3", "(3,ef,0,1234)"}};
  StateId cur = *q0;
  for (const auto& [sym_name, state_name] : play) {
    auto sym = g.lambda()->find(sym_name);
    if (!sym) return false;
    auto next = g.step(cur, *sym);
    if (!next || g.state_name(*next) != state_name) return false;
    cur = *next;
  }
  if (!g.is_final(cur)) return false;

  // Move availability in the product fragment.
  auto moves_at = [&](const std::string& name) -> std::optional<std::set<std::string>> {
    auto q = state(name);
    if (!q) return std::nullopt;
    std::set<std::string> out;
    g.for_each_enabled(*q, [&](const GameEdge& e) { out.insert(g.lambda()->name(e.sym)); });
    return out;
  };
  if (moves_at("(1,ad,1,1)") != std::set<std::string>{"3", "4"}) return false;
  if (moves_at("(3,af,1,3)") != std::set<std::string>{"1", "2", "4"}) return false;
  if (moves_at("(4,af,1,4)") != std::set<std::string>{"1", "3"}) return false;

  // U2(ab, 1) = {2, 3}.
  InteractionFn u2 = build_u2(doors, Regime::General);
  auto general = regime_pairs(Regime::General);
  StateId ab = kNoState;
  for (StateId i = 0; i < general.size(); ++i)
    if (general[i] == std::pair<int, int>{0, 1}) ab = i;
  std::set<int> blocked;
  for (SymbolId j = 0; j < kRoomCount; ++j)
    if (u2(ab, 0, j)) blocked.insert(static_cast<int>(j) + 1);
  if (blocked != std::set<int>{2, 3}) return false;

  return true;
}

// Exhaustive search over all door/room bijections; returns the consistent
// maps in lexicographic order.
inline std::vector<DoorMap> find_door_maps() {
  std::vector<RoomPair> all_pairs;
  for (int a = 1; a <= kRoomCount; ++a)
    for (int b = a + 1; b <= kRoomCount; ++b) all_pairs.push_back(RoomPair(a, b));
  std::vector<int> perm{0, 1, 2, 3, 4, 5};
  std::vector<DoorMap> found;
  do {
    DoorMap m;
    for (int d = 0; d < kDoorCount; ++d) m[d] = all_pairs[perm[d]];
    if (door_map_consistent(m)) found.push_back(m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

}  // namespace adversynth
