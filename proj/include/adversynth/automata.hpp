#pragma once

// Deterministic semiautomata and finite-state acceptors.
//
// A semiautomaton is a deterministic labeled transition structure without
// initial or final markings; an FSA adds both.  Transition functions are
// partial: a missing entry means the action is not available at that state.
// All types are immutable once constructed (the builders validate and then
// freeze), so they can be shared freely across threads.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adversynth {

using SymbolId = std::uint32_t;
using StateId = std::uint32_t;
using Word = std::vector<SymbolId>;

inline constexpr StateId kNoState = static_cast<StateId>(-1);

// Ordered symbol table.  The declaration order is the canonical symbol
// order used for every tie-break and every serialized artifact, so the
// same inputs always produce the same outputs.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    for (SymbolId i = 0; i < names_.size(); ++i) {
      if (names_[i].empty())
        throw std::invalid_argument("alphabet: empty symbol name");
      auto [it, fresh] = index_.emplace(names_[i], i);
      (void)it;
      if (!fresh)
        throw std::invalid_argument("alphabet: duplicate symbol '" + names_[i] + "'");
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(SymbolId s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<SymbolId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  SymbolId require(std::string_view name) const {
    auto s = find(name);
    if (!s) throw std::invalid_argument("alphabet: unknown symbol '" + std::string(name) + "'");
    return *s;
  }

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, SymbolId> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> names) {
  return std::make_shared<const Alphabet>(std::move(names));
}

// Deterministic semiautomaton with a partial transition function, stored as
// a dense state-by-symbol table.
class Semiautomaton {
 public:
  Semiautomaton() = default;

  Semiautomaton(AlphabetPtr alphabet, std::vector<std::string> state_names)
      : alphabet_(std::move(alphabet)), state_names_(std::move(state_names)) {
    if (!alphabet_) throw std::invalid_argument("semiautomaton: null alphabet");
    for (StateId q = 0; q < state_names_.size(); ++q) {
      auto [it, fresh] = state_index_.emplace(state_names_[q], q);
      (void)it;
      if (!fresh)
        throw std::invalid_argument("semiautomaton: duplicate state '" + state_names_[q] + "'");
    }
    next_.assign(state_names_.size() * alphabet_->size(), kNoState);
  }

  void add_transition(StateId from, SymbolId sym, StateId to) {
    check_state(from);
    check_state(to);
    if (sym >= alphabet_->size())
      throw std::invalid_argument("semiautomaton: symbol id out of range");
    StateId& slot = next_[from * alphabet_->size() + sym];
    if (slot != kNoState && slot != to)
      throw std::invalid_argument("semiautomaton: conflicting transition from '" +
                                  state_names_[from] + "' on '" + alphabet_->name(sym) + "'");
    slot = to;
  }

  std::size_t state_count() const { return state_names_.size(); }
  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::string& state_name(StateId q) const { return state_names_.at(q); }
  const std::vector<std::string>& state_names() const { return state_names_; }

  std::optional<StateId> find_state(std::string_view name) const {
    auto it = state_index_.find(std::string(name));
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
  }

  StateId require_state(std::string_view name) const {
    auto q = find_state(name);
    if (!q) throw std::invalid_argument("state not in automaton: '" + std::string(name) + "'");
    return *q;
  }

  // T(q, s), or nullopt when undefined.
  std::optional<StateId> target(StateId q, SymbolId s) const {
    check_state(q);
    if (s >= alphabet_->size())
      throw std::invalid_argument("semiautomaton: symbol id out of range");
    StateId t = next_[q * alphabet_->size() + s];
    if (t == kNoState) return std::nullopt;
    return t;
  }

  std::size_t transition_count() const {
    std::size_t n = 0;
    for (StateId t : next_) n += (t != kNoState);
    return n;
  }

 private:
  void check_state(StateId q) const {
    if (q >= state_names_.size()) throw std::invalid_argument("state not in automaton");
  }

  AlphabetPtr alphabet_;
  std::vector<std::string> state_names_;
  std::map<std::string, StateId> state_index_;
  std::vector<StateId> next_;
};

// Semiautomaton plus initial and final state sets.
struct Fsa {
  Semiautomaton sa;
  std::vector<StateId> initial;  // sorted, unique
  std::vector<StateId> final_states;

  Fsa() = default;
  Fsa(Semiautomaton s, std::vector<StateId> init, std::vector<StateId> fin)
      : sa(std::move(s)), initial(std::move(init)), final_states(std::move(fin)) {
    normalize(initial);
    normalize(final_states);
    for (StateId q : initial) (void)sa.state_name(q);
    for (StateId q : final_states) (void)sa.state_name(q);
  }

  bool is_final(StateId q) const {
    return std::binary_search(final_states.begin(), final_states.end(), q);
  }
  bool is_initial(StateId q) const {
    return std::binary_search(initial.begin(), initial.end(), q);
  }

 private:
  static void normalize(std::vector<StateId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
};

// Gamma(q): the actions with a defined transition at q, in symbol order.
inline std::vector<SymbolId> enabled(const Semiautomaton& sa, StateId q) {
  std::vector<SymbolId> out;
  for (SymbolId s = 0; s < sa.alphabet()->size(); ++s)
    if (sa.target(q, s)) out.push_back(s);
  return out;
}

// Runs the word from q0; nullopt as soon as a step is undefined.
inline std::optional<StateId> run(const Semiautomaton& sa, StateId q0, const Word& w) {
  std::optional<StateId> q = q0;
  (void)sa.state_name(q0);
  for (SymbolId s : w) {
    if (s >= sa.alphabet()->size())
      throw std::invalid_argument("run: symbol outside alphabet");
    if (!q) return std::nullopt;
    q = sa.target(*q, s);
  }
  return q;
}

inline bool accepts(const Fsa& fsa, const Word& w) {
  for (StateId q0 : fsa.initial) {
    auto q = run(fsa.sa, q0, w);
    if (q && fsa.is_final(*q)) return true;
  }
  return false;
}

// Breadth-first levels from the initial set; exactly the reachable states
// appear.  level(q) is the length of the shortest word reaching q.
using LevelMap = std::map<StateId, std::uint32_t>;

inline LevelMap levels(const Fsa& fsa) {
  LevelMap lvl;
  std::queue<StateId> bfs;
  for (StateId q : fsa.initial) {
    lvl.emplace(q, 0);
    bfs.push(q);
  }
  while (!bfs.empty()) {
    StateId q = bfs.front();
    bfs.pop();
    for (SymbolId s = 0; s < fsa.sa.alphabet()->size(); ++s) {
      auto t = fsa.sa.target(q, s);
      if (t && !lvl.count(*t)) {
        lvl.emplace(*t, lvl.at(q) + 1);
        bfs.push(*t);
      }
    }
  }
  return lvl;
}

namespace detail {

// Image-set determinization of the initial set.  The transition function is
// already deterministic, so each reachable set of states has exactly one
// successor set per symbol; the blow-up is bounded by the number of distinct
// images, which stays small in practice.
struct PowerMachine {
  AlphabetPtr alphabet;
  std::vector<std::vector<StateId>> sets;  // sorted member lists
  std::vector<StateId> next;               // dense [set * |alphabet| + sym]
  std::vector<bool> final_set;
  bool has_initial = false;

  std::optional<StateId> target(StateId q, SymbolId s) const {
    StateId t = next[q * alphabet->size() + s];
    return t == kNoState ? std::nullopt : std::optional<StateId>(t);
  }
};

inline PowerMachine determinize_initials(const Fsa& fsa) {
  PowerMachine pm;
  pm.alphabet = fsa.sa.alphabet();
  if (fsa.initial.empty()) return pm;
  pm.has_initial = true;

  std::map<std::vector<StateId>, StateId> ids;
  auto intern = [&](std::vector<StateId> set) {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    StateId id = static_cast<StateId>(pm.sets.size());
    ids.emplace(set, id);
    pm.sets.push_back(std::move(set));
    return id;
  };

  intern(fsa.initial);
  for (StateId q = 0; q < pm.sets.size(); ++q) {
    pm.next.resize((q + 1) * pm.alphabet->size(), kNoState);
    for (SymbolId s = 0; s < pm.alphabet->size(); ++s) {
      std::vector<StateId> image;
      for (StateId m : pm.sets[q]) {
        auto t = fsa.sa.target(m, s);
        if (t) image.push_back(*t);
      }
      std::sort(image.begin(), image.end());
      image.erase(std::unique(image.begin(), image.end()), image.end());
      if (image.empty()) continue;
      pm.next[q * pm.alphabet->size() + s] = intern(std::move(image));
    }
  }
  pm.next.resize(pm.sets.size() * pm.alphabet->size(), kNoState);
  pm.final_set.resize(pm.sets.size(), false);
  for (StateId q = 0; q < pm.sets.size(); ++q)
    for (StateId m : pm.sets[q])
      if (fsa.is_final(m)) pm.final_set[q] = true;
  return pm;
}

// Complete deterministic machine: state 0 is the initial state, the last
// state is the sink.  An empty initial set yields a sink-only machine.
struct CompleteDfa {
  AlphabetPtr alphabet;
  std::size_t states = 0;
  std::vector<StateId> next;  // total
  std::vector<bool> final_state;
  StateId start = 0;
};

inline CompleteDfa complete(const PowerMachine& pm) {
  CompleteDfa c;
  c.alphabet = pm.alphabet;
  std::size_t base = pm.sets.size();
  c.states = base + 1;  // + sink
  StateId sink = static_cast<StateId>(base);
  c.next.assign(c.states * c.alphabet->size(), sink);
  c.final_state.assign(c.states, false);
  for (StateId q = 0; q < base; ++q) {
    c.final_state[q] = pm.final_set[q];
    for (SymbolId s = 0; s < c.alphabet->size(); ++s) {
      auto t = pm.target(q, s);
      c.next[q * c.alphabet->size() + s] = t ? *t : sink;
    }
  }
  c.start = pm.has_initial ? 0 : sink;
  return c;
}

// Hopcroft partition refinement on a complete DFA.  Returns the block id of
// every state.
inline std::vector<StateId> hopcroft(const CompleteDfa& dfa) {
  std::size_t n = dfa.states;
  std::size_t nsym = dfa.alphabet->size();

  // Predecessor lists per symbol.
  std::vector<std::vector<std::vector<StateId>>> pre(
      nsym, std::vector<std::vector<StateId>>(n));
  for (StateId q = 0; q < n; ++q)
    for (SymbolId s = 0; s < nsym; ++s) pre[s][dfa.next[q * nsym + s]].push_back(q);

  std::vector<StateId> block(n, 0);
  std::vector<std::vector<StateId>> blocks;
  {
    std::vector<StateId> fin, nonfin;
    for (StateId q = 0; q < n; ++q) (dfa.final_state[q] ? fin : nonfin).push_back(q);
    if (!nonfin.empty()) {
      for (StateId q : nonfin) block[q] = static_cast<StateId>(blocks.size());
      blocks.push_back(std::move(nonfin));
    }
    if (!fin.empty()) {
      for (StateId q : fin) block[q] = static_cast<StateId>(blocks.size());
      blocks.push_back(std::move(fin));
    }
  }

  std::set<std::pair<StateId, SymbolId>> work;
  for (StateId b = 0; b < blocks.size(); ++b)
    for (SymbolId s = 0; s < nsym; ++s) work.insert({b, s});

  while (!work.empty()) {
    auto [splitter, s] = *work.begin();
    work.erase(work.begin());

    // States with an s-transition into the splitter block.
    std::set<StateId> moved;
    for (StateId t : blocks[splitter])
      for (StateId p : pre[s][t]) moved.insert(p);
    if (moved.empty()) continue;

    // Group the moved states per block and split where the block is cut.
    std::map<StateId, std::vector<StateId>> per_block;
    for (StateId p : moved) per_block[block[p]].push_back(p);
    for (auto& [b, inside] : per_block) {
      if (inside.size() == blocks[b].size()) continue;  // block untouched
      std::vector<StateId> stay;
      std::set<StateId> in(inside.begin(), inside.end());
      for (StateId q : blocks[b])
        if (!in.count(q)) stay.push_back(q);
      StateId nb = static_cast<StateId>(blocks.size());
      blocks[b] = std::move(stay);
      for (StateId q : inside) block[q] = nb;
      blocks.push_back(inside);
      for (SymbolId sym = 0; sym < nsym; ++sym) {
        if (work.count({b, sym})) {
          work.insert({nb, sym});
        } else {
          // Refine with the smaller half.
          work.insert({blocks[b].size() <= blocks[nb].size() ? b : nb, sym});
        }
      }
    }
  }
  return block;
}

}  // namespace detail

// Canonical (minimal) deterministic FSA for L(fsa).  The machine is
// completed with a sink internally; the sink's class is stripped from the
// output, so the result is again partial.  Convention: the empty language
// canonicalizes to a single non-final initial state with no transitions.
// States are renamed s0, s1, ... in breadth-first symbol order.
inline Fsa minimize(const Fsa& fsa) {
  const auto& alphabet = fsa.sa.alphabet();
  auto pm = detail::determinize_initials(fsa);
  auto dfa = detail::complete(pm);
  auto block = detail::hopcroft(dfa);

  std::size_t nsym = alphabet->size();
  StateId sink_block = block[dfa.states - 1];
  StateId start_block = block[dfa.start];

  // BFS over blocks from the start block, skipping the dead class.
  std::map<StateId, StateId> rename;
  std::vector<StateId> order;
  if (start_block != sink_block) {
    rename.emplace(start_block, 0);
    order.push_back(start_block);
    for (std::size_t i = 0; i < order.size(); ++i) {
      // A representative suffices: all states in a block agree blockwise.
      StateId rep = kNoState;
      for (StateId q = 0; q < dfa.states; ++q)
        if (block[q] == order[i]) {
          rep = q;
          break;
        }
      for (SymbolId s = 0; s < nsym; ++s) {
        StateId tb = block[dfa.next[rep * nsym + s]];
        if (tb == sink_block || rename.count(tb)) continue;
        rename.emplace(tb, static_cast<StateId>(order.size()));
        order.push_back(tb);
      }
    }
  }

  bool has_final = false;
  for (StateId b : order) {
    for (StateId q = 0; q < dfa.states; ++q)
      if (block[q] == b && dfa.final_state[q]) has_final = true;
  }
  if (order.empty() || !has_final) {
    Semiautomaton sa(alphabet, {"s0"});
    return Fsa(std::move(sa), {0}, {});
  }

  std::vector<std::string> names;
  names.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) names.push_back("s" + std::to_string(i));
  Semiautomaton sa(alphabet, std::move(names));
  std::vector<StateId> finals;
  for (std::size_t i = 0; i < order.size(); ++i) {
    StateId rep = kNoState;
    for (StateId q = 0; q < dfa.states; ++q)
      if (block[q] == order[i]) {
        rep = q;
        break;
      }
    if (dfa.final_state[rep]) finals.push_back(static_cast<StateId>(i));
    for (SymbolId s = 0; s < nsym; ++s) {
      StateId tb = block[dfa.next[rep * nsym + s]];
      if (tb == sink_block) continue;
      sa.add_transition(static_cast<StateId>(i), s, rename.at(tb));
    }
  }
  return Fsa(std::move(sa), {0}, std::move(finals));
}

// Shortest word accepted by exactly one of the two machines, if any.
// Implemented as a breadth-first walk of the completed pair machine.
inline std::optional<Word> difference_witness(const Fsa& a, const Fsa& b) {
  if (*a.sa.alphabet() != *b.sa.alphabet())
    throw std::invalid_argument("language_equivalent: alphabet mismatch");
  auto ca = detail::complete(detail::determinize_initials(a));
  auto cb = detail::complete(detail::determinize_initials(b));
  std::size_t nsym = a.sa.alphabet()->size();

  std::set<std::pair<StateId, StateId>> seen;
  std::queue<std::pair<std::pair<StateId, StateId>, Word>> bfs;
  bfs.push({{ca.start, cb.start}, {}});
  seen.insert({ca.start, cb.start});
  while (!bfs.empty()) {
    auto [pair, w] = bfs.front();
    bfs.pop();
    if (ca.final_state[pair.first] != cb.final_state[pair.second]) return w;
    for (SymbolId s = 0; s < nsym; ++s) {
      std::pair<StateId, StateId> t{ca.next[pair.first * nsym + s],
                                    cb.next[pair.second * nsym + s]};
      if (seen.insert(t).second) {
        Word w2 = w;
        w2.push_back(s);
        bfs.push({t, std::move(w2)});
      }
    }
  }
  return std::nullopt;
}

inline bool language_equivalent(const Fsa& a, const Fsa& b) {
  return !difference_witness(a, b).has_value();
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}
inline std::string dot_label(const std::string& s) {
  return s.empty() ? std::string("\xce\xbb") : dot_escape(s);  // empty word shown as lambda
}
}  // namespace detail

// DOT rendering; identical inputs yield byte-identical output.
inline std::string to_dot(const Semiautomaton& sa, const std::vector<StateId>* initial,
                          const std::vector<StateId>* final_states,
                          const std::string& title = "automaton") {
  std::ostringstream out;
  out << "digraph \"" << detail::dot_escape(title) << "\" {\n  rankdir=LR;\n";
  for (StateId q = 0; q < sa.state_count(); ++q) {
    bool fin = final_states && std::binary_search(final_states->begin(), final_states->end(), q);
    out << "  q" << q << " [label=\"" << detail::dot_label(sa.state_name(q)) << "\", shape="
        << (fin ? "doublecircle" : "circle") << "];\n";
  }
  if (initial) {
    for (std::size_t i = 0; i < initial->size(); ++i) {
      out << "  __init" << i << " [shape=point];\n";
      out << "  __init" << i << " -> q" << (*initial)[i] << ";\n";
    }
  }
  for (StateId q = 0; q < sa.state_count(); ++q)
    for (SymbolId s = 0; s < sa.alphabet()->size(); ++s)
      if (auto t = sa.target(q, s))
        out << "  q" << q << " -> q" << *t << " [label=\""
            << detail::dot_escape(sa.alphabet()->name(s)) << "\"];\n";
  out << "}\n";
  return out.str();
}

inline std::string to_dot(const Fsa& fsa, const std::string& title = "automaton") {
  return to_dot(fsa.sa, &fsa.initial, &fsa.final_states, title);
}

}  // namespace adversynth
