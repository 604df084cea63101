#pragma once

// String-extension learning for strictly local languages.
//
// A word's k-factors are its contiguous length-k substrings, computed after
// attaching the reserved boundary markers (left/right) when requested; a
// bounded word shorter than k contributes itself as the single factor.  An
// SL_k grammar is a finite set of such factors, and membership is factor-set
// inclusion.  The learner is the string extension learner: the hypothesis is
// the union of the factors of everything observed so far.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "adversynth/automata.hpp"

namespace adversynth {

// Boundary markers live outside every alphabet; factors are sequences over
// symbol ids plus these two sentinels.
using FactorSym = std::uint32_t;
inline constexpr FactorSym kLeftBound = 0xFFFFFFFEu;
inline constexpr FactorSym kRightBound = 0xFFFFFFFFu;

using Factor = std::vector<FactorSym>;
using FactorSet = std::set<Factor>;

// f_k(w), optionally on the boundary-marked word.
inline FactorSet k_factors(const Word& w, std::uint32_t k, bool with_boundaries) {
  if (k < 1) throw std::invalid_argument("k_factors: k must be >= 1");
  Factor x;
  if (with_boundaries) x.push_back(kLeftBound);
  x.insert(x.end(), w.begin(), w.end());
  if (with_boundaries) x.push_back(kRightBound);

  FactorSet out;
  if (x.size() <= k) {
    out.insert(std::move(x));
    return out;
  }
  for (std::size_t i = 0; i + k <= x.size(); ++i)
    out.insert(Factor(x.begin() + i, x.begin() + i + k));
  return out;
}

namespace detail {
// Valid factor shapes are exactly the elements of f_k over boundary-marked
// words: an interior window of length k, a left- or right-anchored window of
// length k, or a fully bounded short word of length <= k.
inline bool factor_well_formed(const Factor& f, std::uint32_t k, std::size_t sigma_size) {
  if (f.empty() || f.size() > k) return false;
  bool left = f.front() == kLeftBound;
  bool right = f.back() == kRightBound;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == kLeftBound && i != 0) return false;
    if (f[i] == kRightBound && i + 1 != f.size()) return false;
    if (f[i] != kLeftBound && f[i] != kRightBound && f[i] >= sigma_size) return false;
  }
  if (!(left && right) && f.size() != k) return false;
  return true;
}
}  // namespace detail

struct SlGrammar {
  std::uint32_t k = 1;
  AlphabetPtr sigma;
  FactorSet factors;

  SlGrammar() = default;
  SlGrammar(std::uint32_t k_, AlphabetPtr sigma_, FactorSet factors_ = {})
      : k(k_), sigma(std::move(sigma_)), factors(std::move(factors_)) {
    if (k < 1) throw std::invalid_argument("grammar: k must be >= 1");
    if (!sigma) throw std::invalid_argument("grammar: null alphabet");
    if (sigma->find("<") || sigma->find(">"))
      throw std::invalid_argument("grammar: '<' and '>' are reserved for the boundary markers");
    for (const Factor& f : factors)
      if (!detail::factor_well_formed(f, k, sigma->size()))
        throw std::invalid_argument("grammar: malformed factor");
  }
};

// w is in L(g) iff every boundary-marked k-factor of w is licensed.
inline bool sl_membership(const SlGrammar& g, const Word& w) {
  for (SymbolId s : w)
    if (s >= g.sigma->size()) throw std::invalid_argument("sl_membership: symbol outside alphabet");
  for (const Factor& f : k_factors(w, g.k, true))
    if (!g.factors.count(f)) return false;
  return true;
}

// Incremental learner state.  The presentation is consumed item by item;
// pauses leave the hypothesis untouched.  Factor sets only ever grow.
struct LearnerState {
  SlGrammar grammar;
  std::uint64_t items_consumed = 0;
};

using PresentationItem = std::optional<Word>;  // nullopt is the pause marker
using Presentation = std::vector<PresentationItem>;

inline LearnerState learner_update(const LearnerState& st, const PresentationItem& item) {
  LearnerState out = st;
  out.items_consumed += 1;
  if (!item) return out;
  for (SymbolId s : *item)
    if (s >= st.grammar.sigma->size()) throw std::invalid_argument("unknown adversary action");
  for (Factor f : k_factors(*item, st.grammar.k, true)) out.grammar.factors.insert(std::move(f));
  return out;
}

namespace detail {
// Scaffold state enumeration: all words of length <= k-1 in length-then-
// symbol order.  The word is also the state name.
inline std::vector<Word> scaffold_words(const Alphabet& sigma, std::uint32_t k) {
  std::vector<Word> words{{}};
  std::size_t begin = 0;
  for (std::uint32_t len = 1; len + 1 <= k; ++len) {
    std::size_t end = words.size();
    for (std::size_t i = begin; i < end; ++i)
      for (SymbolId s = 0; s < sigma.size(); ++s) {
        Word w = words[i];
        w.push_back(s);
        words.push_back(std::move(w));
      }
    begin = end;
  }
  return words;
}

inline std::string word_name(const Alphabet& sigma, const Word& w) {
  std::string out;
  for (SymbolId s : w) out += sigma.name(s);
  return out;
}

inline Word scaffold_next(const Word& u, SymbolId s, std::uint32_t k) {
  Word v = u;
  v.push_back(s);
  if (v.size() > k - 1) v.erase(v.begin());
  return v;
}
}  // namespace detail

// The SL_k scaffold for Sigma*: states are all words of length <= k-1, the
// next state is the length-(k-1) suffix, all states are final.
inline Fsa build_dk(const AlphabetPtr& sigma, std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("build_dk: k must be >= 1");
  auto words = detail::scaffold_words(*sigma, k);
  std::vector<std::string> names;
  names.reserve(words.size());
  std::map<Word, StateId> id;
  for (StateId i = 0; i < words.size(); ++i) {
    names.push_back(detail::word_name(*sigma, words[i]));
    id.emplace(words[i], i);
  }
  Semiautomaton sa(sigma, std::move(names));
  for (StateId i = 0; i < words.size(); ++i)
    for (SymbolId s = 0; s < sigma->size(); ++s)
      sa.add_transition(i, s, id.at(detail::scaffold_next(words[i], s, k)));
  std::vector<StateId> all(words.size());
  for (StateId i = 0; i < words.size(); ++i) all[i] = i;
  return Fsa(std::move(sa), {0}, std::move(all));
}

namespace detail {
// True when some factor in the set extends the given marked prefix.  The
// set is lexicographically ordered, so all extensions of a prefix form a
// contiguous range starting at lower_bound.
inline bool any_factor_with_prefix(const FactorSet& factors, const Factor& prefix) {
  auto it = factors.lower_bound(prefix);
  if (it == factors.end() || it->size() < prefix.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), it->begin());
}

// Scaffold machine for a grammar, before trimming: which transitions are
// licensed and which states are final.  Shared by grammar_to_fsa and the
// characteristic sample construction.
struct LicensedScaffold {
  std::vector<Word> words;
  std::map<Word, StateId> id;
  std::vector<std::vector<std::pair<SymbolId, StateId>>> out;  // licensed edges
  std::vector<bool> final_state;
};

inline LicensedScaffold license_scaffold(const SlGrammar& g) {
  LicensedScaffold m;
  const Alphabet& sigma = *g.sigma;
  const std::uint32_t k = g.k;

  if (k == 1) {
    // Single scaffold state; the boundary markers are standalone 1-factors,
    // so any acceptance at all requires both of them in the grammar.
    m.words = {{}};
    m.id.emplace(Word{}, 0);
    m.out.resize(1);
    bool bounds = g.factors.count({kLeftBound}) && g.factors.count({kRightBound});
    m.final_state.assign(1, bounds);
    if (bounds)
      for (SymbolId s = 0; s < sigma.size(); ++s)
        if (g.factors.count({s})) m.out[0].push_back({s, 0});
    return m;
  }

  m.words = scaffold_words(sigma, k);
  for (StateId i = 0; i < m.words.size(); ++i) m.id.emplace(m.words[i], i);
  m.out.resize(m.words.size());
  m.final_state.assign(m.words.size(), false);

  for (StateId i = 0; i < m.words.size(); ++i) {
    const Word& u = m.words[i];
    // Finality: the right-anchored factor of the word ending here.
    Factor fin;
    if (u.size() == k - 1) {
      fin.assign(u.begin(), u.end());
      fin.push_back(kRightBound);
    } else {
      fin.push_back(kLeftBound);
      fin.insert(fin.end(), u.begin(), u.end());
      fin.push_back(kRightBound);
    }
    m.final_state[i] = g.factors.count(fin) != 0;

    for (SymbolId s = 0; s < sigma.size(); ++s) {
      bool licensed = false;
      if (u.size() == k - 1) {
        Factor f(u.begin(), u.end());
        f.push_back(s);
        licensed = g.factors.count(f) != 0;
      } else if (u.size() == k - 2) {
        Factor f{kLeftBound};
        f.insert(f.end(), u.begin(), u.end());
        f.push_back(s);
        licensed = g.factors.count(f) != 0;
      } else {
        Factor p{kLeftBound};
        p.insert(p.end(), u.begin(), u.end());
        p.push_back(s);
        licensed = any_factor_with_prefix(g.factors, p);
      }
      if (licensed) m.out[i].push_back({s, m.id.at(scaffold_next(u, s, k))});
    }
  }
  return m;
}
}  // namespace detail

// Deterministic FSA with L = L(g), built by pruning the SL_k scaffold:
// a transition is kept iff its k-factor is licensed (with left-anchored
// factors governing the states near the start), a state is final iff its
// right-anchored factor is in the grammar.  Unreachable states are trimmed.
inline Fsa grammar_to_fsa(const SlGrammar& g) {
  auto m = detail::license_scaffold(g);

  // Trim to reachable states (breadth-first from the empty-word state).
  std::vector<StateId> order;
  std::map<StateId, StateId> rename;
  order.push_back(0);
  rename.emplace(0, 0);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto [s, t] : m.out[order[i]])
      if (!rename.count(t)) {
        rename.emplace(t, static_cast<StateId>(order.size()));
        order.push_back(t);
      }

  std::vector<std::string> names;
  for (StateId old : order) names.push_back(detail::word_name(*g.sigma, m.words[old]));
  Semiautomaton sa(g.sigma, std::move(names));
  std::vector<StateId> finals;
  for (StateId i = 0; i < order.size(); ++i) {
    if (m.final_state[order[i]]) finals.push_back(i);
    for (auto [s, t] : m.out[order[i]]) sa.add_transition(i, s, rename.at(t));
  }
  return Fsa(std::move(sa), {0}, std::move(finals));
}

// All boundary-marked k-factors realized by L(fsa), collected by walking
// the trimmed graph of the bounded language.  Throws if the factor count
// exceeds the budget (the bound is |Sigma+2|^k; this code is meant for
// desk-scale alphabets).
inline FactorSet factors_of_language(const Fsa& fsa, std::uint32_t k,
                                     std::size_t budget = 2000000) {
  if (k < 1) throw std::invalid_argument("factors_of_language: k must be >= 1");
  const std::size_t n = fsa.sa.state_count();
  const std::size_t nsym = fsa.sa.alphabet()->size();

  // Useful = reachable and co-reachable.
  std::vector<bool> reach(n, false), coreach(n, false);
  {
    std::queue<StateId> bfs;
    for (StateId q : fsa.initial)
      if (!reach[q]) {
        reach[q] = true;
        bfs.push(q);
      }
    while (!bfs.empty()) {
      StateId q = bfs.front();
      bfs.pop();
      for (SymbolId s = 0; s < nsym; ++s)
        if (auto t = fsa.sa.target(q, s))
          if (!reach[*t]) {
            reach[*t] = true;
            bfs.push(*t);
          }
    }
    std::vector<std::vector<StateId>> pre(n);
    for (StateId q = 0; q < n; ++q)
      for (SymbolId s = 0; s < nsym; ++s)
        if (auto t = fsa.sa.target(q, s)) pre[*t].push_back(q);
    std::queue<StateId> rbfs;
    for (StateId q : fsa.final_states)
      if (!coreach[q]) {
        coreach[q] = true;
        rbfs.push(q);
      }
    while (!rbfs.empty()) {
      StateId q = rbfs.front();
      rbfs.pop();
      for (StateId p : pre[q])
        if (!coreach[p]) {
          coreach[p] = true;
          rbfs.push(p);
        }
    }
  }
  auto useful = [&](StateId q) { return reach[q] && coreach[q]; };

  // Graph of the bounded language: node 0 = source, node 1 = sink,
  // node q+2 = automaton state q.
  std::vector<std::vector<std::pair<FactorSym, std::size_t>>> adj(n + 2);
  for (StateId q : fsa.initial)
    if (useful(q)) adj[0].push_back({kLeftBound, q + 2});
  for (StateId q : fsa.final_states)
    if (useful(q)) adj[q + 2].push_back({kRightBound, 1});
  for (StateId q = 0; q < n; ++q) {
    if (!useful(q)) continue;
    for (SymbolId s = 0; s < nsym; ++s)
      if (auto t = fsa.sa.target(q, s))
        if (useful(*t)) adj[q + 2].push_back({static_cast<FactorSym>(s), *t + 2});
  }

  // Complete windows: all length-k label strings along the graph.
  std::vector<std::set<Factor>> cur(n + 2), next(n + 2);
  for (auto& c : cur) c.insert(Factor{});
  std::size_t total = 0;
  for (std::uint32_t step = 0; step < k; ++step) {
    for (auto& s : next) s.clear();
    total = 0;
    for (std::size_t v = 0; v < adj.size(); ++v)
      for (auto [label, t] : adj[v])
        for (const Factor& f : cur[t]) {
          Factor g{label};
          g.insert(g.end(), f.begin(), f.end());
          next[v].insert(std::move(g));
          if (++total > budget) throw std::runtime_error("factors_of_language: budget exceeded");
        }
    cur.swap(next);
  }
  FactorSet out;
  for (const auto& s : cur)
    for (const Factor& f : s) out.insert(f);

  // Short bounded words: accepted words of length <= k-2 contribute
  // themselves, fully marked.
  std::vector<Word> frontier{{}};
  for (std::uint32_t len = 0; len + 2 <= k; ++len) {
    std::vector<Word> grown;
    for (const Word& w : frontier) {
      if (accepts(fsa, w)) {
        Factor f{kLeftBound};
        f.insert(f.end(), w.begin(), w.end());
        f.push_back(kRightBound);
        out.insert(std::move(f));
      }
      if (len + 3 <= k)
        for (SymbolId s = 0; s < nsym; ++s) {
          Word w2 = w;
          w2.push_back(s);
          grown.push_back(std::move(w2));
          if (grown.size() > budget) throw std::runtime_error("factors_of_language: budget exceeded");
        }
    }
    frontier.swap(grown);
  }
  return out;
}

// Decision procedure for strict locality.  The canonical machine gives the
// search bound (max final-state level + 1); for each k up to the bound the
// extracted k-factor grammar is tested for language equality.  The SL
// hierarchy makes the bounded search exact: if no k up to the bound works,
// the language is not strictly local at all.  Convention: the empty
// language is SL_1 via the empty grammar.
struct SlDecision {
  std::optional<std::uint32_t> k;  // smallest witness, if strictly local
  std::uint32_t bound = 0;
  std::optional<SlGrammar> grammar;
};

inline SlDecision is_strictly_local(const Fsa& fsa) {
  SlDecision d;
  Fsa canon = minimize(fsa);
  if (canon.final_states.empty()) {
    d.k = 1;
    d.bound = 1;
    d.grammar = SlGrammar(1, fsa.sa.alphabet());
    return d;
  }
  LevelMap lvl = levels(canon);
  std::uint32_t k_max = 0;
  for (StateId q : canon.final_states) k_max = std::max(k_max, lvl.at(q));
  k_max += 1;
  d.bound = k_max;

  for (std::uint32_t k = 1; k <= k_max; ++k) {
    SlGrammar g(k, fsa.sa.alphabet(), factors_of_language(canon, k));
    if (language_equivalent(grammar_to_fsa(g), canon)) {
      d.k = k;
      d.grammar = std::move(g);
      return d;
    }
  }
  return d;
}

// A finite set of words of L(g) whose factors jointly cover every useful
// factor of the grammar, so any presentation containing it drives the
// learner to a hypothesis with the same language.  Each factor gets its
// shortest witness (ties broken by symbol order); factors realized by no
// word of L(g) are reported, not covered.
struct CharacteristicSample {
  std::vector<Word> words;            // sorted by length, then symbol order
  std::vector<Factor> useless;        // factors no word of L(g) realizes
};

inline CharacteristicSample characteristic_sample(const SlGrammar& g) {
  auto m = detail::license_scaffold(g);
  const std::size_t n = m.words.size();

  // Shortest (then lexicographically smallest) access word per state.
  // Breadth-first expansion in symbol order visits states in exactly that
  // order, so the first access found is the canonical one.
  std::vector<std::optional<Word>> access(n);
  {
    std::queue<StateId> bfs;
    access[0] = Word{};
    bfs.push(0);
    while (!bfs.empty()) {
      StateId q = bfs.front();
      bfs.pop();
      for (auto [s, t] : m.out[q])
        if (!access[t]) {
          Word w = *access[q];
          w.push_back(s);
          access[t] = std::move(w);
          bfs.push(t);
        }
    }
  }

  // Distance to a final state, then greedy lexicographically minimal
  // completion along distance-decreasing edges.
  std::vector<std::uint32_t> dist(n, kNoState);
  {
    std::vector<std::vector<StateId>> pre(n);
    for (StateId q = 0; q < n; ++q)
      for (auto [s, t] : m.out[q]) pre[t].push_back(q);
    std::queue<StateId> bfs;
    for (StateId q = 0; q < n; ++q)
      if (m.final_state[q]) {
        dist[q] = 0;
        bfs.push(q);
      }
    while (!bfs.empty()) {
      StateId q = bfs.front();
      bfs.pop();
      for (StateId p : pre[q])
        if (dist[p] == kNoState) {
          dist[p] = dist[q] + 1;
          bfs.push(p);
        }
    }
  }
  auto completion = [&](StateId q) {
    Word w;
    while (dist[q] != 0) {
      bool advanced = false;
      for (auto [s, t] : m.out[q])
        if (dist[t] != kNoState && dist[t] + 1 == dist[q]) {
          w.push_back(s);
          q = t;
          advanced = true;
          break;
        }
      if (!advanced) throw std::logic_error("characteristic_sample: broken distance map");
    }
    return w;
  };

  CharacteristicSample cs;
  std::set<Word> picked;
  for (const Factor& f : g.factors) {
    std::optional<Word> witness;
    bool left = f.front() == kLeftBound;
    bool right = f.back() == kRightBound;

    if (g.k == 1) {
      // Single-state machine: every factor is witnessed iff L is nonempty,
      // with the boundary factors witnessed by the shortest word.
      if (m.final_state[0]) {
        if (left || right)
          witness = Word{};
        else
          witness = Word{static_cast<SymbolId>(f[0])};
      }
    } else if (left && right) {
      Word w(f.begin() + 1, f.end() - 1);
      auto it = m.id.find(w);
      if (it != m.id.end() && access[it->second]) witness = w;
    } else if (right) {
      Word u(f.begin(), f.end() - 1);
      StateId q = m.id.at(u);
      if (access[q]) witness = *access[q];
    } else {
      Word u;
      if (left)
        u.assign(f.begin() + 1, f.end() - 1);
      else
        u.assign(f.begin(), f.end() - 1);
      SymbolId s = static_cast<SymbolId>(f.back());
      StateId from = m.id.at(u);
      StateId to = m.id.at(detail::scaffold_next(u, s, g.k));
      if (access[from] && dist[to] != kNoState) {
        Word w = *access[from];
        w.push_back(s);
        Word tail = completion(to);
        w.insert(w.end(), tail.begin(), tail.end());
        witness = std::move(w);
      }
    }

    if (witness)
      picked.insert(std::move(*witness));
    else
      cs.useless.push_back(f);
  }

  cs.words.assign(picked.begin(), picked.end());
  std::sort(cs.words.begin(), cs.words.end(), [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return cs;
}

// Rendering of factors with the fixed ASCII escapes '<' and '>' for the
// boundary markers; symbol names are concatenated.
inline std::string render_factor(const Alphabet& sigma, const Factor& f) {
  std::string out;
  for (FactorSym s : f) {
    if (s == kLeftBound)
      out += '<';
    else if (s == kRightBound)
      out += '>';
    else
      out += sigma.name(static_cast<SymbolId>(s));
  }
  return out;
}

// Parses a rendered factor.  The interior is segmented against the symbol
// names; a string with no segmentation, or more than one, is rejected.
inline Factor parse_factor(const Alphabet& sigma, const std::string& text) {
  std::string body = text;
  bool left = false, right = false;
  if (!body.empty() && body.front() == '<') {
    left = true;
    body.erase(body.begin());
  }
  if (!body.empty() && body.back() == '>') {
    right = true;
    body.pop_back();
  }
  // Count segmentations; keep one parse.
  std::size_t len = body.size();
  std::vector<std::uint64_t> ways(len + 1, 0);
  std::vector<std::pair<std::size_t, SymbolId>> back(len + 1, {0, 0});
  ways[0] = 1;
  for (std::size_t i = 0; i < len; ++i) {
    if (!ways[i]) continue;
    for (SymbolId s = 0; s < sigma.size(); ++s) {
      const std::string& name = sigma.name(s);
      if (body.compare(i, name.size(), name) == 0) {
        if (ways[i + name.size()] == 0) back[i + name.size()] = {i, s};
        ways[i + name.size()] += ways[i];
      }
    }
  }
  if (ways[len] == 0) throw std::invalid_argument("factor '" + text + "': cannot segment over alphabet");
  if (ways[len] > 1) throw std::invalid_argument("factor '" + text + "': ambiguous segmentation");
  Word interior(0);
  for (std::size_t i = len; i > 0;) {
    auto [j, s] = back[i];
    interior.push_back(s);
    i = j;
  }
  std::reverse(interior.begin(), interior.end());

  Factor f;
  if (left) f.push_back(kLeftBound);
  for (SymbolId s : interior) f.push_back(s);
  if (right) f.push_back(kRightBound);
  return f;
}

}  // namespace adversynth
