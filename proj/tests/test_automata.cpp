#include <catch_amalgamated.hpp>

#include "adversynth/automata.hpp"
#include "adversynth/io_json.hpp"
#include "adversynth/rng.hpp"
#include "testutil.hpp"

using namespace adversynth;

namespace {

// The pruned SL3 machine for G = {<aa, <ab, aab, aaa, aba, ba>}:
// states lambda,a,aa,ab,ba; only ba final; language a^n b a.
Fsa anba_machine() {
  auto sigma = make_alphabet({"a", "b"});
  Semiautomaton sa(sigma, {"", "a", "aa", "ab", "ba"});
  sa.add_transition(0, 0, 1);  // ^ -a-> a
  sa.add_transition(1, 0, 2);  // a -a-> aa
  sa.add_transition(1, 1, 3);  // a -b-> ab
  sa.add_transition(2, 0, 2);  // aa -a-> aa
  sa.add_transition(2, 1, 3);  // aa -b-> ab
  sa.add_transition(3, 0, 4);  // ab -a-> ba
  return Fsa(std::move(sa), {0}, {4});
}

Word w(const Fsa& f, const std::string& text) {
  Word out;
  for (char c : text) out.push_back(f.sa.alphabet()->require(std::string(1, c)));
  return out;
}

}  // namespace

TEST_CASE("alphabet ordering and validation") {
  auto a = make_alphabet({"x", "y"});
  CHECK(a->require("x") == 0);
  CHECK(a->require("y") == 1);
  CHECK(!a->find("z"));
  CHECK_THROWS_AS(make_alphabet({"x", "x"}), std::invalid_argument);
}

TEST_CASE("enabled actions") {
  Fsa m = anba_machine();
  StateId start = m.sa.require_state("");
  CHECK(enabled(m.sa, start) == std::vector<SymbolId>{0});  // only 'a'
  StateId ba = m.sa.require_state("ba");
  CHECK(enabled(m.sa, ba).empty());
  CHECK_THROWS_AS(m.sa.require_state("zz"), std::invalid_argument);
}

TEST_CASE("run follows the recursive extension of T") {
  Fsa m = anba_machine();
  auto end = run(m.sa, 0, w(m, "aaba"));
  REQUIRE(end);
  CHECK(m.sa.state_name(*end) == "ba");

  CHECK(run(m.sa, 2, Word{}) == std::optional<StateId>(2));  // empty word
  CHECK(!run(m.sa, 0, w(m, "aabab")));                       // no b out of ba

  CHECK_THROWS_AS(run(m.sa, 0, Word{99}), std::invalid_argument);
}

TEST_CASE("run composes over concatenation") {
  auto rng = substream(11, 0);
  for (int i = 0; i < 50; ++i) {
    Fsa f = testutil::random_fsa(rng, 6, 3);
    Word u = testutil::random_word(rng, 3, 4);
    Word v = testutil::random_word(rng, 3, 4);
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    for (StateId q = 0; q < f.sa.state_count(); ++q) {
      auto mid = run(f.sa, q, u);
      if (!mid) continue;
      CHECK(run(f.sa, q, uv) == run(f.sa, *mid, v));
    }
  }
}

TEST_CASE("levels are breadth-first from the initial set") {
  Fsa m = anba_machine();
  LevelMap lvl = levels(m);
  CHECK(lvl.at(m.sa.require_state("")) == 0);
  CHECK(lvl.at(m.sa.require_state("a")) == 1);
  CHECK(lvl.at(m.sa.require_state("aa")) == 2);
  CHECK(lvl.at(m.sa.require_state("ab")) == 2);
  CHECK(lvl.at(m.sa.require_state("ba")) == 3);

  // All-initial, no transitions: everything at level zero.
  Semiautomaton sa(make_alphabet({"a"}), {"p", "q"});
  Fsa flat(std::move(sa), {0, 1}, {});
  LevelMap all = levels(flat);
  CHECK(all.at(0) == 0);
  CHECK(all.at(1) == 0);
}

TEST_CASE("levels: every reachable state has a predecessor one level down") {
  auto rng = substream(12, 0);
  for (int i = 0; i < 80; ++i) {
    Fsa f = testutil::random_fsa(rng, 8, 3);
    LevelMap lvl = levels(f);
    for (const auto& [q, l] : lvl) {
      if (l == 0) {
        CHECK(f.is_initial(q));
        continue;
      }
      bool found = false;
      for (StateId p = 0; p < f.sa.state_count() && !found; ++p) {
        if (!lvl.count(p) || lvl.at(p) != l - 1) continue;
        for (SymbolId s = 0; s < f.sa.alphabet()->size(); ++s)
          if (f.sa.target(p, s) == std::optional<StateId>(q)) {
            found = true;
            break;
          }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("minimize: canonical machine, idempotent, language preserved") {
  Fsa m = anba_machine();
  Fsa c = minimize(m);
  CHECK(language_equivalent(c, m));
  // a and aa collapse: the canonical machine for a^n b a has 4 states.
  CHECK(c.sa.state_count() == 4);
  Fsa cc = minimize(c);
  CHECK(cc.sa.state_count() == c.sa.state_count());

  auto rng = substream(13, 0);
  for (int i = 0; i < 60; ++i) {
    Fsa f = testutil::random_fsa(rng, 7, 2);
    Fsa cf = minimize(f);
    CHECK(language_equivalent(f, cf));
    CHECK(minimize(cf).sa.state_count() == cf.sa.state_count());
  }
}

TEST_CASE("minimize: empty language convention") {
  Semiautomaton sa(make_alphabet({"a"}), {"p"});
  Fsa empty(std::move(sa), {0}, {});
  Fsa c = minimize(empty);
  CHECK(c.sa.state_count() == 1);
  CHECK(c.final_states.empty());
  CHECK(c.initial == std::vector<StateId>{0});
  CHECK(c.sa.transition_count() == 0);
}

TEST_CASE("minimize handles initial sets") {
  // Two initials that immediately diverge; the language is the union.
  auto sigma = make_alphabet({"a"});
  Semiautomaton sa(sigma, {"p", "q", "hit"});
  sa.add_transition(0, 0, 2);
  Fsa f(std::move(sa), {0, 1}, {2});
  Fsa c = minimize(f);
  CHECK(language_equivalent(c, f));
  CHECK(accepts(f, Word{0}));
  CHECK(!accepts(f, Word{}));
}

TEST_CASE("language equivalence and witnesses") {
  Fsa m = anba_machine();
  CHECK(language_equivalent(m, m));

  // D3 accepts Sigma*, the pruned machine does not: "b" separates them.
  auto sigma = m.sa.alphabet();
  std::vector<std::string> names{"", "a", "b", "aa", "ab", "ba", "bb"};
  Semiautomaton d3(sigma, names);
  auto id = [&](const std::string& n) { return d3.require_state(n); };
  d3.add_transition(id(""), 0, id("a"));
  d3.add_transition(id(""), 1, id("b"));
  d3.add_transition(id("a"), 0, id("aa"));
  d3.add_transition(id("a"), 1, id("ab"));
  d3.add_transition(id("b"), 0, id("ba"));
  d3.add_transition(id("b"), 1, id("bb"));
  d3.add_transition(id("aa"), 0, id("aa"));
  d3.add_transition(id("aa"), 1, id("ab"));
  d3.add_transition(id("ab"), 0, id("ba"));
  d3.add_transition(id("ab"), 1, id("bb"));
  d3.add_transition(id("ba"), 0, id("aa"));
  d3.add_transition(id("ba"), 1, id("bb"));
  d3.add_transition(id("bb"), 0, id("ba"));
  d3.add_transition(id("bb"), 1, id("bb"));
  std::vector<StateId> all(7);
  for (StateId i = 0; i < 7; ++i) all[i] = i;
  Fsa dk(std::move(d3), {id("")}, all);

  CHECK(!language_equivalent(dk, m));
  auto witness = difference_witness(dk, m);
  REQUIRE(witness);
  CHECK(*witness == Word{});  // the empty word already separates the two
  CHECK(accepts(dk, Word{1}));
  CHECK(!accepts(m, Word{1}));  // "b" is accepted only by the scaffold

  Semiautomaton other(make_alphabet({"x"}), {"p"});
  Fsa mismatched(std::move(other), {0}, {});
  CHECK_THROWS_AS(language_equivalent(m, mismatched), std::invalid_argument);
}

TEST_CASE("dot export is deterministic and complete") {
  Fsa m = anba_machine();
  std::string a = to_dot(m, "anba");
  std::string b = to_dot(m, "anba");
  CHECK(a == b);
  CHECK(a.find("doublecircle") != std::string::npos);
  CHECK(a.find("__init0") != std::string::npos);

  Semiautomaton empty_sa(make_alphabet({"a"}), {});
  std::string e = to_dot(empty_sa, nullptr, nullptr, "empty");
  CHECK(e.find("->") == std::string::npos);

  // Fully connected four-room automaton: 4 nodes, 12 labeled edges.
  std::vector<std::string> rooms{"1", "2", "3", "4"};
  Semiautomaton sa(make_alphabet(rooms), rooms);
  for (StateId i = 0; i < 4; ++i)
    for (SymbolId j = 0; j < 4; ++j)
      if (i != j) sa.add_transition(i, j, j);
  std::string dot = to_dot(sa, nullptr, nullptr, "rooms");
  std::size_t edges = 0;
  for (std::size_t pos = dot.find("label=\""); pos != std::string::npos;
       pos = dot.find("label=\"", pos + 1))
    ++edges;
  CHECK(edges == 12 + 4);  // 12 edge labels + 4 node labels
}

TEST_CASE("automaton json round-trip is lossless") {
  Fsa m = anba_machine();
  std::string once = dump_json(to_json(m));
  LoadedAutomaton back = automaton_from_json(Json::parse(once));
  std::string twice = dump_json(to_json(back.fsa()));
  CHECK(once == twice);

  auto rng = substream(14, 0);
  for (int i = 0; i < 20; ++i) {
    Fsa f = testutil::random_fsa(rng, 6, 3);
    std::string d1 = dump_json(to_json(f));
    std::string d2 = dump_json(to_json(automaton_from_json(Json::parse(d1)).fsa()));
    CHECK(d1 == d2);
  }

  // Semiautomaton documents carry no initial/final keys.
  Json sa_doc = to_json(m.sa);
  CHECK(!sa_doc.contains("initial"));
  CHECK(!sa_doc.contains("final"));
  CHECK_THROWS_AS(automaton_from_json(sa_doc).fsa(), std::invalid_argument);
}

TEST_CASE("determinism is enforced by construction") {
  auto sigma = make_alphabet({"a"});
  Semiautomaton sa(sigma, {"p", "q"});
  sa.add_transition(0, 0, 1);
  CHECK_THROWS_AS(sa.add_transition(0, 0, 0), std::invalid_argument);
  sa.add_transition(0, 0, 1);  // re-adding the same edge is fine
  CHECK(sa.transition_count() == 1);
}
