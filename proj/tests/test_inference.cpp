#include <catch_amalgamated.hpp>

#include "adversynth/inference.hpp"
#include "adversynth/io_json.hpp"
#include "adversynth/rng.hpp"
#include "testutil.hpp"

using namespace adversynth;

namespace {

AlphabetPtr ab() { return testutil::small_alphabet(2); }

// G = {<aa, <ab, aab, aaa, aba, ba>}, the SL3 grammar of a^n b a.
SlGrammar paper_grammar() {
  FactorSet f{{kLeftBound, 0, 0}, {kLeftBound, 0, 1}, {0, 0, 1},
              {0, 0, 0},          {0, 1, 0},          {1, 0, kRightBound}};
  return SlGrammar(3, ab(), std::move(f));
}

Word wd(const std::string& text) {
  Word w;
  for (char c : text) w.push_back(c == 'a' ? 0 : 1);
  return w;
}

Factor fc(const std::string& text) {
  Factor f;
  for (char c : text) {
    if (c == '<')
      f.push_back(kLeftBound);
    else if (c == '>')
      f.push_back(kRightBound);
    else
      f.push_back(c == 'a' ? 0 : 1);
  }
  return f;
}

}  // namespace

TEST_CASE("k-factors of boundary-marked words") {
  FactorSet f = k_factors(wd("aaba"), 3, true);
  CHECK(f == FactorSet{fc("<aa"), fc("aab"), fc("aba"), fc("ba>")});

  CHECK(k_factors(Word{}, 2, true) == FactorSet{fc("<>")});
  CHECK(k_factors(wd("aababa"), 3, true).count(fc("bab")) == 1);

  // Base case without boundaries: a short word is its own factor set.
  CHECK(k_factors(wd("ab"), 3, false) == FactorSet{fc("ab")});
  CHECK_THROWS_AS(k_factors(wd("a"), 0, true), std::invalid_argument);
}

TEST_CASE("string extension learner") {
  LearnerState st{SlGrammar(3, ab()), 0};
  CHECK(st.grammar.factors.empty());  // fresh learner: empty hypothesis

  LearnerState paused = learner_update(st, std::nullopt);
  CHECK(paused.grammar.factors.empty());
  CHECK(paused.items_consumed == 1);

  LearnerState fed = learner_update(paused, wd("aaba"));
  CHECK(fed.grammar.factors == FactorSet{fc("<aa"), fc("aab"), fc("aba"), fc("ba>")});
  CHECK(fed.items_consumed == 2);

  CHECK_THROWS_WITH(learner_update(fed, Word{7}), "unknown adversary action");
}

TEST_CASE("learner hypotheses are monotone") {
  auto rng = substream(21, 0);
  for (int i = 0; i < 40; ++i) {
    std::uniform_int_distribution<std::uint32_t> kd(1, 4);
    LearnerState st{SlGrammar(kd(rng), ab()), 0};
    for (int j = 0; j < 6; ++j) {
      FactorSet before = st.grammar.factors;
      st = learner_update(st, testutil::random_word(rng, 2, 6));
      for (const Factor& f : before) CHECK(st.grammar.factors.count(f) == 1);
    }
  }
}

TEST_CASE("strictly local membership") {
  SlGrammar g = paper_grammar();
  CHECK(sl_membership(g, wd("aaba")));
  CHECK(!sl_membership(g, wd("aababa")));  // the 3-factor bab is missing
  CHECK(sl_membership(g, wd("aba")));
  CHECK(!sl_membership(g, wd("")));

  SlGrammar empty(2, ab());
  CHECK(!sl_membership(empty, Word{}));  // even the empty word needs its factor
}

TEST_CASE("the scaffold for Sigma*") {
  Fsa d3 = build_dk(ab(), 3);
  CHECK(d3.sa.state_count() == 7);
  CHECK(d3.final_states.size() == 7);
  auto id = [&](const std::string& n) { return d3.sa.require_state(n); };
  CHECK(d3.initial == std::vector<StateId>{id("")});
  CHECK(d3.sa.target(id(""), 0) == std::optional<StateId>(id("a")));
  CHECK(d3.sa.target(id(""), 1) == std::optional<StateId>(id("b")));
  CHECK(d3.sa.target(id("aa"), 0) == std::optional<StateId>(id("aa")));
  CHECK(d3.sa.target(id("aa"), 1) == std::optional<StateId>(id("ab")));
  CHECK(d3.sa.target(id("ba"), 1) == std::optional<StateId>(id("ab")));
  CHECK(d3.sa.target(id("bb"), 0) == std::optional<StateId>(id("ba")));

  LevelMap lvl = levels(d3);
  CHECK(lvl.at(id("")) == 0);
  CHECK(lvl.at(id("a")) == 1);
  CHECK(lvl.at(id("b")) == 1);
  CHECK(lvl.at(id("ab")) == 2);

  Fsa d1 = build_dk(ab(), 1);
  CHECK(d1.sa.state_count() == 1);
  CHECK(d1.sa.target(0, 0) == std::optional<StateId>(0));
  CHECK(d1.sa.target(0, 1) == std::optional<StateId>(0));

  Fsa d2 = build_dk(testutil::small_alphabet(1), 2);
  CHECK(d2.sa.state_count() == 2);
  CHECK(d2.sa.target(d2.sa.require_state("a"), 0) ==
        std::optional<StateId>(d2.sa.require_state("a")));
}

TEST_CASE("grammar to FSA reproduces the pruned scaffold") {
  Fsa m = grammar_to_fsa(paper_grammar());
  // States lambda, a, aa, ab, ba; only ba final; six transitions.
  CHECK(m.sa.state_count() == 5);
  auto id = [&](const std::string& n) { return m.sa.require_state(n); };
  CHECK(m.final_states == std::vector<StateId>{id("ba")});
  CHECK(m.sa.transition_count() == 6);
  CHECK(m.sa.target(id(""), 0) == std::optional<StateId>(id("a")));
  CHECK(!m.sa.target(id(""), 1));  // no b out of the start
  CHECK(m.sa.target(id("ab"), 0) == std::optional<StateId>(id("ba")));
  CHECK(enabled(m.sa, id("ba")).empty());

  Fsa empty = grammar_to_fsa(SlGrammar(3, ab()));
  CHECK(empty.final_states.empty());
}

TEST_CASE("grammar machine accepts exactly the membership language") {
  auto rng = substream(22, 0);
  int big_checked = 0;
  for (int i = 0; i < 60; ++i) {
    SlGrammar g = testutil::random_grammar(rng, 4, 3);
    Fsa m = grammar_to_fsa(g);
    // Exhaustive over all words up to k+3.
    std::vector<Word> frontier{{}};
    for (std::uint32_t len = 0; len <= g.k + 3; ++len) {
      std::vector<Word> grown;
      for (const Word& w : frontier) {
        CHECK(accepts(m, w) == sl_membership(g, w));
        for (SymbolId s = 0; s < g.sigma->size(); ++s) {
          Word w2 = w;
          w2.push_back(s);
          grown.push_back(std::move(w2));
        }
      }
      frontier.swap(grown);
    }
    // And a spot check on longer random words.
    for (int j = 0; j < 20; ++j) {
      Word w = testutil::random_word(rng, g.sigma->size(), g.k + 8);
      CHECK(accepts(m, w) == sl_membership(g, w));
      ++big_checked;
    }
  }
  CHECK(big_checked >= 1000);
}

TEST_CASE("strict locality decision") {
  SlDecision d = is_strictly_local(grammar_to_fsa(paper_grammar()));
  REQUIRE(d.k);
  CHECK(*d.k == 3);
  CHECK(d.bound == 4);  // deepest final sits at level 3 in the canonical machine

  SlDecision star = is_strictly_local(build_dk(ab(), 3));
  REQUIRE(star.k);
  CHECK(*star.k == 1);

  // Even number of a's: not strictly local at any width.
  Semiautomaton sa(ab(), {"even", "odd"});
  sa.add_transition(0, 0, 1);
  sa.add_transition(1, 0, 0);
  sa.add_transition(0, 1, 0);
  sa.add_transition(1, 1, 1);
  Fsa parity(std::move(sa), {0}, {0});
  SlDecision none = is_strictly_local(parity);
  CHECK(!none.k);

  // Empty language: strictly local via the empty grammar, by convention.
  Semiautomaton dead(ab(), {"p"});
  Fsa empty(std::move(dead), {0}, {});
  SlDecision e = is_strictly_local(empty);
  REQUIRE(e.k);
  CHECK(*e.k == 1);
  CHECK(e.grammar->factors.empty());
}

TEST_CASE("factor widths above the witness describe the same language") {
  // The SL hierarchy: extracting j-factors for j > k preserves the language.
  auto rng = substream(23, 0);
  for (int i = 0; i < 30; ++i) {
    SlGrammar g = testutil::random_grammar(rng, 3, 3);
    Fsa m = grammar_to_fsa(g);
    for (std::uint32_t j = g.k + 1; j <= g.k + 2; ++j) {
      SlGrammar wider(j, g.sigma, factors_of_language(m, j));
      CHECK(language_equivalent(grammar_to_fsa(wider), m));
    }
  }
}

TEST_CASE("the SL4 regrammaring of a^n b a") {
  SlGrammar g3 = paper_grammar();
  Fsa m = grammar_to_fsa(g3);
  SlGrammar g4(4, g3.sigma, factors_of_language(m, 4));
  CHECK(language_equivalent(grammar_to_fsa(g4), m));

  // The full 4-factor set is the reference six plus the interior aaaa,
  // which every a^n b a with n >= 4 realizes.
  FactorSet printed{fc("<aaa"), fc("<aba"), fc("<aab"), fc("aaba"), fc("aaab"), fc("aba>")};
  FactorSet expect = printed;
  expect.insert(fc("aaaa"));
  CHECK(g4.factors == expect);
}

TEST_CASE("characteristic samples cover exactly the useful factors") {
  SlGrammar g = paper_grammar();
  CharacteristicSample cs = characteristic_sample(g);
  CHECK(cs.useless.empty());
  CHECK(cs.words == std::vector<Word>{wd("aba"), wd("aaba"), wd("aaaba")});

  // Unioned factors of the sample equal the grammar (all factors useful here).
  FactorSet covered;
  for (const Word& w : cs.words)
    for (const Factor& f : k_factors(w, g.k, true)) covered.insert(f);
  CHECK(covered == g.factors);

  // Full factor set over a one-letter alphabet at width 1: the sample is
  // the empty word (for the boundary factors) plus "a".
  auto a1 = testutil::small_alphabet(1);
  SlGrammar full(1, a1, FactorSet{{kLeftBound}, {kRightBound}, {0}});
  CharacteristicSample one = characteristic_sample(full);
  CHECK(one.words == std::vector<Word>{Word{}, Word{0}});

  CHECK(characteristic_sample(SlGrammar(3, ab())).words.empty());
}

TEST_CASE("useless factors are reported, not covered") {
  SlGrammar g = paper_grammar();
  g.factors.insert(fc("bbb"));  // no word of L realizes it
  CharacteristicSample cs = characteristic_sample(g);
  REQUIRE(cs.useless.size() == 1);
  CHECK(cs.useless.front() == fc("bbb"));
}

TEST_CASE("identification in the limit at desk scale") {
  auto rng = substream(24, 0);
  for (int i = 0; i < 30; ++i) {
    SlGrammar g = testutil::random_grammar(rng, 4, 4);
    Fsa target = grammar_to_fsa(g);
    CharacteristicSample cs = characteristic_sample(g);

    std::vector<Word> order = cs.words;
    std::shuffle(order.begin(), order.end(), rng);
    LearnerState st{SlGrammar(g.k, g.sigma), 0};
    for (const Word& w : order) st = learner_update(st, w);
    st = learner_update(st, std::nullopt);  // trailing pause changes nothing
    CHECK(language_equivalent(grammar_to_fsa(st.grammar), target));

    // More data from the language never breaks the hypothesis.
    for (int j = 0; j < 5; ++j) {
      Word w = testutil::random_word(rng, g.sigma->size(), g.k + 4);
      if (sl_membership(g, w)) st = learner_update(st, w);
    }
    CHECK(language_equivalent(grammar_to_fsa(st.grammar), target));
  }
}

TEST_CASE("grammar json round-trip and rendering") {
  SlGrammar g = paper_grammar();
  Json doc = to_json(g);
  CHECK(doc.at("factors") ==
        Json(std::vector<std::string>{"<aa", "<ab", "aaa", "aab", "aba", "ba>"}));
  std::string once = dump_json(doc);
  SlGrammar back = grammar_from_json(Json::parse(once));
  CHECK(back.k == g.k);
  CHECK(back.factors == g.factors);
  CHECK(dump_json(to_json(back)) == once);

  CHECK(parse_factor(*g.sigma, "<>") == fc("<>"));
  CHECK_THROWS_AS(parse_factor(*g.sigma, "<ax"), std::invalid_argument);
}

TEST_CASE("malformed factors are rejected") {
  CHECK_THROWS_AS(SlGrammar(3, ab(), FactorSet{{0, kLeftBound, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(SlGrammar(3, ab(), FactorSet{{kRightBound, 0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(SlGrammar(2, ab(), FactorSet{{0, 0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(SlGrammar(3, ab(), FactorSet{{0}}), std::invalid_argument);  // short, unmarked

  // The boundary escapes are reserved; alphabets may not claim them.
  CHECK_THROWS_AS(SlGrammar(2, make_alphabet({"a", "<"})), std::invalid_argument);
}
