#pragma once

// JSON document formats.  All writers emit keys in a fixed order and sort
// every list, so identical objects serialize to identical bytes.
//
// Automaton document:
//   { "alphabet": [..], "states": [..], "initial": [..], "final": [..],
//     "transitions": [{"from": .., "label": .., "to": ..}, ..] }
// initial/final are omitted for bare semiautomata.
//
// Grammar document:
//   { "k": .., "alphabet": [..], "factors": ["<aa", "aab", "ba>", ..] }
// with '<' and '>' as the boundary markers.
//
// Game document: explicit state tuples plus the switching-function bitmap;
// see save_game below.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adversynth/automata.hpp"
#include "adversynth/game.hpp"
#include "adversynth/inference.hpp"

namespace adversynth {

using Json = nlohmann::ordered_json;

// --- automata ---------------------------------------------------------------

inline Json automaton_to_json(const Semiautomaton& sa, const std::vector<StateId>* initial,
                              const std::vector<StateId>* final_states) {
  Json doc;
  doc["alphabet"] = sa.alphabet()->names();
  doc["states"] = sa.state_names();
  if (initial) {
    std::vector<std::string> names;
    for (StateId q : *initial) names.push_back(sa.state_name(q));
    doc["initial"] = names;
  }
  if (final_states) {
    std::vector<std::string> names;
    for (StateId q : *final_states) names.push_back(sa.state_name(q));
    doc["final"] = names;
  }
  Json trans = Json::array();
  for (StateId q = 0; q < sa.state_count(); ++q)
    for (SymbolId s = 0; s < sa.alphabet()->size(); ++s)
      if (auto t = sa.target(q, s)) {
        Json e;
        e["from"] = sa.state_name(q);
        e["label"] = sa.alphabet()->name(s);
        e["to"] = sa.state_name(*t);
        trans.push_back(std::move(e));
      }
  doc["transitions"] = std::move(trans);
  return doc;
}

inline Json to_json(const Fsa& fsa) {
  return automaton_to_json(fsa.sa, &fsa.initial, &fsa.final_states);
}
inline Json to_json(const Semiautomaton& sa) { return automaton_to_json(sa, nullptr, nullptr); }

struct LoadedAutomaton {
  Semiautomaton sa;
  std::optional<std::vector<StateId>> initial;
  std::optional<std::vector<StateId>> final_states;

  Fsa fsa() const {
    if (!initial) throw std::invalid_argument("automaton document: missing \"initial\"");
    return Fsa(sa, *initial, final_states.value_or(std::vector<StateId>{}));
  }
};

inline LoadedAutomaton automaton_from_json(const Json& doc) {
  if (!doc.contains("alphabet") || !doc.contains("states") || !doc.contains("transitions"))
    throw std::invalid_argument("automaton document: missing alphabet/states/transitions");
  AlphabetPtr alphabet = make_alphabet(doc.at("alphabet").get<std::vector<std::string>>());
  Semiautomaton sa(alphabet, doc.at("states").get<std::vector<std::string>>());
  for (const Json& e : doc.at("transitions"))
    sa.add_transition(sa.require_state(e.at("from").get<std::string>()),
                      alphabet->require(e.at("label").get<std::string>()),
                      sa.require_state(e.at("to").get<std::string>()));
  LoadedAutomaton out{std::move(sa), std::nullopt, std::nullopt};
  auto read_states = [&](const char* key) -> std::optional<std::vector<StateId>> {
    if (!doc.contains(key)) return std::nullopt;
    std::vector<StateId> ids;
    for (const Json& n : doc.at(key)) ids.push_back(out.sa.require_state(n.get<std::string>()));
    return ids;
  };
  out.initial = read_states("initial");
  out.final_states = read_states("final");
  return out;
}

// --- grammars ---------------------------------------------------------------

inline Json to_json(const SlGrammar& g) {
  Json doc;
  doc["k"] = g.k;
  doc["alphabet"] = g.sigma->names();
  std::vector<std::string> rendered;
  for (const Factor& f : g.factors) {
    std::string text = render_factor(*g.sigma, f);
    if (parse_factor(*g.sigma, text) != f)
      throw std::runtime_error("grammar: alphabet is not concatenation-safe for files");
    rendered.push_back(std::move(text));
  }
  std::sort(rendered.begin(), rendered.end());
  doc["factors"] = std::move(rendered);
  return doc;
}

inline SlGrammar grammar_from_json(const Json& doc) {
  AlphabetPtr sigma = make_alphabet(doc.at("alphabet").get<std::vector<std::string>>());
  std::uint32_t k = doc.at("k").get<std::uint32_t>();
  FactorSet factors;
  for (const Json& f : doc.at("factors")) factors.insert(parse_factor(*sigma, f.get<std::string>()));
  return SlGrammar(k, std::move(sigma), std::move(factors));
}

// --- games ------------------------------------------------------------------

inline Json to_json(const GameAutomaton& g) {
  Json doc;
  const Alphabet& lambda = *g.lambda();
  std::vector<std::string> p1_syms, p2_syms;
  for (SymbolId s = 0; s < lambda.size(); ++s)
    (s < g.p1_sym_count() ? p1_syms : p2_syms).push_back(lambda.name(s));
  doc["p1_symbols"] = p1_syms;
  doc["p2_symbols"] = p2_syms;
  doc["epsilon"] = g.epsilon() ? Json(lambda.name(*g.epsilon())) : Json(nullptr);
  doc["p1_states"] = g.p1_names();
  doc["p2_states"] = g.p2_names();
  doc["spec_states"] = g.spec_names();

  Json states = Json::array();
  for (StateId q = 0; q < g.state_count(); ++q) {
    const GameVertex& v = g.vertex(q);
    Json s;
    s["q1"] = g.p1_names().at(v.q1);
    s["q2"] = g.p2_names().at(v.q2);
    s["turn"] = v.p1_turn ? 1 : 0;
    s["qs"] = v.qs == kNoState ? Json(nullptr) : Json(g.spec_names().at(v.qs));
    states.push_back(std::move(s));
  }
  doc["states"] = std::move(states);
  doc["initial"] = g.initials();
  std::vector<StateId> finals;
  for (StateId q = 0; q < g.state_count(); ++q)
    if (g.is_final(q)) finals.push_back(q);
  doc["final"] = finals;

  Json trans = Json::array();
  for (const GameEdge& e : g.all_edges()) {
    Json t;
    t["from"] = e.from;
    t["label"] = lambda.name(e.sym);
    t["to"] = e.to;
    trans.push_back(std::move(t));
  }
  doc["transitions"] = std::move(trans);

  Json sw = Json::object();
  for (StateId q2 = 0; q2 < g.p2_names().size(); ++q2) {
    std::vector<int> bits;
    for (SymbolId s = 0; s < g.sw().sym_count(); ++s)
      bits.push_back(g.sw().enabled(q2, s) ? 1 : 0);
    sw[g.p2_names().at(q2)] = bits;
  }
  doc["sw"] = std::move(sw);
  return doc;
}

inline GameAutomaton game_from_json(const Json& doc) {
  auto p1_syms = doc.at("p1_symbols").get<std::vector<std::string>>();
  auto p2_syms = doc.at("p2_symbols").get<std::vector<std::string>>();
  std::vector<std::string> names = p1_syms;
  names.insert(names.end(), p2_syms.begin(), p2_syms.end());
  AlphabetPtr lambda = make_alphabet(names);
  std::uint32_t n1 = static_cast<std::uint32_t>(p1_syms.size());

  std::optional<SymbolId> eps;
  if (!doc.at("epsilon").is_null()) eps = lambda->require(doc.at("epsilon").get<std::string>());

  auto p1_states = doc.at("p1_states").get<std::vector<std::string>>();
  auto p2_states = doc.at("p2_states").get<std::vector<std::string>>();
  auto spec_states = doc.at("spec_states").get<std::vector<std::string>>();
  auto index_of = [](const std::vector<std::string>& v, const std::string& n) {
    for (StateId i = 0; i < v.size(); ++i)
      if (v[i] == n) return i;
    throw std::invalid_argument("game document: unknown state name '" + n + "'");
  };

  std::vector<GameVertex> states;
  for (const Json& s : doc.at("states")) {
    GameVertex v;
    v.q1 = index_of(p1_states, s.at("q1").get<std::string>());
    v.q2 = index_of(p2_states, s.at("q2").get<std::string>());
    v.p1_turn = s.at("turn").get<int>() == 1;
    v.qs = s.at("qs").is_null() ? kNoState : index_of(spec_states, s.at("qs").get<std::string>());
    states.push_back(v);
  }

  std::vector<GameEdge> edges;
  for (const Json& t : doc.at("transitions"))
    edges.push_back({t.at("from").get<StateId>(), lambda->require(t.at("label").get<std::string>()),
                     t.at("to").get<StateId>()});

  std::optional<SymbolId> eps_local;
  if (eps) eps_local = *eps - n1;
  SwitchingFunction sw(static_cast<std::uint32_t>(p2_states.size()),
                       static_cast<std::uint32_t>(p2_syms.size()), eps_local, false);
  const Json& sw_doc = doc.at("sw");
  for (StateId q2 = 0; q2 < p2_states.size(); ++q2) {
    auto bits = sw_doc.at(p2_states[q2]).get<std::vector<int>>();
    if (bits.size() != p2_syms.size())
      throw std::invalid_argument("game document: switching row length mismatch");
    for (SymbolId s = 0; s < bits.size(); ++s)
      if (bits[s]) sw = sw.updated(q2, s);
  }

  return GameAutomaton::from_parts(lambda, n1, eps, std::move(p1_states), std::move(p2_states),
                                   std::move(spec_states), std::move(states), std::move(edges),
                                   doc.at("initial").get<std::vector<StateId>>(),
                                   doc.at("final").get<std::vector<StateId>>(), std::move(sw));
}

// --- files ------------------------------------------------------------------

inline std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json parse_json_file(const std::string& path) {
  return Json::parse(read_file(path));
}

}  // namespace adversynth
