#pragma once

// Concrete machines: the NLG and NQLG deciders, the Turing-machine head
// simulation, the snowball fight, and the reduction automaton built from them.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "distauto/engine.hpp"
#include "distauto/families.hpp"
#include "distauto/machine.hpp"
#include "distauto/turing.hpp"

namespace distauto {

namespace detail {

inline std::string num(int n) { return std::to_string(mod3(n)); }
inline std::string dir(int d) { return d > 0 ? "+1" : "-1"; }

inline CountAtom atom(std::string pattern, Cmp op, unsigned k) { return CountAtom{std::move(pattern), op, k}; }

inline void add_rule(MachineSpec& s, int prio, std::string source, std::vector<CountAtom> atoms, std::string result) {
  s.rules.push_back(Rule{prio, std::move(source), std::move(atoms), std::move(result)});
}

}  // namespace detail

/// Stable-consensus decider for numbered linear graphs, counting bound 2.
inline DistributedMachine nlg_decider() {
  using namespace detail;
  MachineSpec s;
  s.name = "nlg";
  s.detection = Detection::D;
  s.acceptance = Acceptance::A;
  s.beta = 2;
  s.alphabet = Alphabet::plain;
  for (int n = 0; n < 3; ++n)
    for (int g = 0; g < 2; ++g) s.states.push_back(tuple_state({num(n), std::to_string(g)}));
  s.states.push_back(kBot);
  for (int n = 0; n < 3; ++n) {
    s.init.emplace_back(NodeLabel::plain(n), tuple_state({num(n), "0"}));
    s.accepting.push_back(tuple_state({num(n), "1"}));
    s.rejecting.push_back(tuple_state({num(n), "0"}));
  }
  s.rejecting.push_back(kBot);

  for (int n = 0; n < 3; ++n)
    for (int g = 0; g < 2; ++g) {
      std::string q = tuple_state({num(n), std::to_string(g)});
      add_rule(s, 10, q, {atom(tuple_state({num(n), "*"}), Cmp::ge, 1)}, kBot);
      for (int m = 0; m < 3; ++m) add_rule(s, 10, q, {atom(tuple_state({num(m), "*"}), Cmp::ge, 2)}, kBot);
    }
  add_rule(s, 11, "*", {atom(kBot, Cmp::ge, 1)}, kBot);
  add_rule(s, 20, "(0,0)", {atom("(2,*)", Cmp::eq, 0)}, "(0,1)");
  for (int n = 0; n < 3; ++n) add_rule(s, 30, tuple_state({num(n), "0"}), {atom("(*,1)", Cmp::ge, 1)}, tuple_state({num(n), "1"}));
  return DistributedMachine(std::move(s));
}

/// Stable-consensus decider for numbered quasi-linear graphs, existence detection.
inline DistributedMachine nqlg_decider() {
  using namespace detail;
  MachineSpec s;
  s.name = "nqlg";
  s.detection = Detection::d;
  s.acceptance = Acceptance::A;
  s.beta = 1;
  s.alphabet = Alphabet::plain;
  auto st = [](int n, int stage) { return tuple_state({num(n), std::to_string(stage)}); };
  for (int n = 0; n < 3; ++n)
    for (int g = 0; g < 3; ++g) s.states.push_back(st(n, g));
  s.states.push_back(kBot);
  for (int n = 0; n < 3; ++n) {
    s.init.emplace_back(NodeLabel::plain(n), st(n, 0));
    s.accepting.push_back(st(n, 2));
    s.rejecting.push_back(st(n, 0));
  }
  s.rejecting.push_back(kBot);

  for (int n = 0; n < 3; ++n)
    for (int g = 0; g < 3; ++g) add_rule(s, 10, st(n, g), {atom(tuple_state({num(n), "*"}), Cmp::ge, 1)}, kBot);
  add_rule(s, 11, "*", {atom(kBot, Cmp::ge, 1)}, kBot);
  add_rule(s, 20, st(0, 0), {atom("(2,*)", Cmp::eq, 0)}, st(0, 1));
  for (int n = 0; n < 3; ++n) {
    add_rule(s, 30, st(n, 0), {atom(st(n - 1, 1), Cmp::ge, 1), atom(st(n + 1, 1), Cmp::eq, 0)}, st(n, 1));
    add_rule(s, 30, st(n, 0), {atom(st(n + 1, 1), Cmp::ge, 1)}, kBot);
  }
  for (int n = 0; n < 3; ++n) add_rule(s, 40, st(n, 1), {atom(tuple_state({num(n + 1), "*"}), Cmp::eq, 0)}, st(n, 2));
  for (int n = 0; n < 3; ++n) {
    add_rule(s, 50, st(n, 1), {atom(st(n + 1, 2), Cmp::ge, 1), atom(st(n - 1, 2), Cmp::eq, 0)}, st(n, 2));
    add_rule(s, 50, st(n, 1), {atom(st(n - 1, 2), Cmp::ge, 1)}, kBot);
  }
  return DistributedMachine(std::move(s));
}

namespace detail {

inline std::string head_mode(int d) { return d == 0 ? "H" : d > 0 ? "H+" : "H-"; }

}  // namespace detail

/// Halting-acceptance machine that runs `t` on a numbered line, one tape cell
/// per node; one TM step takes two synchronous steps.
inline DistributedMachine tm_head_machine(const TuringMachine& t) {
  using namespace detail;
  MachineSpec s;
  s.name = "tm-head(" + t.name() + ")";
  s.detection = Detection::d;
  s.acceptance = Acceptance::a;
  s.beta = 1;
  s.alphabet = Alphabet::plain;
  const int G = static_cast<int>(t.symbol_count()), Q = static_cast<int>(t.state_count());
  const std::string blank = t.symbol_name(t.blank());
  auto cell = [&](int g, int n) { return tuple_state({t.symbol_name(g), num(n)}); };
  auto head = [&](int g, int n, int q, int d) {
    return tuple_state({t.symbol_name(g), num(n), t.state_name(q), head_mode(d)});
  };
  auto fresh = [&](int g, int n) { return tuple_state({"o", t.symbol_name(g), num(n)}); };

  for (int g = 0; g < G; ++g)
    for (int n = 0; n < 3; ++n) s.states.push_back(cell(g, n));
  for (int g = 0; g < G; ++g)
    for (int n = 0; n < 3; ++n)
      for (int q = 0; q < Q; ++q)
        for (int d : {0, 1, -1}) s.states.push_back(head(g, n, q, d));
  for (int g = 0; g < G; ++g)
    for (int n = 0; n < 3; ++n) s.states.push_back(fresh(g, n));
  s.states.push_back(kCheck);
  s.states.push_back(kBot);
  for (int n = 0; n < 3; ++n) s.init.emplace_back(NodeLabel::plain(n), fresh(t.blank(), n));
  s.accepting.push_back(kCheck);
  s.rejecting.push_back(kBot);

  add_rule(s, 10, fresh(t.blank(), 0), {atom("(o,*,2)", Cmp::eq, 0)}, head(t.blank(), 0, t.initial(), 0));
  for (int n = 0; n < 3; ++n) add_rule(s, 20, fresh(t.blank(), n), {}, cell(t.blank(), n));
  for (int g = 0; g < G; ++g)
    for (int n = 0; n < 3; ++n)
      for (int q = 0; q < Q; ++q)
        if (const auto& a = t.action(q, g)) add_rule(s, 30, head(g, n, q, 0), {}, head(a->symbol, n, a->state, a->move));
  for (int g = 0; g < G; ++g)
    for (int n = 0; n < 3; ++n)
      for (int q = 0; q < Q; ++q)
        for (int d : {1, -1})
          add_rule(s, 31, head(g, n, q, d), {atom(tuple_state({"*", num(n + d)}), Cmp::ge, 1)}, cell(g, n));
  for (int g = 0; g < G; ++g)
    for (int n = 0; n < 3; ++n)
      for (int q = 0; q < Q; ++q)
        for (int d : {1, -1})
          add_rule(s, 32, cell(g, n),
                   {atom(tuple_state({"*", num(n - d), t.state_name(q), head_mode(d)}), Cmp::ge, 1)}, head(g, n, q, 0));
  for (int g = 0; g < G; ++g)
    for (int n = 0; n < 3; ++n)
      for (int q = 0; q < Q; ++q)
        if (!t.action(q, g)) add_rule(s, 40, head(g, n, q, 0), {}, kCheck);
  for (int g = 0; g < G; ++g)
    for (int n = 0; n < 3; ++n)
      for (int q = 0; q < Q; ++q)
        for (int d : {1, -1})
          add_rule(s, 41, head(g, n, q, d), {atom(tuple_state({"*", num(n + d)}), Cmp::eq, 0)}, kBot);
  add_rule(s, 50, "*\\CHECK\\BOT", {atom(kCheck, Cmp::ge, 1)}, kCheck);
  add_rule(s, 50, "*\\CHECK\\BOT", {atom(kBot, Cmp::ge, 1)}, kBot);
  return DistributedMachine(std::move(s));
}

/// Node order v_0 .. v_{n-1} of a numbered linear graph, origin first.
inline std::vector<NodeId> nlg_order(const LabelledGraph& g) {
  FamilyReport r = classify(g);
  if (!r.in(Family::NLG) && !r.in(Family::SFNLG)) throw std::invalid_argument("graph is not a numbered linear graph");
  LabelledGraph p = g.alphabet() == Alphabet::plain ? g : project_labels(g);
  FamilyReport pr = classify(p);
  auto dist = dist_from_set(p, *pr.origin_set);
  std::vector<NodeId> order(g.size());
  for (NodeId v = 0; v < g.size(); ++v) order.at(dist[v]) = v;
  return order;
}

/// Head-machine configuration that represents the TM configuration `c`.
inline Configuration encode_tm_config(const DistributedMachine& head, const TuringMachine& t, const TMConfig& c,
                                      const LabelledGraph& g) {
  if (g.size() < c.tape.size())
    throw std::invalid_argument("encode_tm_config: graph of length " + std::to_string(g.size()) +
                                " is shorter than the tape word (" + std::to_string(c.tape.size()) + ")");
  auto order = nlg_order(g);
  Configuration out;
  out.states.resize(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    int sym = i < c.tape.size() ? c.tape[i] : t.blank();
    std::vector<std::string> f{t.symbol_name(sym), std::to_string(i % 3)};
    if (i == c.head) {
      f.push_back(t.state_name(c.state));
      f.push_back("H");
    }
    auto id = head.find_state(tuple_state(f));
    if (!id) throw std::invalid_argument("encode_tm_config: machine has no state " + tuple_state(f));
    out[order[i]] = *id;
  }
  return out;
}

/// Halting-acceptance snowball fight on snowball-labelled graphs, counting bound 2.
inline DistributedMachine snowball_machine() {
  using namespace detail;
  MachineSpec s;
  s.name = "snowball";
  s.detection = Detection::D;
  s.acceptance = Acceptance::a;
  s.beta = 2;
  s.alphabet = Alphabet::snowball;
  auto lam = [](int n, int d, int b) { return tuple_state({num(n), dir(d), std::to_string(b)}); };
  auto fresh = [](int n, int d, int b) { return tuple_state({"o", num(n), dir(d), std::to_string(b)}); };
  for (int n = 0; n < 3; ++n)
    for (int d : {-1, 1})
      for (int b = 0; b < 2; ++b) s.states.push_back(lam(n, d, b));
  for (int n = 0; n < 3; ++n)
    for (int d : {-1, 1})
      for (int b = 0; b < 2; ++b) {
        s.states.push_back(fresh(n, d, b));
        s.init.emplace_back(NodeLabel::fight(n, d, b), fresh(n, d, b));
      }
  s.states.push_back(kCheck);
  s.states.push_back(kBox);
  s.states.push_back(kBot);
  s.accepting.push_back(kCheck);
  s.rejecting.push_back(kBot);

  const std::vector<CountAtom> calm{atom(kCheck, Cmp::eq, 0), atom(kBox, Cmp::eq, 0)};
  auto guarded = [&](std::vector<CountAtom> extra) {
    std::vector<CountAtom> out = calm;
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
  };

  for (int n = 0; n < 3; ++n)
    for (int d : {-1, 1})
      for (int b = 0; b < 2; ++b) {
        add_rule(s, 10, fresh(n, d, b), {atom("(o," + num(n) + ",*,*)", Cmp::ge, 1)}, kBot);
        for (int m = 0; m < 3; ++m) add_rule(s, 10, fresh(n, d, b), {atom("(o," + num(m) + ",*,*)", Cmp::ge, 2)}, kBot);
      }
  add_rule(s, 11, "*\\CHECK", {atom(kBot, Cmp::ge, 1)}, kBot);
  for (int n = 0; n < 3; ++n)
    for (int d : {-1, 1}) {
      // holders must have no holding neighbour, else two adjacent balls can face each other forever
      add_rule(s, 20, fresh(n, d, 1), guarded({atom("(o,*,*,1)", Cmp::eq, 0)}), lam(n, d, 1));
      add_rule(s, 20, fresh(n, d, 0), guarded({atom("(o,*,*,1)", Cmp::ge, 2)}), lam(n, d, 0));
      for (int b = 0; b < 2; ++b) add_rule(s, 21, fresh(n, d, b), calm, kBot);
    }
  for (int n = 0; n < 3; ++n)
    for (int d : {-1, 1}) {
      add_rule(s, 30, lam(n, d, 1), guarded({atom("(" + num(n + d) + ",*,0)", Cmp::ge, 1)}), lam(n, d, 0));
      add_rule(s, 31, lam(n, d, 0), guarded({atom(lam(n + d, -d, 1), Cmp::ge, 1)}), lam(n, -d, 1));
      add_rule(s, 32, lam(n, d, 0), guarded({atom(lam(n + d, -d, 1), Cmp::eq, 0), atom(lam(n - d, d, 1), Cmp::ge, 1)}),
               kBot);
    }
  add_rule(s, 40, lam(0, -1, 1), {atom("(2,*,*)", Cmp::eq, 0)}, kBox);
  for (int n = 0; n < 3; ++n)
    for (int d : {-1, 1})
      if (!(n == 0 && d == -1)) add_rule(s, 41, lam(n, d, 1), {atom("(" + num(n + d) + ",*,*)", Cmp::eq, 0)}, kBot);
  for (int n = 0; n < 3; ++n)
    for (int d : {-1, 1})
      for (int b = 0; b < 2; ++b) {
        add_rule(s, 42, lam(n, d, b), {atom(kBox, Cmp::ge, 1), atom("(" + num(n + 1) + ",*,*)", Cmp::ge, 1)}, kBox);
        add_rule(s, 43, lam(n, d, b), {atom(kBox, Cmp::ge, 1), atom("(" + num(n + 1) + ",*,*)", Cmp::eq, 0)}, kCheck);
      }
  add_rule(s, 44, kBox, {atom(kCheck, Cmp::ge, 1)}, kCheck);
  add_rule(s, 44, kBox, {atom("*", Cmp::eq, 0)}, kCheck);
  return DistributedMachine(std::move(s));
}

// ---------------------------------------------------------------- reduction

enum class ReductionClass { DA, dA, Da };

inline std::string_view to_string(ReductionClass c) {
  return c == ReductionClass::DA ? "DA" : c == ReductionClass::dA ? "dA" : "Da";
}

inline ReductionClass parse_reduction_class(std::string_view s) {
  if (s == "DA") return ReductionClass::DA;
  if (s == "dA") return ReductionClass::dA;
  if (s == "Da") return ReductionClass::Da;
  throw std::invalid_argument("unknown reduction class '" + std::string(s) + "' (expected DA, dA or Da)");
}

/// Automaton that accepts some graph iff `t` halts on blank tape.
inline DistributedMachine reduction_automaton(const TuringMachine& t, ReductionClass cls) {
  DistributedMachine head = tm_head_machine(make_t_infinity(t));
  std::string name = "reduce-" + std::string(to_string(cls)) + "(" + t.name() + ")";
  switch (cls) {
    case ReductionClass::DA:
      return DistributedMachine::product(nlg_decider(), head, ProductMode::stable_consensus, name);
    case ReductionClass::dA:
      return DistributedMachine::product(nqlg_decider(), head, ProductMode::stable_consensus, name);
    case ReductionClass::Da:
      return DistributedMachine::product(snowball_machine(), head.adapted(), ProductMode::halting, name);
  }
  throw std::invalid_argument("unknown reduction class");
}

/// Witness family instances the search sweeps, in increasing size.
inline std::vector<LabelledGraph> witness_family(ReductionClass cls, int max_length) {
  std::vector<LabelledGraph> out;
  if (cls == ReductionClass::Da) {
    for (int k = 1; k <= 20 && (1 << k) - 1 <= max_length; ++k) out.push_back(make_harmonious_sfnlg(k));
  } else {
    for (int n = 1; n <= max_length; ++n) out.push_back(make_nlg(n));
  }
  return out;
}

struct SearchResult {
  std::optional<LabelledGraph> graph;
  std::optional<RunResult> run;
  std::vector<std::string> warnings;
};

inline SearchResult find_accepted_graph(const DistributedMachine& m, ReductionClass cls, int max_length,
                                        RunLimits limits = {}) {
  SearchResult out;
  for (auto& g : witness_family(cls, max_length)) {
    RunResult r = run_synchronous(m, g, limits);
    if (r.verdict == Verdict::accepting) {
      out.graph = std::move(g);
      out.run = std::move(r);
      return out;
    }
    if (r.verdict == Verdict::undecided || r.verdict == Verdict::inconsistent)
      out.warnings.push_back("length " + std::to_string(g.size()) + ": " + std::string(to_string(r.verdict)) +
                             (r.details.empty() ? "" : " (" + r.details + ")"));
  }
  return out;
}

}  // namespace distauto
