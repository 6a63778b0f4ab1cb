// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace distauto;
using namespace distauto::oracle;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

std::string vs(Verdict v) { return std::string(to_string(v)); }

std::vector<NodeId> random_perm(std::size_t n, std::mt19937_64& rng) {
  std::vector<NodeId> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// 1 ------------------------------------------------------------------------

Outcome nlg_recognition() {
  Outcome o;
  auto m = nlg_decider();
  for (int n = 1; n <= 50; ++n) {
    auto r = run_synchronous(m, make_nlg(n));
    o.require(r.verdict == Verdict::accepting && r.step == std::uint64_t(n),
              "NLG(" + std::to_string(n) + "): " + vs(r.verdict) + " step " + std::to_string(r.step));
  }
  for (int k = 1; k <= 16; ++k) {
    auto r = run_synchronous(m, make_ncg(3 * k));
    o.require(r.verdict == Verdict::rejecting, "NCG(" + std::to_string(3 * k) + "): " + vs(r.verdict));
  }
  std::mt19937_64 rng(101);
  int negatives = 0;
  const MutationKind kinds[] = {MutationKind::relabel_node, MutationKind::add_edge, MutationKind::delete_edge,
                                MutationKind::duplicate_node};
  while (negatives < 200) {
    auto base = make_nlg(1 + static_cast<int>(uniform_below(rng, 30)));
    LabelledGraph g = base;
    try {
      g = mutate(base, kinds[uniform_below(rng, 4)], rng());
    } catch (const NoMutation&) {
      continue;
    }
    if (classify(g).in(Family::NLG)) continue;
    ++negatives;
    auto r = run_synchronous(m, g);
    o.require(r.verdict == Verdict::rejecting, "mutant " + std::to_string(negatives) + ": " + vs(r.verdict));
  }
  o.note = "50 accepted, 16 cycles and 200 mutants rejected";
  return o;
}

// 2 ------------------------------------------------------------------------

Outcome nqlg_recognition() {
  Outcome o;
  auto m = nqlg_decider();
  std::mt19937_64 rng(202);
  for (int i = 0; i < 100; ++i) {
    int len = 1 + static_cast<int>(uniform_below(rng, 20));
    auto g = make_nqlg(random_counts(len, 3, rng), EdgePolicy::sampled(rng()));
    auto rep = classify(g);
    o.require(rep.in(Family::NQLG) && rep.length == len, "generator produced a non-NQLG");
    auto r = run_synchronous(m, g);
    o.require(r.verdict == Verdict::accepting && r.step == std::uint64_t(2 * len),
              "NQLG len " + std::to_string(len) + ": " + vs(r.verdict) + " step " + std::to_string(r.step));
  }

  // differing limits: one branch stops a layer early
  LabelledGraph witness({NodeLabel::plain(0), NodeLabel::plain(1), NodeLabel::plain(2), NodeLabel::plain(1)},
                        {{0, 1}, {1, 2}, {0, 3}});
  o.require(!classify(witness).in(Family::NQLG), "differing-limits witness is classified NQLG");
  int negatives = 1;
  auto r = run_synchronous(m, witness);
  o.require(r.verdict == Verdict::rejecting, "differing-limits witness: " + vs(r.verdict));

  const MutationKind kinds[] = {MutationKind::relabel_node, MutationKind::add_edge, MutationKind::delete_edge,
                                MutationKind::duplicate_node};
  while (negatives < 200) {
    LabelledGraph g = make_nlg(1);
    if (negatives % 4 == 0) {
      g = make_random_connected(1 + static_cast<int>(uniform_below(rng, 12)), static_cast<int>(uniform_below(rng, 6)),
                                rng());
    } else {
      int len = 2 + static_cast<int>(uniform_below(rng, 12));
      auto base = make_nqlg(random_counts(len, 3, rng), EdgePolicy::sampled(rng()));
      try {
        g = mutate(base, kinds[uniform_below(rng, 4)], rng());
      } catch (const NoMutation&) {
        continue;
      }
    }
    if (classify(g).in(Family::NQLG)) continue;
    ++negatives;
    auto rr = run_synchronous(m, g);
    o.require(rr.verdict == Verdict::rejecting, "negative " + std::to_string(negatives) + ": " + vs(rr.verdict));
  }
  o.note = "100 accepted at 2n, 200 negatives rejected";
  return o;
}

// 3 ------------------------------------------------------------------------

Outcome correspondence() {
  Outcome o;
  std::vector<DistributedMachine> machines{nqlg_decider(), tm_head_machine(make_t_infinity(load_tm("inc2")))};
  std::mt19937_64 rng(303);
  std::size_t checked = 0;
  for (int i = 0; i < 25; ++i) {
    int len = 1 + static_cast<int>(uniform_below(rng, 12));
    auto g = make_nqlg(random_counts(len, 3, rng), EdgePolicy::sampled(rng()));
    auto rep = classify(g);
    auto dist = dist_from_set(g, *rep.origin_set);
    auto line = make_nlg(len);
    auto order = nlg_order(line);
    for (const auto& m : machines) {
      auto big = trajectory(m, g, 4 * len);
      auto small = trajectory(m, line, 4 * len);
      for (std::size_t t = 0; t < big.size(); ++t)
        for (NodeId v = 0; v < g.size(); ++v) {
          ++checked;
          o.require(big[t][v] == small[t][order[dist[v]]],
                    m.name() + " graph " + std::to_string(i) + " step " + std::to_string(t) + " node " +
                        std::to_string(v));
        }
    }
  }
  o.note = std::to_string(checked) + " node-steps compared";
  return o;
}

// 4 ------------------------------------------------------------------------

Outcome faithfulness() {
  Outcome o;
  for (const auto& name : corpus()) {
    auto t = load_tm(name);
    auto head = tm_head_machine(t);
    std::vector<TMConfig> seq{initial_config(t)};
    while (seq.size() <= 200) {
      auto s = tm_step(t, seq.back());
      if (s.kind != TMStep::next) break;
      seq.push_back(s.config);
    }
    std::size_t n = 0;
    for (const auto& c : seq) n = std::max(n, c.tape.size());
    auto g = make_nlg(static_cast<int>(n));
    auto traj = trajectory(head, g, 2 * (seq.size() - 1) + 1);
    for (std::size_t m = 0; m < seq.size(); ++m) {
      auto want = encode_tm_config(head, t, seq[m], g);
      o.require(traj[2 * m + 1] == want, name + " step " + std::to_string(m));
    }
  }
  o.note = "corpus of " + std::to_string(corpus().size()) + " machines";
  return o;
}

// 5 ------------------------------------------------------------------------

Outcome threshold() {
  Outcome o;
  std::ostringstream note;
  for (const auto& name : {"halter", "inc1", "inc2", "inc3", "inc4"}) {
    auto tinf = make_t_infinity(load_tm(name));
    auto run = tm_run(tinf, 1'000'000);
    o.require(run.kind == TMRun::halts, std::string(name) + ": T-infinity does not halt");
    const int n0 = static_cast<int>(run.cells_visited);
    auto head = tm_head_machine(tinf);
    for (int n = 1; n <= n0 + 10; ++n) {
      auto r = run_synchronous(head, make_nlg(n));
      Verdict want = n >= n0 ? Verdict::accepting : Verdict::rejecting;
      o.require(r.verdict == want, std::string(name) + " n=" + std::to_string(n) + ": " + vs(r.verdict));
    }
    note << name << "=" << n0 << ' ';
  }
  o.note = "n0: " + note.str();
  return o;
}

// 6 ------------------------------------------------------------------------

Outcome t_infinity() {
  Outcome o;
  for (const auto& name : corpus()) {
    auto t = load_tm(name);
    auto a = tm_run(t, 10'000), b = tm_run(make_t_infinity(t), 1'000'000);
    o.require(a.kind == b.kind, name + ": halting status differs");
    if (a.kind == TMRun::halts && b.kind == TMRun::halts)
      o.require(project_tinf_tape(b.config.tape).size() >= a.config.tape.size(), name + ": tape shrank");
  }

  auto tinf = make_t_infinity(load_tm("pingpong"));
  TMConfig c = initial_config(tinf);
  std::size_t frontier = 0, rounds = 0;
  bool monotone = true;
  auto visited_prefix = [](const TMConfig& cfg) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < cfg.tape.size(); ++i)
      if (cfg.tape[i] % 4 & tinf::kVisited) k = i + 1;
    return k;
  };
  for (int s = 0; s < 20'000 && frontier < 12; ++s) {
    auto st = tm_step(tinf, c);
    if (st.kind != TMStep::next) break;
    c = st.config;
    if (c.state % 5 == tinf::sim) {
      ++rounds;
      std::size_t f = visited_prefix(c);
      monotone = monotone && f >= frontier;
      frontier = f;
    }
  }
  o.require(frontier >= 12, "ping-pong frontier only reached " + std::to_string(frontier));
  o.require(monotone, "ping-pong frontier decreased");
  o.note = "ping-pong frontier " + std::to_string(frontier) + " after " + std::to_string(rounds) + " rounds";
  return o;
}

// 7 ------------------------------------------------------------------------

struct SnowballStats {
  bool bot = false;
};

// ball holders share one parity of distance from the origin, and the ball count never grows
void snowball_invariants(const DistributedMachine& m, const LabelledGraph& g, const std::vector<Configuration>& traj,
                         Outcome& o, const std::string& tag) {
  auto order = nlg_order(g);
  std::vector<std::size_t> pos(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  const StateId bot = *m.find_state(kBot);
  std::size_t prev_balls = SIZE_MAX;
  bool seen_bot = false;
  for (std::size_t t = 0; t < traj.size(); ++t) {
    std::size_t balls = 0;
    int parity = -1;
    bool split = false, fresh = false;
    for (NodeId v = 0; v < g.size(); ++v) {
      StateId s = traj[t][v];
      seen_bot = seen_bot || s == bot;
      auto f = tuple_fields(m.state_name(s));
      if (!f) continue;
      if (f->size() == 4) fresh = true;
      if (f->size() == 3 && (*f)[2] == "1") {
        ++balls;
        int p = static_cast<int>(pos[v] % 2);
        if (parity >= 0 && p != parity) split = true;
        parity = p;
      }
    }
    if (fresh) continue;
    o.require(balls <= prev_balls, tag + ": ball count grew at step " + std::to_string(t));
    prev_balls = balls;
    if (!seen_bot) o.require(!split, tag + ": ball holders on both sides of the bipartition at step " + std::to_string(t));
  }
}

Outcome snowball() {
  Outcome o;
  auto m = snowball_machine();
  for (int k = 1; k <= 5; ++k) {
    auto g = make_harmonious_sfnlg(k);
    auto r = run_synchronous(m, g, {}, {true, {}});
    o.require(r.verdict == Verdict::accepting, "harmonious k=" + std::to_string(k) + ": " + vs(r.verdict));
    snowball_invariants(m, g, r.trace, o, "harmonious k=" + std::to_string(k));
  }
  auto ring = make_ncg(6);
  std::size_t rejected = 0;
  for (int code = 0; code < 4096; ++code) {
    std::vector<std::pair<int, int>> ds;
    for (int v = 0; v < 6; ++v) {
      int bits = (code >> (2 * v)) & 3;
      ds.push_back({bits & 1 ? 1 : -1, bits >> 1});
    }
    auto r = run_synchronous(m, with_fight_labels(ring, ds));
    rejected += r.verdict == Verdict::rejecting;
    o.require(r.verdict == Verdict::rejecting, "ring labelling " + std::to_string(code) + ": " + vs(r.verdict));
  }
  std::mt19937_64 rng(707);
  std::size_t accepted = 0;
  const StateId bot = *m.find_state(kBot);
  for (int i = 0; i < 500; ++i) {
    int n = 1 + static_cast<int>(uniform_below(rng, 15));
    auto g = random_fight_line(n, rng);
    auto r = run_synchronous(m, g, {}, {true, {}});
    bool had_bot = false;
    for (const auto& c : r.trace)
      for (StateId s : c.states) had_bot = had_bot || s == bot;
    if (r.verdict == Verdict::accepting) {
      ++accepted;
      o.require(classify(g).in(Family::SFNLG), "accepted a non-SFNLG");
    }
    if (had_bot) o.require(r.verdict == Verdict::rejecting, "run with BOT ended " + vs(r.verdict));
    o.require(r.verdict != Verdict::undecided && r.verdict != Verdict::inconsistent, "random line: " + vs(r.verdict));
    snowball_invariants(m, g, r.trace, o, "random line " + std::to_string(i));
  }
  o.note = "4096/4096 ring labellings checked, " + std::to_string(accepted) + " of 500 random lines accepted";
  return o;
}

// 8 ------------------------------------------------------------------------

// expected product verdict from standalone component runs; exact for the plain product
struct Expected {
  Verdict verdict;
  std::uint64_t step, mu, lambda;
};

Expected combine(const DistributedMachine& m1, const RunResult& r1, const DistributedMachine& m2, const RunResult& r2) {
  const std::uint64_t mu = std::max(r1.cycle_start, r2.cycle_start);
  const std::uint64_t lambda = std::lcm(r1.cycle_length, r2.cycle_length);
  auto at = [](const RunResult& r, std::uint64_t t) -> const Configuration& {
    if (t >= r.cycle_start + r.cycle_length) t = r.cycle_start + (t - r.cycle_start) % r.cycle_length;
    return r.trace[t];
  };
  auto flags = [&](std::uint64_t t) {
    const auto &a = at(r1, t), &b = at(r2, t);
    bool acc = true, rej = true;
    for (std::size_t v = 0; v < a.size(); ++v) {
      bool y1 = m1.accepting(a[v]), n1 = m1.rejecting(a[v]);
      acc = acc && y1 && m2.accepting(b[v]);
      rej = rej && (n1 || (y1 && m2.rejecting(b[v])));
    }
    return (acc ? 1 : 0) | (rej ? 2 : 0);
  };
  int all = 3;
  for (std::uint64_t t = mu; t < mu + lambda; ++t) all &= flags(t);
  if (!all) return {Verdict::inconsistent, mu, mu, lambda};
  int bit = all & 1 ? 1 : 2;
  std::uint64_t first = mu;
  while (first > 0 && (flags(first - 1) & bit)) --first;
  return {bit == 1 ? Verdict::accepting : Verdict::rejecting, first, mu, lambda};
}

void check_projection(const DistributedMachine& p, const std::vector<Configuration>& traj,
                      const std::vector<Configuration>& a, const std::vector<Configuration>& b, std::size_t upto_b,
                      Outcome& o, const std::string& tag) {
  for (std::size_t t = 0; t < traj.size(); ++t)
    for (std::size_t v = 0; v < traj[t].size(); ++v) {
      auto [x, y] = p.split(traj[t][v]);
      o.require(x == a[t][v], tag + ": first component differs at step " + std::to_string(t));
      if (t <= upto_b) o.require(y == b[t][v], tag + ": second component differs at step " + std::to_string(t));
    }
}

Outcome product() {
  Outcome o;
  std::mt19937_64 rng(808);
  auto inc1 = make_t_infinity(load_tm("inc1"));
  auto head1 = tm_head_machine(inc1);

  auto plain_graph = [&](int i) {
    switch (i % 4) {
      case 0: return make_nlg(1 + static_cast<int>(uniform_below(rng, 16)));
      case 1: {
        int len = 1 + static_cast<int>(uniform_below(rng, 10));
        return make_nqlg(random_counts(len, 3, rng), EdgePolicy::sampled(rng()));
      }
      case 2:
        try {
          return mutate(make_nlg(2 + static_cast<int>(uniform_below(rng, 12))), MutationKind::relabel_node, rng());
        } catch (const NoMutation&) {
          return make_nlg(3);
        }
      default:
        return make_random_connected(1 + static_cast<int>(uniform_below(rng, 10)),
                                     static_cast<int>(uniform_below(rng, 5)), rng());
    }
  };

  struct Pairing {
    DistributedMachine a, b;
  };
  std::vector<Pairing> stable{{nlg_decider(), nqlg_decider()}, {nqlg_decider(), head1}, {nlg_decider(), head1}};
  std::size_t runs = 0;
  for (std::size_t k = 0; k < stable.size(); ++k) {
    auto p = product_machine(stable[k].a, stable[k].b, ProductMode::stable_consensus);
    for (int i = 0; i < 100; ++i) {
      auto g = plain_graph(i);
      std::string tag = p.name() + " graph " + std::to_string(i);
      RunOptions rec{true, {}};
      auto r1 = run_synchronous(stable[k].a, g, {}, rec), r2 = run_synchronous(stable[k].b, g, {}, rec);
      auto rp = run_synchronous(p, g);
      ++runs;
      if (r1.cycle_length == 0 || r2.cycle_length == 0) {
        o.require(rp.verdict == Verdict::undecided || rp.verdict != Verdict::accepting, tag + ": undecided component");
        continue;
      }
      auto e = combine(stable[k].a, r1, stable[k].b, r2);
      o.require(rp.verdict == e.verdict, tag + ": verdict " + vs(rp.verdict) + " expected " + vs(e.verdict));
      o.require(rp.cycle_start == e.mu && rp.cycle_length == e.lambda, tag + ": cycle differs");
      if (e.verdict != Verdict::inconsistent) o.require(rp.step == e.step, tag + ": first stable step differs");
      std::size_t horizon = e.mu + e.lambda + 2;
      check_projection(p, trajectory(p, g, horizon), trajectory(stable[k].a, g, horizon),
                       trajectory(stable[k].b, g, horizon), horizon, o, tag);
    }
  }

  // halting pairings
  auto snow = snowball_machine();
  auto adapted = head1.adapted();
  auto zig = tm_head_machine(load_tm("zigzag"));
  std::vector<Pairing> halting{{snow, adapted}, {head1, zig}};
  std::size_t frozen_runs = 0;
  for (std::size_t k = 0; k < halting.size(); ++k) {
    const auto& a = halting[k].a;
    const auto& b = halting[k].b;
    auto p = product_machine(a, b, ProductMode::halting);
    for (int i = 0; i < 100; ++i) {
      LabelledGraph g = make_nlg(1);
      if (k == 0) {
        g = i < 4 ? make_harmonious_sfnlg(i + 1) : random_fight_line(1 + static_cast<int>(uniform_below(rng, 15)), rng);
      } else {
        g = plain_graph(i);
      }
      std::string tag = p.name() + " graph " + std::to_string(i);
      auto r1 = run_synchronous(a, g, {}, {true, {}});
      auto rp = run_synchronous(p, g, {}, {true, {}});
      ++runs;
      std::size_t horizon = rp.trace.size() + 2;
      auto ta = trajectory(a, g, horizon), tb = trajectory(b, g, horizon), tp = trajectory(p, g, horizon);

      // first step at which some node sits in N1
      std::size_t freeze = horizon + 1;
      for (std::size_t t = 0; t < ta.size() && freeze > horizon; ++t)
        for (StateId s : ta[t].states)
          if (a.rejecting(s)) {
            freeze = t;
            break;
          }
      check_projection(p, tp, ta, tb, freeze, o, tag);
      for (std::size_t t = 0; t + 1 < tp.size(); ++t)
        for (std::size_t v = 0; v < g.size(); ++v)
          if (a.rejecting(p.split(tp[t][v]).first))
            o.require(tp[t + 1][v] == tp[t][v], tag + ": frozen node moved at step " + std::to_string(t));
      if (freeze <= horizon) {
        ++frozen_runs;
        if (r1.verdict == Verdict::rejecting) o.require(rp.verdict == Verdict::rejecting, tag + ": N1 did not reject");
      } else {
        auto r2 = run_synchronous(b, g, {}, {true, {}});
        if (r1.cycle_length && r2.cycle_length) {
          auto e = combine(a, r1, b, r2);
          o.require(rp.verdict == e.verdict, tag + ": verdict " + vs(rp.verdict) + " expected " + vs(e.verdict));
        }
      }
    }
  }
  o.note = std::to_string(runs) + " product runs, " + std::to_string(frozen_runs) + " with frozen nodes";
  return o;
}

// 9 ------------------------------------------------------------------------

Outcome search() {
  Outcome o;
  std::ostringstream note;
  for (const auto& name : {"halter", "inc1", "inc2", "inc3", "inc4", "zigzag"}) {
    auto t = load_tm(name);
    const int n0 = static_cast<int>(tm_run(make_t_infinity(t), 1'000'000).cells_visited);
    for (auto cls : {ReductionClass::DA, ReductionClass::dA, ReductionClass::Da}) {
      int want = n0;
      if (cls == ReductionClass::Da) {
        want = 1;
        while (want < n0) want = 2 * want + 1;
      }
      auto s = find_accepted_graph(reduction_automaton(t, cls), cls, 64);
      std::string tag = std::string(name) + " " + std::string(to_string(cls));
      o.require(s.graph.has_value(), tag + ": nothing found");
      if (s.graph) o.require(int(s.graph->size()) == want, tag + ": found length " + std::to_string(s.graph->size()) +
                                                                 ", expected " + std::to_string(want));
      o.require(s.warnings.empty(), tag + ": warnings");
    }
    note << name << "=" << n0 << ' ';
  }
  auto ping = load_tm("pingpong");
  for (auto cls : {ReductionClass::DA, ReductionClass::dA, ReductionClass::Da}) {
    auto s = find_accepted_graph(reduction_automaton(ping, cls), cls, 64);
    std::string tag = "pingpong " + std::string(to_string(cls));
    o.require(!s.graph.has_value(), tag + ": found a witness");
    o.require(s.warnings.empty(), tag + ": " + std::to_string(s.warnings.size()) + " warnings" +
                                      (s.warnings.empty() ? "" : " (" + s.warnings.front() + ")"));
  }
  o.note = "n0: " + note.str() + "; pingpong NONE up to 64";
  return o;
}

// 10 -----------------------------------------------------------------------

DistributedMachine random_machine(std::mt19937_64& rng) {
  MachineSpec s;
  s.name = "random";
  s.beta = 1 + static_cast<unsigned>(uniform_below(rng, 3));
  s.detection = s.beta == 1 ? Detection::d : Detection::D;
  s.acceptance = Acceptance::A;
  s.alphabet = Alphabet::plain;
  const int q = 2 + static_cast<int>(uniform_below(rng, 4));
  auto name = [](int i) { return "s" + std::to_string(i); };
  for (int i = 0; i < q; ++i) s.states.push_back(name(i));
  for (int l = 0; l < 3; ++l) s.init.emplace_back(NodeLabel::plain(l), name(static_cast<int>(uniform_below(rng, q))));
  s.accepting.push_back(name(0));
  s.rejecting.push_back(name(1));
  int rules = 1 + static_cast<int>(uniform_below(rng, 3 * q));
  for (int i = 0; i < rules; ++i) {
    Rule r;
    r.priority = static_cast<int>(uniform_below(rng, 5));
    r.source = uniform_below(rng, 4) == 0 ? "*" : name(static_cast<int>(uniform_below(rng, q)));
    int atoms = static_cast<int>(uniform_below(rng, 3));
    for (int a = 0; a < atoms; ++a) {
      std::string pat = uniform_below(rng, 4) == 0 ? "*" : name(static_cast<int>(uniform_below(rng, q)));
      Cmp op = static_cast<Cmp>(uniform_below(rng, 3));
      r.atoms.push_back({pat, op, static_cast<unsigned>(uniform_below(rng, s.beta + 1))});
    }
    r.result = name(static_cast<int>(uniform_below(rng, q)));
    s.rules.push_back(r);
  }
  return DistributedMachine(std::move(s));
}

Outcome engine_properties() {
  Outcome o;
  std::mt19937_64 rng(1010);
  auto graph = [&] {
    return make_random_connected(1 + static_cast<int>(uniform_below(rng, 12)), static_cast<int>(uniform_below(rng, 8)),
                                 rng());
  };
  // determinism
  for (int i = 0; i < 200; ++i) {
    auto m = random_machine(rng);
    auto g = graph();
    auto kind = static_cast<SchedulerKind>(uniform_below(rng, 3));
    std::uint64_t seed = rng();
    auto s1 = make_schedule(kind, g, seed), s2 = make_schedule(kind, g, seed);
    auto a = run_scheduled(m, g, s1, {}, {true, {}}), b = run_scheduled(m, g, s2, {}, {true, {}});
    o.require(a.verdict == b.verdict && a.step == b.step && a.trace == b.trace && a.final == b.final,
              "determinism trial " + std::to_string(i));
  }
  // frame property
  for (int i = 0; i < 200; ++i) {
    auto m = random_machine(rng);
    auto g = graph();
    Configuration c;
    for (NodeId v = 0; v < g.size(); ++v) c.states.push_back(static_cast<StateId>(uniform_below(rng, m.state_count())));
    std::vector<NodeId> sel;
    for (NodeId v = 0; v < g.size(); ++v)
      if (rng() & 1) sel.push_back(v);
    auto next = step(m, g, c, sel), want = naive_step(m, g, c, sel);
    o.require(next == want, "frame trial " + std::to_string(i));
  }
  // cycle soundness
  for (int i = 0; i < 200; ++i) {
    auto m = random_machine(rng);
    auto g = graph();
    auto r = run_synchronous(m, g, {}, {true, {}});
    auto nr = naive_run(m, g, 5000);
    o.require(nr.closed && r.cycle_length == nr.lambda && r.cycle_start == nr.mu, "cycle trial " + std::to_string(i));
    if (!nr.closed) continue;
    auto [v, first] = naive_verdict(m, nr);
    o.require(r.verdict == v && r.step == first, "verdict trial " + std::to_string(i));
    o.require(r.trace == nr.configs, "trace trial " + std::to_string(i));
    // bounded storage must agree with the hash table path
    auto small = run_synchronous(m, g, {0, 2});
    o.require(small.verdict == r.verdict && small.step == r.step && small.cycle_start == r.cycle_start &&
                  small.cycle_length == r.cycle_length,
              "bounded-storage trial " + std::to_string(i));
  }
  // isomorphism equivariance
  for (int i = 0; i < 200; ++i) {
    auto m = random_machine(rng);
    auto g = graph();
    auto perm = random_perm(g.size(), rng);
    auto h = permute(g, perm);
    auto a = trajectory(m, g, 30), b = trajectory(m, h, 30);
    bool same = true;
    for (std::size_t t = 0; t < a.size(); ++t)
      for (NodeId v = 0; v < g.size(); ++v) same = same && a[t][v] == b[t][perm[v]];
    auto ra = run_synchronous(m, g), rb = run_synchronous(m, h);
    o.require(same && ra.verdict == rb.verdict && ra.step == rb.step, "isomorphism trial " + std::to_string(i));
  }
  o.note = "4 x 200 trials";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"NLG recognition", 5, nlg_recognition},
      {"NQLG recognition", 10, nqlg_recognition},
      {"line correspondence", 10, correspondence},
      {"TM simulation faithfulness", 10, faithfulness},
      {"acceptance threshold", 20, threshold},
      {"T-infinity halting and frontier", 10, t_infinity},
      {"snowball fight", 60, snowball},
      {"product construction", 30, product},
      {"emptiness search", 120, search},
      {"engine properties", 30, engine_properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > criteria[i].budget) {
      o.pass = false;
      o.failures.push_back("took " + std::to_string(secs) + " s, budget " + std::to_string(criteria[i].budget) + " s");
    }
    char time[32];
    std::snprintf(time, sizeof time, "%.2fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].name << " [" << time << "] "
              << o.note << '\n';
    for (const auto& f : o.failures) std::cout << "    " << f << '\n';
    failed += !o.pass;
  }
  std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
