#pragma once

// Reference implementations used as oracles by the unit and acceptance tests.
// Deliberately naive: full rescans, std::map views, linear cycle search.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "distauto/distauto.hpp"

namespace distauto::oracle {

inline std::string data_path(const std::string& rel) { return std::string(DISTAUTO_DATA_DIR) + "/" + rel; }

inline TuringMachine load_tm(const std::string& name) { return parse_tm(read_file(data_path("tm/" + name + ".tm"))); }

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> names{"halter", "inc1", "inc2", "inc3", "inc4", "zigzag", "pingpong", "bb3"};
  return names;
}

inline std::vector<ViewEntry> view_of(const DistributedMachine& m, const LabelledGraph& g, const Configuration& c,
                                      NodeId v) {
  std::map<StateId, std::uint32_t> counts;
  for (const auto& [a, b] : g.edges()) {
    if (a == v) ++counts[c.states[b]];
    if (b == v) ++counts[c.states[a]];
  }
  std::vector<ViewEntry> out;
  for (auto [s, k] : counts) out.push_back({s, std::min<std::uint32_t>(k, m.beta())});
  return out;
}

inline Configuration naive_step(const DistributedMachine& m, const LabelledGraph& g, const Configuration& c,
                                const std::vector<NodeId>& sel) {
  Configuration out = c;
  for (NodeId v : sel) out.states[v] = m.next(c.states[v], view_of(m, g, c, v));
  return out;
}

inline std::vector<NodeId> all_nodes(const LabelledGraph& g) {
  std::vector<NodeId> v(g.size());
  for (NodeId i = 0; i < g.size(); ++i) v[i] = i;
  return v;
}

inline std::vector<Configuration> naive_trajectory(const DistributedMachine& m, const LabelledGraph& g,
                                                   std::size_t steps) {
  std::vector<Configuration> out;
  Configuration c;
  for (NodeId v = 0; v < g.size(); ++v) c.states.push_back(m.init(g.label(v)));
  out.push_back(c);
  auto sel = all_nodes(g);
  for (std::size_t i = 0; i < steps; ++i) out.push_back(c = naive_step(m, g, c, sel));
  return out;
}

struct NaiveRun {
  bool closed = false;
  std::size_t mu = 0, lambda = 0;
  std::vector<Configuration> configs;  // C_0 .. C_{mu+lambda}
};

inline NaiveRun naive_run(const DistributedMachine& m, const LabelledGraph& g, std::size_t max_steps) {
  NaiveRun r;
  Configuration c;
  for (NodeId v = 0; v < g.size(); ++v) c.states.push_back(m.init(g.label(v)));
  auto sel = all_nodes(g);
  for (std::size_t i = 0; i <= max_steps; ++i) {
    for (std::size_t j = 0; j < r.configs.size(); ++j)
      if (r.configs[j] == c) {
        r.closed = true;
        r.mu = j;
        r.lambda = i - j;
        r.configs.push_back(c);
        return r;
      }
    r.configs.push_back(c);
    c = naive_step(m, g, c, sel);
  }
  return r;
}

/// Verdict of a closed run by the definition: the cycle decides, the first
/// stable step is the earliest index from which every configuration agrees.
inline std::pair<Verdict, std::size_t> naive_verdict(const DistributedMachine& m, const NaiveRun& r) {
  auto all = [&](const Configuration& c, bool acc) {
    return std::all_of(c.states.begin(), c.states.end(),
                       [&](StateId s) { return acc ? m.accepting(s) : m.rejecting(s); });
  };
  for (bool acc : {true, false}) {
    bool cyc = true;
    for (std::size_t k = r.mu; k < r.mu + r.lambda; ++k) cyc = cyc && all(r.configs[k], acc);
    if (!cyc) continue;
    std::size_t first = r.mu;
    while (first > 0 && all(r.configs[first - 1], acc)) --first;
    return {acc ? Verdict::accepting : Verdict::rejecting, first};
  }
  return {Verdict::inconsistent, r.mu};
}

/// Numbered linear graph with random snowball labels on top of the numbering.
inline LabelledGraph random_fight_line(int n, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> ds;
  for (int i = 0; i < n; ++i) ds.push_back({(rng() & 1) ? 1 : -1, static_cast<int>(rng() & 1)});
  return with_fight_labels(make_nlg(n), ds);
}

/// Random layer counts for a quasi-linear graph: `len` layers, at most `rep` per layer.
inline std::vector<int> random_counts(int len, int rep, std::mt19937_64& rng) {
  std::vector<int> c;
  for (int i = 0; i < len; ++i) c.push_back(len == 1 ? 1 : 1 + static_cast<int>(uniform_below(rng, rep)));
  return c;
}

}  // namespace distauto::oracle
