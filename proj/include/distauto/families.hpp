#pragma once

// Graph family generators, the brute-force membership oracle and the
// mutation helpers used to produce negative inputs.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "distauto/graph.hpp"
#include "distauto/random.hpp"

namespace distauto {

enum class Family { NLG, NCG, NQLG, SFNLG, SFNCG, none };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::NLG: return "NLG";
    case Family::NCG: return "NCG";
    case Family::NQLG: return "NQLG";
    case Family::SFNLG: return "SFNLG";
    case Family::SFNCG: return "SFNCG";
    case Family::none: return "none";
  }
  return "none";
}

inline unsigned family_bit(Family f) { return 1u << static_cast<unsigned>(f); }

struct FamilyReport {
  bool member = false;
  Family family = Family::none;
  unsigned families = 0;  // every family the graph belongs to, as family_bit flags
  std::optional<int> length;
  std::optional<std::vector<NodeId>> origin_set;
  std::vector<std::string> violations;

  bool in(Family f) const { return (families & family_bit(f)) != 0; }
};

class NoMutation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- generators

inline LabelledGraph make_path(const std::vector<NodeLabel>& labels) {
  std::vector<LabelledGraph::Edge> edges;
  for (NodeId i = 0; i + 1 < labels.size(); ++i) edges.emplace_back(i, i + 1);
  return LabelledGraph(labels, std::move(edges));
}

inline LabelledGraph make_nlg(int n) {
  if (n < 1) throw std::invalid_argument("make_nlg: n must be at least 1");
  std::vector<NodeLabel> labels;
  for (int i = 0; i < n; ++i) labels.push_back(NodeLabel::plain(i % 3));
  return make_path(labels);
}

inline LabelledGraph make_ncg(int n) {
  if (n < 3 || n % 3 != 0) throw std::invalid_argument("make_ncg: n must be a positive multiple of 3");
  std::vector<NodeLabel> labels;
  std::vector<LabelledGraph::Edge> edges;
  for (int i = 0; i < n; ++i) {
    labels.push_back(NodeLabel::plain(i % 3));
    edges.emplace_back(i, (i + 1) % n);
  }
  return LabelledGraph(std::move(labels), std::move(edges));
}

struct EdgePolicy {
  enum Kind { full_bipartite, random } kind = full_bipartite;
  std::uint64_t seed = 0;

  static EdgePolicy full() { return {full_bipartite, 0}; }
  static EdgePolicy sampled(std::uint64_t seed) { return {random, seed}; }
};

/// Layered graph; layer d holds counts[d] nodes numbered d mod 3, ids are
/// layer-major.
inline LabelledGraph make_nqlg(const std::vector<int>& counts, EdgePolicy policy = EdgePolicy::full()) {
  if (counts.empty()) throw std::invalid_argument("make_nqlg: need at least one layer");
  for (int c : counts)
    if (c < 1) throw std::invalid_argument("make_nqlg: replica counts must be positive");
  if (counts.size() == 1 && counts[0] > 1)
    throw std::invalid_argument("make_nqlg: a single layer with several nodes is disconnected");

  const std::size_t n = counts.size();
  std::vector<NodeId> first(n + 1, 0);
  for (std::size_t d = 0; d < n; ++d) first[d + 1] = first[d] + static_cast<NodeId>(counts[d]);
  std::vector<NodeLabel> labels;
  for (std::size_t d = 0; d < n; ++d)
    for (int i = 0; i < counts[d]; ++i) labels.push_back(NodeLabel::plain(static_cast<int>(d % 3)));

  std::vector<LabelledGraph::Edge> edges;
  if (policy.kind == EdgePolicy::full_bipartite) {
    for (std::size_t d = 0; d + 1 < n; ++d)
      for (NodeId u = first[d]; u < first[d + 1]; ++u)
        for (NodeId w = first[d + 1]; w < first[d + 2]; ++w) edges.emplace_back(u, w);
    return LabelledGraph(std::move(labels), std::move(edges));
  }

  std::mt19937_64 rng(policy.seed);
  std::vector<std::vector<char>> chosen(n);
  auto mark = [&](std::size_t d, NodeId u, NodeId w) {
    std::size_t width = counts[d + 1];
    chosen[d][(u - first[d]) * width + (w - first[d + 1])] = 1;
  };
  for (std::size_t d = 0; d + 1 < n; ++d) chosen[d].assign(std::size_t(counts[d]) * counts[d + 1], 0);
  for (std::size_t d = 1; d < n; ++d)
    for (NodeId w = first[d]; w < first[d + 1]; ++w)
      mark(d - 1, first[d - 1] + static_cast<NodeId>(uniform_below(rng, counts[d - 1])), w);
  for (std::size_t d = 0; d + 1 < n; ++d)
    for (NodeId u = first[d]; u < first[d + 1]; ++u)
      mark(d, u, first[d + 1] + static_cast<NodeId>(uniform_below(rng, counts[d + 1])));
  for (std::size_t d = 0; d + 1 < n; ++d)
    for (auto& c : chosen[d])
      if (!c) c = static_cast<char>(rng() & 1u);

  // union-find over the sampled edges, then bridge stray components at layer 0
  std::vector<NodeId> parent(labels.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t d = 0; d + 1 < n; ++d) {
    std::size_t width = counts[d + 1];
    for (std::size_t i = 0; i < chosen[d].size(); ++i) {
      if (!chosen[d][i]) continue;
      NodeId u = first[d] + static_cast<NodeId>(i / width);
      NodeId w = first[d + 1] + static_cast<NodeId>(i % width);
      edges.emplace_back(u, w);
      parent[find(u)] = find(w);
    }
  }
  if (n > 1) {
    NodeId anchor = first[1];
    for (NodeId w = first[1]; w < first[2]; ++w)
      if (find(w) == find(0)) { anchor = w; break; }
    for (NodeId u = 0; u < first[1]; ++u) {
      if (find(u) == find(0)) continue;
      edges.emplace_back(u, anchor);
      parent[find(u)] = find(0);
    }
  }
  return LabelledGraph(std::move(labels), std::move(edges));
}

/// Direction/snowball word l_k of the harmonious family, length 2^k - 1.
inline std::vector<std::pair<int, int>> harmonious_word(int k) {
  if (k < 1) throw std::invalid_argument("harmonious_word: k must be at least 1");
  std::vector<std::pair<int, int>> l{{-1, 1}}, r{{+1, 1}};
  for (int i = 1; i < k; ++i) {
    std::vector<std::pair<int, int>> nl = r, nr = r;
    nl.emplace_back(+1, 0);
    nr.emplace_back(-1, 0);
    nl.insert(nl.end(), l.begin(), l.end());
    nr.insert(nr.end(), l.begin(), l.end());
    l = std::move(nl);
    r = std::move(nr);
  }
  return l;
}

inline LabelledGraph make_harmonious_sfnlg(int k) {
  if (k < 1) throw std::invalid_argument("make_harmonious_sfnlg: n must be at least 1");
  if (k > 20) throw std::invalid_argument("make_harmonious_sfnlg: n too large");
  auto word = harmonious_word(k);
  std::vector<NodeLabel> labels;
  for (std::size_t i = 0; i < word.size(); ++i)
    labels.push_back(NodeLabel::fight(static_cast<int>(i % 3), word[i].first, word[i].second));
  return make_path(labels);
}

/// Same shape, labels given per node; used for exhaustive/random fight labellings.
inline LabelledGraph with_fight_labels(const LabelledGraph& g, const std::vector<std::pair<int, int>>& ds) {
  if (ds.size() != g.size()) throw std::invalid_argument("with_fight_labels: size mismatch");
  std::vector<NodeLabel> labels;
  for (NodeId v = 0; v < g.size(); ++v)
    labels.push_back(NodeLabel::fight(g.label(v).numbering, ds[v].first, ds[v].second));
  return LabelledGraph(std::move(labels), g.edges());
}

inline LabelledGraph project_labels(const LabelledGraph& g) {
  std::vector<NodeLabel> labels;
  for (const auto& l : g.labels()) labels.push_back(l.projected());
  return LabelledGraph(std::move(labels), g.edges());
}

inline LabelledGraph with_label(const LabelledGraph& g, NodeId v, NodeLabel label) {
  auto labels = g.labels();
  labels.at(v) = label;
  return LabelledGraph(std::move(labels), g.edges());
}

/// Isomorphic copy: node v of g becomes node perm[v].
inline LabelledGraph permute(const LabelledGraph& g, const std::vector<NodeId>& perm) {
  if (perm.size() != g.size()) throw std::invalid_argument("permute: size mismatch");
  std::vector<NodeLabel> labels(g.size());
  for (NodeId v = 0; v < g.size(); ++v) labels.at(perm[v]) = g.label(v);
  std::vector<LabelledGraph::Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return LabelledGraph(std::move(labels), std::move(edges));
}

/// Random connected plain graph: a random spanning tree plus `extra` chords.
inline LabelledGraph make_random_connected(int n, int extra, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_random_connected: n must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<NodeLabel> labels;
  for (int i = 0; i < n; ++i) labels.push_back(NodeLabel::plain(static_cast<int>(uniform_below(rng, 3))));
  std::vector<LabelledGraph::Edge> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(static_cast<NodeId>(uniform_below(rng, i)), i);
  std::vector<LabelledGraph::Edge> sorted = edges;
  for (auto& e : sorted)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < extra && n > 2; ++k) {
    NodeId u = static_cast<NodeId>(uniform_below(rng, n)), v = static_cast<NodeId>(uniform_below(rng, n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(sorted.begin(), sorted.end(), LabelledGraph::Edge{u, v});
    if (it != sorted.end() && *it == LabelledGraph::Edge{u, v}) continue;
    sorted.insert(it, {u, v});
  }
  return LabelledGraph(std::move(labels), std::move(sorted));
}

// ------------------------------------------------------------------- oracle

inline std::vector<int> dist_from_set(const LabelledGraph& g, const std::vector<NodeId>& sources) {
  if (sources.empty()) throw std::invalid_argument("dist_from_set: empty source set");
  std::vector<int> dist(g.size(), -1);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (s >= g.size()) throw std::invalid_argument("dist_from_set: source not in graph");
    if (dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : g.neighbours(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

namespace detail {

inline std::optional<int> check_nlg(const LabelledGraph& g, std::vector<std::string>& why) {
  const std::size_t n = g.size();
  if (g.edges().size() != n - 1) {
    why.push_back("L1: " + std::to_string(g.edges().size()) + " edges, a path on " + std::to_string(n) +
                  " nodes has " + std::to_string(n - 1));
    return std::nullopt;
  }
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) > 2) {
      why.push_back("L1: node " + std::to_string(v) + " has degree " + std::to_string(g.degree(v)));
      return std::nullopt;
    }
  }
  std::vector<NodeId> ends;
  for (NodeId v = 0; v < n; ++v)
    if (g.degree(v) <= 1) ends.push_back(v);
  for (NodeId start : ends) {
    NodeId prev = start, cur = start;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (g.label(cur).numbering != static_cast<int>(i % 3)) {
        ok = false;
        break;
      }
      if (i + 1 == n) break;
      auto nb = g.neighbours(cur);
      NodeId next = nb.size() == 1 || nb[0] != prev ? nb[0] : nb[1];
      prev = cur;
      cur = next;
    }
    if (ok) return static_cast<int>(n);
  }
  why.push_back("L2: numbering is not i mod 3 from either end of the path");
  return std::nullopt;
}

inline std::optional<int> check_ncg(const LabelledGraph& g, std::vector<std::string>& why) {
  const std::size_t n = g.size();
  bool cycle = n >= 3 && g.edges().size() == n;
  for (NodeId v = 0; cycle && v < n; ++v) cycle = g.degree(v) == 2;
  if (!cycle) {
    why.push_back("NCG: not a cycle");
    return std::nullopt;
  }
  for (NodeId v = 0; v < n; ++v) {
    int l = g.label(v).numbering;
    int a = g.label(g.neighbours(v)[0]).numbering, b = g.label(g.neighbours(v)[1]).numbering;
    if (std::minmax(a, b) != std::minmax(mod3(l - 1), mod3(l + 1))) {
      why.push_back("NCG: node " + std::to_string(v) + " lacks one neighbour numbered " +
                    std::to_string(mod3(l - 1)) + " and one numbered " + std::to_string(mod3(l + 1)));
      return std::nullopt;
    }
  }
  return static_cast<int>(n);
}

struct NqlgCheck {
  std::optional<int> length;
  std::vector<NodeId> origin;
};

inline NqlgCheck check_nqlg(const LabelledGraph& g, std::vector<std::string>& why) {
  NqlgCheck out;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (g.label(v).numbering != 0) continue;
    bool left = false;
    for (NodeId w : g.neighbours(v)) left = left || g.label(w).numbering == 2;
    if (!left) out.origin.push_back(v);
  }
  if (out.origin.empty()) {
    why.push_back("O-empty: no node numbered 0 without a neighbour numbered 2");
    return out;
  }
  auto dist = dist_from_set(g, out.origin);
  bool ok = true;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (g.label(v).numbering != dist[v] % 3) {
      why.push_back("QL1: node " + std::to_string(v) + " numbered " + std::to_string(g.label(v).numbering) +
                    " at distance " + std::to_string(dist[v]));
      ok = false;
    }
  }
  for (auto [u, v] : g.edges()) {
    if (g.label(u).numbering == g.label(v).numbering) {
      why.push_back("QL2: edge " + std::to_string(u) + "-" + std::to_string(v) + " joins equal numberings");
      ok = false;
    }
  }
  int maxd = *std::max_element(dist.begin(), dist.end());
  for (NodeId v = 0; v < g.size(); ++v) {
    if (dist[v] >= maxd) continue;
    bool succ = false;
    for (NodeId w : g.neighbours(v)) succ = succ || dist[w] == dist[v] + 1;
    if (!succ) {
      why.push_back("QL3: node " + std::to_string(v) + " at distance " + std::to_string(dist[v]) +
                    " has no successor but the graph reaches distance " + std::to_string(maxd));
      ok = false;
    }
  }
  if (ok) out.length = maxd + 1;
  return out;
}

}  // namespace detail

/// Reference membership oracle; checks each family definition directly.
inline FamilyReport classify(const LabelledGraph& g) {
  FamilyReport r;
  std::vector<std::string> why;
  if (g.alphabet() == Alphabet::snowball) {
    LabelledGraph p = project_labels(g);
    if (auto n = detail::check_nlg(p, why)) {
      r.families |= family_bit(Family::SFNLG);
      r.family = Family::SFNLG;
      r.length = n;
    } else if (auto c = detail::check_ncg(p, why)) {
      r.families |= family_bit(Family::SFNCG);
      r.family = Family::SFNCG;
      r.length = c;
    }
    r.member = r.families != 0;
    if (!r.member) r.violations = std::move(why);
    return r;
  }

  std::vector<std::string> nlg_why, ncg_why, nqlg_why;
  auto nlg = detail::check_nlg(g, nlg_why);
  auto ncg = detail::check_ncg(g, ncg_why);
  auto nqlg = detail::check_nqlg(g, nqlg_why);
  if (nlg) r.families |= family_bit(Family::NLG);
  if (ncg) r.families |= family_bit(Family::NCG);
  if (nqlg.length) r.families |= family_bit(Family::NQLG);
  r.member = r.families != 0;
  if (nlg) {
    r.family = Family::NLG;
    r.length = nlg;
  } else if (ncg) {
    r.family = Family::NCG;
    r.length = ncg;
  } else if (nqlg.length) {
    r.family = Family::NQLG;
    r.length = nqlg.length;
  }
  if (nqlg.length) r.origin_set = nqlg.origin;
  if (!r.member) {
    for (auto* list : {&nlg_why, &ncg_why, &nqlg_why})
      r.violations.insert(r.violations.end(), list->begin(), list->end());
  }
  return r;
}

// ---------------------------------------------------------------- mutations

enum class MutationKind { relabel_node, add_edge, delete_edge, duplicate_node };

inline MutationKind parse_mutation_kind(std::string_view s) {
  if (s == "relabel-node") return MutationKind::relabel_node;
  if (s == "add-edge") return MutationKind::add_edge;
  if (s == "delete-edge") return MutationKind::delete_edge;
  if (s == "duplicate-node") return MutationKind::duplicate_node;
  throw std::invalid_argument("unknown mutation kind '" + std::string(s) + "'");
}

namespace detail {

inline bool connected_without(const LabelledGraph& g, LabelledGraph::Edge skip) {
  std::vector<char> seen(g.size(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbours(v)) {
      if (std::minmax(v, w) == std::minmax(skip.first, skip.second) || seen[w]) continue;
      seen[w] = 1;
      ++count;
      stack.push_back(w);
    }
  }
  return count == g.size();
}

}  // namespace detail

/// One random mutation; candidates are tried in seeded random order and the
/// first one that keeps the graph valid wins.
inline LabelledGraph mutate(const LabelledGraph& g, MutationKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<NodeId>(g.size());
  switch (kind) {
    case MutationKind::relabel_node: {
      NodeId v = static_cast<NodeId>(uniform_below(rng, n));
      NodeLabel l = g.label(v);
      l.numbering = mod3(l.numbering + 1 + static_cast<int>(uniform_below(rng, 2)));
      return with_label(g, v, l);
    }
    case MutationKind::add_edge: {
      std::vector<LabelledGraph::Edge> missing;
      for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
          if (!g.has_edge(u, v)) missing.emplace_back(u, v);
      if (missing.empty()) throw NoMutation("add-edge: graph is complete");
      auto edges = g.edges();
      edges.push_back(missing[uniform_below(rng, missing.size())]);
      return LabelledGraph(g.labels(), std::move(edges));
    }
    case MutationKind::delete_edge: {
      auto order = g.edges();
      std::shuffle(order.begin(), order.end(), rng);
      for (auto e : order) {
        if (!detail::connected_without(g, e)) continue;
        auto edges = g.edges();
        edges.erase(std::find(edges.begin(), edges.end(), e));
        return LabelledGraph(g.labels(), std::move(edges));
      }
      throw NoMutation("delete-edge: every edge is a bridge");
    }
    case MutationKind::duplicate_node: {
      std::vector<NodeId> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (NodeId v : order) {
        if (g.degree(v) == 0) continue;
        auto labels = g.labels();
        labels.push_back(g.label(v));
        auto edges = g.edges();
        for (NodeId w : g.neighbours(v)) edges.emplace_back(w, n);
        return LabelledGraph(std::move(labels), std::move(edges));
      }
      throw NoMutation("duplicate-node: single isolated node");
    }
  }
  throw NoMutation("unknown mutation kind");
}

}  // namespace distauto
