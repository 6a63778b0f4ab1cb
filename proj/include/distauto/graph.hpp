#pragma once

// Labelled graphs over the two labelling alphabets used by the machines in
// this library, plus the line-based text format.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "distauto/text.hpp"

namespace distauto {

using NodeId = std::uint32_t;

enum class Alphabet { plain, snowball };

inline std::string_view to_string(Alphabet a) {
  return a == Alphabet::plain ? "plain" : "snowball";
}

/// Label of a node. `numbering` is always present; the snowball-fight
/// alphabet adds a facing direction and an initial-snowball bit.
struct NodeLabel {
  int numbering = 0;
  std::optional<int> direction;  // -1 or +1
  std::optional<int> snowball;   // 0 or 1

  static NodeLabel plain(int n) { return NodeLabel{n, std::nullopt, std::nullopt}; }
  static NodeLabel fight(int n, int d, int s) { return NodeLabel{n, d, s}; }

  Alphabet alphabet() const {
    return direction.has_value() ? Alphabet::snowball : Alphabet::plain;
  }
  NodeLabel projected() const { return plain(numbering); }

  bool valid() const {
    if (numbering < 0 || numbering > 2) return false;
    if (direction.has_value() != snowball.has_value()) return false;
    if (direction && *direction != -1 && *direction != 1) return false;
    if (snowball && *snowball != 0 && *snowball != 1) return false;
    return true;
  }

  /// Dense index: 0..2 for plain labels, 0..11 for snowball-fight labels.
  int index() const {
    if (!direction) return numbering;
    return numbering * 4 + (*direction > 0 ? 2 : 0) + *snowball;
  }

  std::string text() const {
    std::string out = std::to_string(numbering);
    if (direction) {
      out += *direction > 0 ? " +1 " : " -1 ";
      out += std::to_string(*snowball);
    }
    return out;
  }

  friend auto operator<=>(const NodeLabel&, const NodeLabel&) = default;
};

/// Finite, connected, simple, undirected graph with one label per node.
/// Node ids are dense: 0..size()-1. Immutable after construction.
class LabelledGraph {
 public:
  using Edge = std::pair<NodeId, NodeId>;

  LabelledGraph(std::vector<NodeLabel> labels, std::vector<Edge> edges)
      : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("graph must have at least one node");
    alphabet_ = labels_.front().alphabet();
    for (const auto& l : labels_) {
      if (!l.valid()) throw std::invalid_argument("invalid node label '" + l.text() + "'");
      if (l.alphabet() != alphabet_) throw std::invalid_argument("labels mix plain and snowball alphabets");
    }
    adjacency_.resize(labels_.size());
    for (auto [u, v] : edges) {
      if (u >= labels_.size() || v >= labels_.size())
        throw std::invalid_argument("edge refers to unknown node");
      if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
      if (u > v) std::swap(u, v);
      edges_.emplace_back(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw std::invalid_argument("duplicate edge");
    for (auto [u, v] : edges_) {
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& a : adjacency_) std::sort(a.begin(), a.end());
    if (!connected()) throw std::invalid_argument("graph is not connected");
  }

  std::size_t size() const { return labels_.size(); }
  Alphabet alphabet() const { return alphabet_; }
  const NodeLabel& label(NodeId v) const { return labels_.at(v); }
  const std::vector<NodeLabel>& labels() const { return labels_; }
  std::span<const NodeId> neighbours(NodeId v) const { return adjacency_.at(v); }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& a = adjacency_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  friend bool operator==(const LabelledGraph& a, const LabelledGraph& b) {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  bool connected() const {
    std::vector<char> seen(labels_.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : adjacency_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == labels_.size();
  }

  std::vector<NodeLabel> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  Alphabet alphabet_ = Alphabet::plain;
};

/// Canonical text form: header, nodes in id order, edges sorted.
inline std::string to_text(const LabelledGraph& g) {
  std::ostringstream out;
  out << "graph " << to_string(g.alphabet()) << '\n';
  for (NodeId v = 0; v < g.size(); ++v) out << "node " << v << ' ' << g.label(v).text() << '\n';
  for (auto [u, v] : g.edges()) out << "edge " << u << ' ' << v << '\n';
  return out.str();
}

/// Parses the graph text format. Node ids may be any distinct non-negative
/// integers; they are renumbered densely in ascending order.
inline LabelledGraph parse_graph(std::string_view text) {
  std::optional<Alphabet> alphabet;
  std::vector<std::pair<long long, NodeLabel>> nodes;
  std::vector<std::pair<long long, long long>> raw_edges;
  std::vector<std::size_t> edge_lines;

  for (const auto& line : split_lines(text)) {
    const auto& tok = line.tokens;
    auto fail = [&](const std::string& what) { throw ParseError(line.number, what); };
    if (!alphabet) {
      if (tok.size() != 2 || tok[0] != "graph") fail("expected 'graph <plain|snowball>'");
      if (tok[1] == "plain") alphabet = Alphabet::plain;
      else if (tok[1] == "snowball") alphabet = Alphabet::snowball;
      else fail("unknown alphabet '" + tok[1] + "'");
      continue;
    }
    if (tok[0] == "node") {
      std::size_t want = *alphabet == Alphabet::plain ? 3 : 5;
      if (tok.size() != want) fail("node line has wrong number of fields for this alphabet");
      long long id = parse_int(tok[1], line.number);
      if (id < 0) fail("negative node id");
      NodeLabel l = NodeLabel::plain(static_cast<int>(parse_int(tok[2], line.number)));
      if (*alphabet == Alphabet::snowball) {
        if (tok[3] != "+1" && tok[3] != "-1") fail("direction must be +1 or -1");
        l.direction = tok[3] == "+1" ? 1 : -1;
        l.snowball = static_cast<int>(parse_int(tok[4], line.number));
      }
      if (!l.valid()) fail("invalid label");
      nodes.emplace_back(id, l);
    } else if (tok[0] == "edge") {
      if (tok.size() != 3) fail("expected 'edge <id> <id>'");
      raw_edges.emplace_back(parse_int(tok[1], line.number), parse_int(tok[2], line.number));
      edge_lines.push_back(line.number);
    } else if (tok[0] == "graph") {
      fail("duplicate graph header (mixed alphabets?)");
    } else {
      fail("unknown directive '" + tok[0] + "'");
    }
  }
  if (!alphabet) throw ParseError(0, "empty graph file");
  if (nodes.empty()) throw ParseError(0, "graph has no nodes");

  std::vector<long long> ids;
  for (const auto& n : nodes) ids.push_back(n.first);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw ParseError(0, "duplicate node id");
  auto dense = [&](long long id, std::size_t line) -> NodeId {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) throw ParseError(line, "edge refers to unknown node " + std::to_string(id));
    return static_cast<NodeId>(it - ids.begin());
  };
  std::vector<NodeLabel> labels(nodes.size());
  for (const auto& [id, l] : nodes) labels[dense(id, 0)] = l;
  std::vector<LabelledGraph::Edge> edges;
  for (std::size_t i = 0; i < raw_edges.size(); ++i)
    edges.emplace_back(dense(raw_edges[i].first, edge_lines[i]), dense(raw_edges[i].second, edge_lines[i]));
  try {
    return LabelledGraph(std::move(labels), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace distauto
