#pragma once

// Selection generators with a sliding-window weak-fairness guarantee.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "distauto/graph.hpp"
#include "distauto/random.hpp"

namespace distauto {

enum class SchedulerKind { synchronous, liberal, exclusive };

inline std::string_view to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::synchronous: return "synchronous";
    case SchedulerKind::liberal: return "liberal";
    case SchedulerKind::exclusive: return "exclusive";
  }
  return "synchronous";
}

inline SchedulerKind parse_scheduler_kind(std::string_view s) {
  if (s == "synchronous" || s == "sync" || s == "$") return SchedulerKind::synchronous;
  if (s == "liberal" || s == "s") return SchedulerKind::liberal;
  if (s == "exclusive" || s == "S") return SchedulerKind::exclusive;
  throw std::invalid_argument("unknown scheduler '" + std::string(s) + "'");
}

/// True iff `sel` is a selection the scheduler kind permits on n agents.
inline bool permitted(SchedulerKind kind, std::size_t n, const std::vector<NodeId>& sel) {
  std::vector<char> seen(n, 0);
  for (NodeId v : sel) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  switch (kind) {
    case SchedulerKind::synchronous: return sel.size() == n;
    case SchedulerKind::exclusive: return sel.size() == 1;
    case SchedulerKind::liberal: return true;
  }
  return false;
}

class Schedule {
 public:
  static Schedule make(SchedulerKind kind, std::size_t n, std::uint64_t seed, std::optional<std::size_t> window = {}) {
    if (n == 0) throw std::invalid_argument("schedule over an empty graph");
    Schedule s;
    s.kind_ = kind;
    s.n_ = n;
    s.seed_ = seed;
    s.window_ = window.value_or(4 * n);
    if (s.window_ == 0) throw std::invalid_argument("fairness window must be positive");
    if (kind == SchedulerKind::exclusive && s.window_ < n)
      throw std::invalid_argument("exclusive scheduler needs a window of at least |V| = " + std::to_string(n));
    s.rng_.seed(seed);
    s.last_.assign(n, -1);
    return s;
  }

  /// Fixed selection list, repeated cyclically; used to drive exact scenarios.
  static Schedule scripted(SchedulerKind kind, std::size_t n, std::vector<std::vector<NodeId>> script) {
    if (script.empty()) throw std::invalid_argument("scripted schedule needs at least one selection");
    Schedule s;
    s.kind_ = kind;
    s.n_ = n;
    s.window_ = script.size();
    s.script_ = std::move(script);
    s.last_.assign(n, -1);
    return s;
  }

  SchedulerKind kind() const { return kind_; }
  std::size_t window() const { return window_; }
  std::size_t size() const { return n_; }
  std::uint64_t steps() const { return t_; }
  bool scripted() const { return !script_.empty(); }

  /// Length of the repeating selection pattern, when there is one.
  std::optional<std::size_t> period() const {
    if (!script_.empty()) return script_.size();
    if (kind_ == SchedulerKind::synchronous) return 1;
    if (kind_ == SchedulerKind::exclusive) return n_;
    return std::nullopt;
  }

  std::vector<NodeId> next() {
    std::vector<NodeId> sel;
    if (!script_.empty()) {
      sel = script_[t_ % script_.size()];
    } else if (kind_ == SchedulerKind::synchronous) {
      for (NodeId v = 0; v < n_; ++v) sel.push_back(v);
    } else if (kind_ == SchedulerKind::exclusive) {
      sel.push_back(static_cast<NodeId>((seed_ % n_ + t_) % n_));
    } else {
      const auto t = static_cast<std::int64_t>(t_);
      for (NodeId v = 0; v < n_; ++v) {
        bool pick = (rng_() & 1u) != 0;
        if (t - last_[v] >= static_cast<std::int64_t>(window_)) pick = true;
        if (pick) sel.push_back(v);
      }
    }
    for (NodeId v : sel)
      if (v < n_) last_[v] = static_cast<std::int64_t>(t_);
    ++t_;
    return sel;
  }

 private:
  Schedule() = default;

  SchedulerKind kind_ = SchedulerKind::synchronous;
  std::size_t n_ = 0;
  std::uint64_t seed_ = 0;
  std::size_t window_ = 1;
  std::uint64_t t_ = 0;
  std::mt19937_64 rng_;
  std::vector<std::int64_t> last_;
  std::vector<std::vector<NodeId>> script_;
};

inline Schedule make_schedule(SchedulerKind kind, const LabelledGraph& g, std::uint64_t seed,
                              std::optional<std::size_t> window = {}) {
  return Schedule::make(kind, g.size(), seed, window);
}

}  // namespace distauto
