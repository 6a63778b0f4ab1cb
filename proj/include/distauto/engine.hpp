#pragma once

// Run semantics: capped views, selection steps, synchronous runs with cycle
// detection, schedule-driven runs, verdict classification.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "distauto/graph.hpp"
#include "distauto/machine.hpp"
#include "distauto/schedule.hpp"

namespace distauto {

struct Configuration {
  std::vector<StateId> states;

  std::size_t size() const { return states.size(); }
  StateId operator[](NodeId v) const { return states[v]; }
  StateId& operator[](NodeId v) { return states[v]; }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct NeighborhoodView {
  std::vector<ViewEntry> entries;  // sorted by state, counts capped

  std::uint32_t operator()(StateId s) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), s,
                               [](const ViewEntry& e, StateId x) { return e.state < x; });
    return it != entries.end() && it->state == s ? it->count : 0;
  }
};

enum class Verdict { accepting, rejecting, undecided, inconsistent };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::accepting: return "ACCEPTING";
    case Verdict::rejecting: return "REJECTING";
    case Verdict::undecided: return "UNDECIDED";
    case Verdict::inconsistent: return "INCONSISTENT";
  }
  return "UNDECIDED";
}

struct RunLimits {
  std::uint64_t max_steps = 0;  // 0 picks 10|V|^2 + 1000
  std::size_t max_stored_configs = std::size_t{1} << 16;
};

struct RunResult {
  Verdict verdict = Verdict::undecided;
  /// first stable step for accepting/rejecting, steps run when undecided,
  /// cycle start when inconsistent.
  std::uint64_t step = 0;
  std::uint64_t cycle_start = 0;
  std::uint64_t cycle_length = 0;  // 0 when no cycle was closed
  std::string details;
  std::vector<Configuration> trace;  // C_0 .. C_{cycle_start + cycle_length} when recorded
  Configuration final;
};

struct RunOptions {
  bool record_trace = false;
  std::function<void(std::uint64_t, const Configuration&)> observer;
};

inline std::uint64_t default_max_steps(std::size_t n) { return 10 * std::uint64_t(n) * n + 1000; }

inline Configuration init_configuration(const DistributedMachine& m, const LabelledGraph& g) {
  if (m.alphabet() != g.alphabet())
    throw std::invalid_argument("machine '" + m.name() + "' reads " + std::string(to_string(m.alphabet())) +
                                " labels but the graph is " + std::string(to_string(g.alphabet())));
  Configuration c;
  c.states.reserve(g.size());
  for (NodeId v = 0; v < g.size(); ++v) c.states.push_back(m.init(g.label(v)));
  return c;
}

namespace detail {

inline void gather_view(const LabelledGraph& g, const Configuration& c, NodeId v, unsigned beta,
                        std::vector<ViewEntry>& out) {
  out.clear();
  for (NodeId w : g.neighbours(v)) out.push_back({c[w], 1});
  std::sort(out.begin(), out.end(), [](const ViewEntry& a, const ViewEntry& b) { return a.state < b.state; });
  std::size_t k = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (k > 0 && out[k - 1].state == out[i].state) ++out[k - 1].count;
    else out[k++] = out[i];
  }
  out.resize(k);
  for (auto& e : out) e.count = std::min<std::uint32_t>(e.count, beta);
}

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t cell_hash(NodeId v, StateId s) { return splitmix((std::uint64_t(v) << 32) | s); }

inline std::uint64_t config_hash(const Configuration& c) {
  std::uint64_t h = 0;
  for (NodeId v = 0; v < c.size(); ++v) h ^= cell_hash(v, c[v]);
  return h;
}

// bit 0: accepting configuration, bit 1: rejecting configuration
inline std::uint8_t config_flags(const DistributedMachine& m, const Configuration& c) {
  bool acc = true, rej = true;
  for (StateId s : c.states) {
    acc = acc && m.accepting(s);
    rej = rej && m.rejecting(s);
    if (!acc && !rej) break;
  }
  return static_cast<std::uint8_t>((acc ? 1 : 0) | (rej ? 2 : 0));
}

inline RunResult classify_cycle(const std::vector<std::uint8_t>& flags, std::uint64_t mu, std::uint64_t lambda) {
  RunResult r;
  r.cycle_start = mu;
  r.cycle_length = lambda;
  std::uint8_t all = 3;
  std::uint64_t acc = 0, rej = 0, neither = 0;
  for (std::uint64_t k = mu; k < mu + lambda; ++k) {
    all &= flags[k];
    acc += flags[k] & 1;
    rej += (flags[k] >> 1) & 1;
    neither += flags[k] == 0;
  }
  if (all & 1 || all & 2) {
    std::uint8_t bit = all & 1 ? 1 : 2;
    r.verdict = bit == 1 ? Verdict::accepting : Verdict::rejecting;
    std::uint64_t i = mu;
    while (i > 0 && (flags[i - 1] & bit)) --i;
    r.step = i;
    return r;
  }
  r.verdict = Verdict::inconsistent;
  r.step = mu;
  r.details = "cycle of length " + std::to_string(lambda) + " from step " + std::to_string(mu) + " has " +
              std::to_string(acc) + " accepting, " + std::to_string(rej) + " rejecting and " +
              std::to_string(neither) + " undecided configurations";
  return r;
}

/// Synchronous stepping that only re-evaluates nodes next to last step's changes.
class SyncStepper {
 public:
  SyncStepper(const DistributedMachine& m, const LabelledGraph& g) : m_(m), g_(g), stamp_(g.size(), 0) {
    for (NodeId v = 0; v < g.size(); ++v) changed_.push_back(v);
  }

  /// Advances `c` in place, returns the changed nodes.
  const std::vector<NodeId>& advance(Configuration& c, std::uint64_t* hash = nullptr) {
    ++epoch_;
    candidates_.clear();
    auto add = [&](NodeId v) {
      if (stamp_[v] != epoch_) {
        stamp_[v] = epoch_;
        candidates_.push_back(v);
      }
    };
    for (NodeId v : changed_) {
      add(v);
      for (NodeId w : g_.neighbours(v)) add(w);
    }
    updates_.clear();
    for (NodeId v : candidates_) {
      gather_view(g_, c, v, m_.beta(), view_);
      StateId s = m_.next(c[v], view_);
      if (s != c[v]) updates_.emplace_back(v, s);
    }
    changed_.clear();
    for (auto [v, s] : updates_) {
      if (hash) *hash ^= cell_hash(v, c[v]) ^ cell_hash(v, s);
      c[v] = s;
      changed_.push_back(v);
    }
    return changed_;
  }

 private:
  const DistributedMachine& m_;
  const LabelledGraph& g_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
  std::vector<NodeId> changed_, candidates_;
  std::vector<std::pair<NodeId, StateId>> updates_;
  std::vector<ViewEntry> view_;
};

}  // namespace detail

inline NeighborhoodView neighborhood_view(const LabelledGraph& g, const Configuration& c, NodeId v, unsigned beta) {
  if (v >= g.size()) throw std::invalid_argument("neighborhood_view: node not in graph");
  NeighborhoodView out;
  detail::gather_view(g, c, v, beta, out.entries);
  return out;
}

/// Selected agents move by their first matching rule, all reading `c`.
inline Configuration step(const DistributedMachine& m, const LabelledGraph& g, const Configuration& c,
                          const std::vector<NodeId>& selection) {
  Configuration out = c;
  std::vector<ViewEntry> view;
  for (NodeId v : selection) {
    if (v >= g.size()) throw std::invalid_argument("step: selected node not in graph");
    detail::gather_view(g, c, v, m.beta(), view);
    out[v] = m.next(c[v], view);
  }
  return out;
}

/// C_0 .. C_steps of the synchronous run, without cycle detection.
inline std::vector<Configuration> trajectory(const DistributedMachine& m, const LabelledGraph& g, std::uint64_t steps) {
  std::vector<Configuration> out{init_configuration(m, g)};
  Configuration c = out.front();
  detail::SyncStepper stepper(m, g);
  for (std::uint64_t i = 0; i < steps; ++i) {
    stepper.advance(c);
    out.push_back(c);
  }
  return out;
}

inline RunResult run_synchronous(const DistributedMachine& m, const LabelledGraph& g, RunLimits limits = {},
                                 const RunOptions& opts = {}) {
  const std::uint64_t max_steps = limits.max_steps ? limits.max_steps : default_max_steps(g.size());
  const std::size_t cap = std::max<std::size_t>(limits.max_stored_configs, 1);
  Configuration cur = init_configuration(m, g);
  std::uint64_t hash = detail::config_hash(cur);
  detail::SyncStepper stepper(m, g);
  std::vector<std::uint8_t> flags;
  std::vector<Configuration> history, trace;
  std::unordered_multimap<std::uint64_t, std::uint64_t> index;

  auto visit = [&](std::uint64_t i, const Configuration& c) {
    flags.push_back(detail::config_flags(m, c));
    if (opts.observer) opts.observer(i, c);
    if (opts.record_trace) trace.push_back(c);
  };
  auto finish = [&](RunResult r) {
    if (opts.record_trace) {
      if (r.cycle_length) trace.resize(r.cycle_start + r.cycle_length + 1);
      r.trace = std::move(trace);
    }
    r.final = cur;
    return r;
  };
  auto undecided = [&](std::uint64_t i) {
    RunResult r;
    r.verdict = Verdict::undecided;
    r.step = i;
    r.details = "no cycle within " + std::to_string(max_steps) + " steps";
    return finish(std::move(r));
  };

  std::uint64_t i = 0;
  for (;; ++i) {
    visit(i, cur);
    auto [lo, hi] = index.equal_range(hash);
    for (auto it = lo; it != hi; ++it) {
      if (history[it->second] == cur) {
        std::uint64_t j = it->second;
        return finish(detail::classify_cycle(flags, j, i - j));
      }
    }
    if (history.size() >= cap) break;
    history.push_back(cur);
    index.emplace(hash, i);
    if (i == max_steps) return undecided(i);
    stepper.advance(cur, &hash);
  }

  // storage exhausted: Brent's cycle finding from C_i on, then replay for mu
  std::uint64_t power = 1, lambda = 1;
  Configuration tortoise = cur;
  if (i == max_steps) return undecided(i);
  stepper.advance(cur);
  visit(++i, cur);
  while (!(cur == tortoise)) {
    if (power == lambda) {
      tortoise = cur;
      power *= 2;
      lambda = 0;
    }
    if (i == max_steps) return undecided(i);
    stepper.advance(cur);
    visit(++i, cur);
    ++lambda;
  }
  Configuration a = init_configuration(m, g), b = a;
  detail::SyncStepper sa(m, g), sb(m, g);
  for (std::uint64_t k = 0; k < lambda; ++k) sb.advance(b);
  std::uint64_t mu = 0;
  while (!(a == b)) {
    sa.advance(a);
    sb.advance(b);
    ++mu;
  }
  return finish(detail::classify_cycle(flags, mu, lambda));
}

/// Runs under an arbitrary schedule. Periodic schedules detect cycles on
/// configurations at period boundaries; others stop at a global fixed point.
inline RunResult run_scheduled(const DistributedMachine& m, const LabelledGraph& g, Schedule& schedule,
                               RunLimits limits = {}, const RunOptions& opts = {}) {
  if (schedule.size() != g.size()) throw std::invalid_argument("schedule was made for a different graph size");
  if (schedule.kind() == SchedulerKind::synchronous && !schedule.scripted() && schedule.steps() == 0)
    return run_synchronous(m, g, limits, opts);

  const std::uint64_t max_steps = limits.max_steps ? limits.max_steps : default_max_steps(g.size());
  const auto period = schedule.period();
  Configuration cur = init_configuration(m, g);
  std::vector<std::uint8_t> flags;
  std::vector<Configuration> snapshots, trace;
  std::unordered_multimap<std::uint64_t, std::uint64_t> index;  // hash -> snapshot step
  std::vector<std::uint64_t> snapshot_step;

  auto finish = [&](RunResult r) {
    if (opts.record_trace) {
      if (r.cycle_length) trace.resize(r.cycle_start + r.cycle_length + 1);
      r.trace = std::move(trace);
    }
    r.final = cur;
    return r;
  };

  std::vector<ViewEntry> view;
  bool quiet = false;  // last step changed nothing
  for (std::uint64_t i = 0;; ++i) {
    flags.push_back(detail::config_flags(m, cur));
    if (opts.observer) opts.observer(i, cur);
    if (opts.record_trace) trace.push_back(cur);

    if (period) {
      if (i % *period == 0) {
        std::uint64_t h = detail::config_hash(cur);
        auto [lo, hi] = index.equal_range(h);
        for (auto it = lo; it != hi; ++it)
          if (snapshots[it->second] == cur)
            return finish(detail::classify_cycle(flags, snapshot_step[it->second], i - snapshot_step[it->second]));
        if (snapshots.size() < limits.max_stored_configs) {
          index.emplace(h, snapshots.size());
          snapshots.push_back(cur);
          snapshot_step.push_back(i);
        }
      }
    } else if (quiet) {
      bool fixed = true;
      for (NodeId v = 0; v < g.size() && fixed; ++v) {
        detail::gather_view(g, cur, v, m.beta(), view);
        fixed = m.next(cur[v], view) == cur[v];
      }
      if (fixed) return finish(detail::classify_cycle(flags, i, 1));
    }
    if (i == max_steps) {
      RunResult r;
      r.verdict = Verdict::undecided;
      r.step = i;
      r.details = "no cycle within " + std::to_string(max_steps) + " steps";
      return finish(std::move(r));
    }
    auto sel = schedule.next();
    if (!permitted(schedule.kind(), g.size(), sel))
      throw std::invalid_argument("schedule produced a selection not permitted for the " +
                                  std::string(to_string(schedule.kind())) + " scheduler");
    Configuration nxt = step(m, g, cur, sel);
    quiet = nxt == cur;
    cur = std::move(nxt);
  }
}

// ---------------------------------------------------------------- traces

inline std::string format_config(const DistributedMachine& m, const Configuration& c) {
  std::string out;
  for (NodeId v = 0; v < c.size(); ++v) {
    if (v) out += ' ';
    out += std::to_string(v) + ":" + m.state_name(c[v]);
  }
  return out;
}

inline std::string verdict_line(const RunResult& r) {
  return "verdict " + std::string(to_string(r.verdict)) + " step " + std::to_string(r.step);
}

inline std::string format_trace(const DistributedMachine& m, const RunResult& r) {
  std::ostringstream out;
  for (std::size_t i = 0; i < r.trace.size(); ++i) out << "step " << i << ' ' << format_config(m, r.trace[i]) << '\n';
  out << verdict_line(r) << '\n';
  return out.str();
}

}  // namespace distauto
