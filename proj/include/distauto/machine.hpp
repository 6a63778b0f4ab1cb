#pragma once

// Distributed machines: prioritized ground rules over capped neighbourhood
// counts, compiled to dense state ids; products of two machines.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "distauto/graph.hpp"
#include "distauto/state.hpp"

namespace distauto {

using StateId = std::uint32_t;

enum class Detection { d, D };
enum class Acceptance { a, A };
enum class ProductMode { stable_consensus, halting };
enum class Cmp { ge, eq, le };

inline std::string_view to_string(Detection d) { return d == Detection::d ? "d" : "D"; }
inline std::string_view to_string(Acceptance a) { return a == Acceptance::a ? "a" : "A"; }
inline std::string_view to_string(ProductMode m) {
  return m == ProductMode::stable_consensus ? "stable-consensus" : "halting";
}
inline std::string_view to_string(Cmp c) { return c == Cmp::ge ? ">=" : c == Cmp::eq ? "==" : "<="; }

inline ProductMode parse_product_mode(std::string_view s) {
  if (s == "stable-consensus") return ProductMode::stable_consensus;
  if (s == "halting") return ProductMode::halting;
  throw std::invalid_argument("unknown product mode '" + std::string(s) + "'");
}

struct CountAtom {
  std::string pattern;
  Cmp op = Cmp::ge;
  unsigned k = 1;
};

struct Rule {
  int priority = 0;
  std::string source;  // pattern
  std::vector<CountAtom> atoms;
  std::string result;
};

/// Declarative description of a rule machine, as written in machine files.
struct MachineSpec {
  std::string name;
  Detection detection = Detection::D;
  Acceptance acceptance = Acceptance::A;
  unsigned beta = 2;
  Alphabet alphabet = Alphabet::plain;
  std::vector<std::string> states;  // inventory; referenced ground states are added
  std::vector<std::pair<NodeLabel, std::string>> init;
  std::vector<std::string> accepting;
  std::vector<std::string> rejecting;
  std::vector<Rule> rules;
};

struct ViewEntry {
  StateId state;
  std::uint32_t count;
  friend bool operator==(const ViewEntry&, const ViewEntry&) = default;
};

class DistributedMachine;

namespace detail {

inline constexpr StateId kNoState = UINT32_MAX;

struct CompiledAtom {
  std::uint32_t pattern;
  Cmp op;
  unsigned k;
};

struct CompiledRule {
  std::vector<CompiledAtom> atoms;
  StateId result;
};

class RuleTable {
 public:
  explicit RuleTable(MachineSpec spec) : spec_(std::move(spec)) {
    if (spec_.beta < 1) throw std::invalid_argument("machine '" + spec_.name + "': counting bound must be positive");
    std::stable_sort(spec_.rules.begin(), spec_.rules.end(),
                     [](const Rule& a, const Rule& b) { return a.priority < b.priority; });
    for (const auto& s : spec_.states) intern(s);
    for (const auto& [l, s] : spec_.init) intern(s);
    for (const auto& s : spec_.accepting) intern(s);
    for (const auto& s : spec_.rejecting) intern(s);
    std::vector<Pattern> sources;
    for (const auto& r : spec_.rules) {
      sources.push_back(Pattern::parse(r.source));
      if (auto lit = sources.back().literal()) intern(*lit);
      intern(r.result);
    }
    spec_.states = names_;

    accepting_.assign(names_.size(), 0);
    rejecting_.assign(names_.size(), 0);
    for (const auto& s : spec_.accepting) accepting_[ids_.at(s)] = 1;
    for (const auto& s : spec_.rejecting) rejecting_[ids_.at(s)] = 1;
    init_.fill(kNoState);
    for (const auto& [l, s] : spec_.init) {
      if (!l.valid() || l.alphabet() != spec_.alphabet)
        throw std::invalid_argument("machine '" + spec_.name + "': init label '" + l.text() + "' outside alphabet");
      init_[l.index()] = ids_.at(s);
    }

    by_state_.resize(names_.size());
    for (std::size_t i = 0; i < spec_.rules.size(); ++i) {
      const Rule& r = spec_.rules[i];
      CompiledRule c{{}, ids_.at(r.result)};
      for (const auto& a : r.atoms) c.atoms.push_back({pattern_id(a.pattern), a.op, a.k});
      rules_.push_back(std::move(c));
      auto idx = static_cast<std::uint32_t>(i);
      if (auto lit = sources[i].literal()) {
        by_state_[ids_.at(*lit)].push_back(idx);
      } else {
        for (StateId s = 0; s < names_.size(); ++s)
          if (sources[i].matches(names_[s])) by_state_[s].push_back(idx);
      }
    }
  }

  const MachineSpec& spec() const { return spec_; }
  std::size_t size() const { return names_.size(); }
  const std::string& name(StateId s) const { return names_.at(s); }
  std::optional<StateId> find(std::string_view s) const {
    auto it = ids_.find(std::string(s));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  bool accepting(StateId s) const { return accepting_[s] != 0; }
  bool rejecting(StateId s) const { return rejecting_[s] != 0; }
  StateId init(const NodeLabel& l) const {
    StateId s = l.valid() && l.alphabet() == spec_.alphabet ? init_[l.index()] : kNoState;
    if (s == kNoState) throw std::invalid_argument("machine '" + spec_.name + "' has no initial state for label '" + l.text() + "'");
    return s;
  }
  bool has_init(const NodeLabel& l) const { return init_[l.index()] != kNoState; }

  std::uint32_t count(std::uint32_t pattern, std::span<const ViewEntry> view) const {
    const auto& bits = patterns_[pattern];
    std::uint32_t total = 0;
    for (const auto& e : view)
      if ((bits[e.state >> 6] >> (e.state & 63)) & 1u) total += e.count;
    return total;
  }

  /// Count for an ad-hoc pattern text (tests, diagnostics).
  std::uint32_t query(std::string_view pattern, std::span<const ViewEntry> view) const {
    Pattern p = Pattern::parse(pattern);
    std::uint32_t total = 0;
    for (const auto& e : view)
      if (p.matches(names_.at(e.state))) total += e.count;
    return total;
  }

  StateId next(StateId s, std::span<const ViewEntry> view) const {
    for (std::uint32_t idx : by_state_[s]) {
      const CompiledRule& r = rules_[idx];
      bool ok = true;
      for (const auto& a : r.atoms) {
        std::uint32_t c = count(a.pattern, view);
        ok = a.op == Cmp::ge ? c >= a.k : a.op == Cmp::eq ? c == a.k : c <= a.k;
        if (!ok) break;
      }
      if (ok) return r.result;
    }
    return s;
  }

  std::span<const std::uint32_t> candidates(StateId s) const { return by_state_[s]; }
  StateId rule_result(std::uint32_t idx) const { return rules_[idx].result; }

 private:
  StateId intern(const std::string& s) {
    if (auto it = ids_.find(s); it != ids_.end()) return it->second;
    if (!valid_state_name(s)) throw std::invalid_argument("invalid state name '" + s + "'");
    auto id = static_cast<StateId>(names_.size());
    names_.push_back(s);
    ids_.emplace(s, id);
    return id;
  }

  std::uint32_t pattern_id(const std::string& text) {
    if (auto it = pattern_ids_.find(text); it != pattern_ids_.end()) return it->second;
    Pattern p = Pattern::parse(text);
    std::vector<std::uint64_t> bits((names_.size() + 63) / 64, 0);
    if (auto lit = p.literal()) {
      if (auto id = find(*lit)) bits[*id >> 6] |= std::uint64_t{1} << (*id & 63);
    } else {
      for (StateId s = 0; s < names_.size(); ++s)
        if (p.matches(names_[s])) bits[s >> 6] |= std::uint64_t{1} << (s & 63);
    }
    auto id = static_cast<std::uint32_t>(patterns_.size());
    patterns_.push_back(std::move(bits));
    pattern_ids_.emplace(text, id);
    return id;
  }

  MachineSpec spec_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> ids_;
  std::vector<char> accepting_, rejecting_;
  std::array<StateId, 12> init_{};
  std::vector<CompiledRule> rules_;
  std::vector<std::vector<std::uint32_t>> by_state_;
  std::vector<std::vector<std::uint64_t>> patterns_;
  std::unordered_map<std::string, std::uint32_t> pattern_ids_;
};

struct ProductBody;

}  // namespace detail

/// Immutable machine value; copies share the compiled body.
class DistributedMachine {
 public:
  explicit DistributedMachine(MachineSpec spec)
      : body_(std::make_shared<const Body>(Body{detail::RuleTable(std::move(spec)), nullptr})) {}

  static DistributedMachine product(const DistributedMachine& first, const DistributedMachine& second,
                                    ProductMode mode, std::string name = "");

  /// Same machine reading snowball-fight labels through the numbering projection.
  DistributedMachine adapted() const {
    if (alphabet() != Alphabet::plain)
      throw std::invalid_argument("adapt_labels: machine '" + name() + "' does not read plain labels");
    DistributedMachine m = *this;
    m.projected_ = true;
    return m;
  }

  bool is_product() const { return body_->product != nullptr; }
  bool projected() const { return projected_; }
  const detail::RuleTable& table() const {
    if (is_product()) throw std::logic_error("product machine has no rule table");
    return body_->table;
  }

  const std::string& name() const;
  Detection detection() const;
  Acceptance acceptance() const;
  unsigned beta() const;
  /// Labelling alphabet the machine reads.
  Alphabet alphabet() const { return projected_ ? Alphabet::snowball : inner_alphabet(); }
  Alphabet inner_alphabet() const;

  std::uint64_t state_count() const;
  std::string state_name(StateId s) const;
  std::optional<StateId> find_state(std::string_view name) const;
  StateId init(const NodeLabel& l) const;
  bool accepting(StateId s) const;
  bool rejecting(StateId s) const;
  StateId next(StateId s, std::span<const ViewEntry> view) const;

  const DistributedMachine& first() const;
  const DistributedMachine& second() const;
  ProductMode mode() const;
  std::pair<StateId, StateId> split(StateId s) const;
  StateId join(StateId a, StateId b) const;

 private:
  struct Body {
    detail::RuleTable table;
    std::shared_ptr<const detail::ProductBody> product;
  };
  explicit DistributedMachine(std::shared_ptr<const Body> b) : body_(std::move(b)) {}

  std::shared_ptr<const Body> body_;
  bool projected_ = false;
};

namespace detail {

struct ProductBody {
  DistributedMachine first;
  DistributedMachine second;
  ProductMode mode;
  std::string name;
  unsigned beta;
  std::uint64_t width;  // state count of second
};

inline MachineSpec empty_spec() {
  MachineSpec s;
  s.name = "product";
  return s;
}

/// Sums capped pair-counts per component state, then re-caps at that
/// component's bound; agrees with the component's own view.
template <class Key>
inline void project_view(std::span<const ViewEntry> view, Key key, unsigned cap, std::vector<ViewEntry>& out) {
  out.clear();
  for (const auto& e : view) out.push_back({key(e.state), e.count});
  std::sort(out.begin(), out.end(), [](const ViewEntry& a, const ViewEntry& b) { return a.state < b.state; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (w > 0 && out[w - 1].state == out[i].state) out[w - 1].count += out[i].count;
    else out[w++] = out[i];
  }
  out.resize(w);
  for (auto& e : out) e.count = std::min<std::uint32_t>(e.count, cap);
}

}  // namespace detail

inline DistributedMachine DistributedMachine::product(const DistributedMachine& first, const DistributedMachine& second,
                                                      ProductMode mode, std::string name) {
  if (first.alphabet() != second.alphabet())
    throw std::invalid_argument("product: machines read different labelling alphabets");
  if (mode == ProductMode::halting &&
      (first.acceptance() != Acceptance::a || second.acceptance() != Acceptance::a))
    throw std::invalid_argument("product: halting mode needs two halting-acceptance machines");
  std::uint64_t total = first.state_count() * second.state_count();
  if (total >= detail::kNoState) throw std::invalid_argument("product: state space too large");
  if (name.empty()) name = "product(" + first.name() + "," + second.name() + ")";
  auto pb = std::make_shared<const detail::ProductBody>(detail::ProductBody{
      first, second, mode, std::move(name), std::max(first.beta(), second.beta()), second.state_count()});
  return DistributedMachine(std::make_shared<const Body>(Body{detail::RuleTable(detail::empty_spec()), pb}));
}

inline const std::string& DistributedMachine::name() const {
  return is_product() ? body_->product->name : body_->table.spec().name;
}
inline Detection DistributedMachine::detection() const {
  if (!is_product()) return body_->table.spec().detection;
  return beta() >= 2 ? Detection::D : Detection::d;
}
inline Acceptance DistributedMachine::acceptance() const {
  if (!is_product()) return body_->table.spec().acceptance;
  return body_->product->mode == ProductMode::halting ? Acceptance::a : Acceptance::A;
}
inline unsigned DistributedMachine::beta() const {
  return is_product() ? body_->product->beta : body_->table.spec().beta;
}
inline Alphabet DistributedMachine::inner_alphabet() const {
  return is_product() ? body_->product->first.alphabet() : body_->table.spec().alphabet;
}
inline std::uint64_t DistributedMachine::state_count() const {
  if (!is_product()) return body_->table.size();
  return body_->product->first.state_count() * body_->product->width;
}
inline std::pair<StateId, StateId> DistributedMachine::split(StateId s) const {
  auto w = body_->product->width;
  return {static_cast<StateId>(s / w), static_cast<StateId>(s % w)};
}
inline StateId DistributedMachine::join(StateId a, StateId b) const {
  return static_cast<StateId>(a * body_->product->width + b);
}
inline const DistributedMachine& DistributedMachine::first() const {
  if (!is_product()) throw std::logic_error("not a product machine");
  return body_->product->first;
}
inline const DistributedMachine& DistributedMachine::second() const {
  if (!is_product()) throw std::logic_error("not a product machine");
  return body_->product->second;
}
inline ProductMode DistributedMachine::mode() const {
  if (!is_product()) throw std::logic_error("not a product machine");
  return body_->product->mode;
}

inline std::string DistributedMachine::state_name(StateId s) const {
  if (!is_product()) return body_->table.name(s);
  auto [a, b] = split(s);
  return "[" + first().state_name(a) + ";" + second().state_name(b) + "]";
}

inline std::optional<StateId> DistributedMachine::find_state(std::string_view name) const {
  if (!is_product()) return body_->table.find(name);
  if (name.size() < 2 || name.front() != '[' || name.back() != ']') return std::nullopt;
  // the separator is the ';' at bracket depth one
  int depth = 0;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (name[i] == '[') ++depth;
    else if (name[i] == ']') --depth;
    else if (name[i] == ';' && depth == 1) {
      auto a = first().find_state(name.substr(1, i - 1));
      auto b = second().find_state(name.substr(i + 1, name.size() - i - 2));
      if (!a || !b) return std::nullopt;
      return join(*a, *b);
    }
  }
  return std::nullopt;
}

inline StateId DistributedMachine::init(const NodeLabel& l) const {
  if (l.alphabet() != alphabet())
    throw std::invalid_argument("machine '" + name() + "' reads " + std::string(to_string(alphabet())) +
                                " labels, got '" + l.text() + "'");
  NodeLabel in = projected_ ? l.projected() : l;
  if (!is_product()) return body_->table.init(in);
  return join(first().init(in), second().init(in));
}

inline bool DistributedMachine::accepting(StateId s) const {
  if (!is_product()) return body_->table.accepting(s);
  auto [a, b] = split(s);
  return first().accepting(a) && second().accepting(b);
}

inline bool DistributedMachine::rejecting(StateId s) const {
  if (!is_product()) return body_->table.rejecting(s);
  auto [a, b] = split(s);
  return first().rejecting(a) || (first().accepting(a) && second().rejecting(b));
}

inline StateId DistributedMachine::next(StateId s, std::span<const ViewEntry> view) const {
  if (!is_product()) return body_->table.next(s, view);
  const auto& p = *body_->product;
  auto [a, b] = split(s);
  if (p.mode == ProductMode::halting && p.first.rejecting(a)) return s;
  std::vector<ViewEntry> v1, v2;
  auto w = p.width;
  detail::project_view(view, [w](StateId x) { return static_cast<StateId>(x / w); }, p.first.beta(), v1);
  detail::project_view(view, [w](StateId x) { return static_cast<StateId>(x % w); }, p.second.beta(), v2);
  return join(p.first.next(a, v1), p.second.next(b, v2));
}

inline DistributedMachine product_machine(const DistributedMachine& m1, const DistributedMachine& m2, ProductMode mode) {
  return DistributedMachine::product(m1, m2, mode);
}

inline DistributedMachine adapt_labels(const DistributedMachine& m) { return m.adapted(); }

// ---------------------------------------------------------------- validation

namespace detail {

inline void validate_table(const RuleTable& t, std::vector<std::string>& out, const std::string& prefix) {
  const auto& spec = t.spec();
  for (StateId s = 0; s < t.size(); ++s)
    if (t.accepting(s) && t.rejecting(s)) out.push_back(prefix + "state " + t.name(s) + " is both accepting and rejecting");
  if (spec.detection == Detection::d && spec.beta != 1)
    out.push_back(prefix + "detection d needs counting bound 1, got " + std::to_string(spec.beta));
  if (spec.detection == Detection::D && spec.beta < 2)
    out.push_back(prefix + "detection D needs counting bound at least 2");
  int labels = spec.alphabet == Alphabet::plain ? 3 : 12;
  for (int i = 0; i < labels; ++i) {
    NodeLabel l = spec.alphabet == Alphabet::plain ? NodeLabel::plain(i)
                                                   : NodeLabel::fight(i / 4, (i / 2) % 2 ? 1 : -1, i % 2);
    if (!t.has_init(l)) out.push_back(prefix + "no initial state for label " + l.text());
  }
  if (spec.acceptance != Acceptance::a) return;

  std::vector<StateId> decided;
  for (StateId s = 0; s < t.size(); ++s)
    if (t.accepting(s) || t.rejecting(s)) decided.push_back(s);

  // exhaustive over every capped view when that is small enough
  double views = 1;
  for (std::size_t i = 0; i < t.size() && views <= (1 << 20); ++i) views *= spec.beta + 1;
  if (views <= (1 << 20)) {
    std::vector<std::uint32_t> counts(t.size(), 0);
    std::vector<ViewEntry> view;
    for (;;) {
      view.clear();
      for (StateId q = 0; q < t.size(); ++q)
        if (counts[q]) view.push_back({q, counts[q]});
      for (StateId s : decided) {
        StateId r = t.next(s, view);
        if (r != s) {
          out.push_back(prefix + "halting violation: " + t.name(s) + " moves to " + t.name(r));
          return;
        }
      }
      std::size_t i = 0;
      while (i < counts.size() && counts[i] == spec.beta) counts[i++] = 0;
      if (i == counts.size()) break;
      ++counts[i];
    }
    return;
  }
  // too many views: any rule that can leave a decided state is a violation
  for (StateId s : decided) {
    for (std::uint32_t idx : t.candidates(s)) {
      if (t.rule_result(idx) != s) {
        out.push_back(prefix + "halting violation: a rule rewrites " + t.name(s) + " to " +
                      t.name(t.rule_result(idx)));
        break;
      }
    }
  }
}

inline void validate_into(const DistributedMachine& m, std::vector<std::string>& out, const std::string& prefix) {
  if (!m.is_product()) {
    validate_table(m.table(), out, prefix);
    return;
  }
  validate_into(m.first(), out, prefix + "first: ");
  validate_into(m.second(), out, prefix + "second: ");
  if (m.first().alphabet() != m.second().alphabet()) out.push_back(prefix + "components read different alphabets");
  if (m.mode() == ProductMode::halting &&
      (m.first().acceptance() != Acceptance::a || m.second().acceptance() != Acceptance::a))
    out.push_back(prefix + "halting product over a stable-consensus component");
}

}  // namespace detail

/// Empty iff every machine invariant holds.
inline std::vector<std::string> validate_machine(const DistributedMachine& m) {
  std::vector<std::string> out;
  detail::validate_into(m, out, "");
  return out;
}

}  // namespace distauto
