#pragma once

// Left-bounded single-tape Turing machines, their configuration relation,
// direct execution, and the T-infinity transformation.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "distauto/state.hpp"
#include "distauto/text.hpp"

namespace distauto {

struct TMAction {
  int state;
  int symbol;
  int move;  // -1 or +1
  friend bool operator==(const TMAction&, const TMAction&) = default;
};

class TuringMachine {
 public:
  TuringMachine(std::string name, std::vector<std::string> states, std::vector<std::string> symbols, int initial,
                std::vector<int> accepting, int blank, std::vector<int> input)
      : name_(std::move(name)),
        states_(std::move(states)),
        symbols_(std::move(symbols)),
        initial_(initial),
        blank_(blank),
        accepting_(states_.size(), 0),
        input_(symbols_.size(), 0),
        delta_(states_.size() * symbols_.size()) {
    if (states_.empty() || symbols_.empty()) throw std::invalid_argument("turing machine needs states and symbols");
    index(states_, state_ids_, "state");
    index(symbols_, symbol_ids_, "symbol");
    check_state(initial_);
    check_symbol(blank_);
    for (int f : accepting) accepting_.at(check_state(f)) = 1;
    for (int s : input) {
      if (check_symbol(s) == blank_) throw std::invalid_argument("blank symbol cannot be an input symbol");
      input_[s] = 1;
    }
  }

  const std::string& name() const { return name_; }
  std::size_t state_count() const { return states_.size(); }
  std::size_t symbol_count() const { return symbols_.size(); }
  const std::string& state_name(int q) const { return states_.at(q); }
  const std::string& symbol_name(int s) const { return symbols_.at(s); }
  int initial() const { return initial_; }
  int blank() const { return blank_; }
  bool accepting(int q) const { return accepting_.at(q) != 0; }
  bool input_symbol(int s) const { return input_.at(s) != 0; }

  std::optional<int> find_state(std::string_view n) const {
    auto it = state_ids_.find(std::string(n));
    return it == state_ids_.end() ? std::nullopt : std::optional<int>(it->second);
  }
  std::optional<int> find_symbol(std::string_view n) const {
    auto it = symbol_ids_.find(std::string(n));
    return it == symbol_ids_.end() ? std::nullopt : std::optional<int>(it->second);
  }

  const std::optional<TMAction>& action(int q, int s) const {
    check_state(q);
    check_symbol(s);
    return delta_[q * symbols_.size() + s];
  }

  void set(int q, int s, TMAction a) {
    check_state(q);
    check_symbol(s);
    check_state(a.state);
    check_symbol(a.symbol);
    if (a.move != -1 && a.move != 1) throw std::invalid_argument("move must be -1 or +1");
    if (accepting(q)) throw std::invalid_argument("accepting state " + states_[q] + " cannot have transitions");
    auto& slot = delta_[q * symbols_.size() + s];
    if (slot) throw std::invalid_argument("duplicate transition for (" + states_[q] + ", " + symbols_[s] + ")");
    slot = a;
  }

  std::vector<int> accepting_states() const {
    std::vector<int> out;
    for (std::size_t q = 0; q < states_.size(); ++q)
      if (accepting_[q]) out.push_back(static_cast<int>(q));
    return out;
  }
  std::vector<int> input_symbols() const {
    std::vector<int> out;
    for (std::size_t s = 0; s < symbols_.size(); ++s)
      if (input_[s]) out.push_back(static_cast<int>(s));
    return out;
  }

 private:
  static void index(const std::vector<std::string>& names, std::unordered_map<std::string, int>& ids, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!valid_state_name(names[i]) || tuple_fields(names[i]))
        throw std::invalid_argument(std::string("invalid ") + what + " name '" + names[i] + "'");
      if (!ids.emplace(names[i], static_cast<int>(i)).second)
        throw std::invalid_argument(std::string("duplicate ") + what + " '" + names[i] + "'");
    }
  }
  int check_state(int q) const {
    if (q < 0 || static_cast<std::size_t>(q) >= states_.size()) throw std::invalid_argument("state index out of range");
    return q;
  }
  int check_symbol(int s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= symbols_.size())
      throw std::invalid_argument("symbol not in tape alphabet");
    return s;
  }

  std::string name_;
  std::vector<std::string> states_, symbols_;
  std::unordered_map<std::string, int> state_ids_, symbol_ids_;
  int initial_;
  int blank_;
  std::vector<char> accepting_, input_;
  std::vector<std::optional<TMAction>> delta_;
};

struct TMConfig {
  int state = 0;
  std::vector<int> tape;
  std::size_t head = 0;
  friend bool operator==(const TMConfig&, const TMConfig&) = default;
};

inline TMConfig initial_config(const TuringMachine& t) { return TMConfig{t.initial(), {t.blank()}, 0}; }

struct TMStep {
  enum Kind { next, halted, boundary_violation } kind;
  TMConfig config;  // successor for `next`, unchanged otherwise
};

inline TMStep tm_step(const TuringMachine& t, const TMConfig& c) {
  if (c.tape.empty() || c.head >= c.tape.size()) throw std::invalid_argument("tm_step: head outside the tape word");
  for (int s : c.tape)
    if (s < 0 || static_cast<std::size_t>(s) >= t.symbol_count()) throw std::invalid_argument("tm_step: symbol not in tape alphabet");
  const auto& a = t.action(c.state, c.tape[c.head]);
  if (!a) return {TMStep::halted, c};
  if (a->move < 0 && c.head == 0) return {TMStep::boundary_violation, c};
  TMConfig out = c;
  out.state = a->state;
  out.tape[c.head] = a->symbol;
  out.head = a->move < 0 ? c.head - 1 : c.head + 1;
  if (out.head == out.tape.size()) out.tape.push_back(t.blank());
  return {TMStep::next, std::move(out)};
}

struct TMRun {
  enum Kind { halts, running, boundary_violation } kind;
  std::uint64_t steps;
  TMConfig config;
  std::size_t cells_visited;  // |theta|
};

inline TMRun tm_run(const TuringMachine& t, std::uint64_t max_steps) {
  TMConfig c = initial_config(t);
  for (std::uint64_t m = 0;; ++m) {
    TMStep s = tm_step(t, c);
    if (s.kind == TMStep::halted) return {TMRun::halts, m, c, c.tape.size()};
    if (s.kind == TMStep::boundary_violation) return {TMRun::boundary_violation, m, c, c.tape.size()};
    if (m == max_steps) return {TMRun::running, m, c, c.tape.size()};
    c = std::move(s.config);
  }
}

// ---------------------------------------------------------------- T-infinity

namespace tinf {

// tape symbol flags
inline constexpr int kVisited = 1;
inline constexpr int kCurrent = 2;

enum Phase { sim = 0, cur = 1, sweep = 2, ret = 3, back = 4 };
inline constexpr const char* kPhaseNames[] = {"sim", "cur", "sweep", "ret", "back"};
inline constexpr const char* kFlagSuffix[] = {"", "^v", "^c", "^vc"};

inline int symbol(int base, int flags) { return base * 4 + flags; }
inline int state(int phase, int q) { return q * 5 + phase; }

}  // namespace tinf

/// After every simulated step the machine marks the departed cell visited,
/// marks the arrival cell current, extends the visited prefix by one cell
/// and returns. It halts iff `t` halts.
inline TuringMachine make_t_infinity(const TuringMachine& t) {
  using namespace tinf;
  std::vector<std::string> states, symbols;
  for (std::size_t q = 0; q < t.state_count(); ++q)
    for (int ph = 0; ph < 5; ++ph) states.push_back(std::string(kPhaseNames[ph]) + "." + t.state_name(static_cast<int>(q)));
  for (std::size_t s = 0; s < t.symbol_count(); ++s)
    for (int f = 0; f < 4; ++f) symbols.push_back(t.symbol_name(static_cast<int>(s)) + kFlagSuffix[f]);
  std::vector<int> accepting, input;
  for (int f : t.accepting_states()) accepting.push_back(state(sim, f));
  for (int s : t.input_symbols()) input.push_back(symbol(s, 0));
  TuringMachine out(t.name() + "-inf", states, symbols, state(sim, t.initial()), accepting, symbol(t.blank(), 0), input);

  const auto Q = static_cast<int>(t.state_count());
  const auto G = static_cast<int>(t.symbol_count());
  for (int q = 0; q < Q; ++q) {
    for (int g = 0; g < G; ++g) {
      for (int f = 0; f < 4; ++f) {
        const int here = symbol(g, f);
        if (const auto& a = t.action(q, g))
          out.set(state(sim, q), here, {state(cur, a->state), symbol(a->symbol, kVisited), a->move});
        out.set(state(cur, q), here, {state(sweep, q), symbol(g, f | kCurrent), +1});
        if (f != 0) out.set(state(sweep, q), here, {state(sweep, q), here, +1});
        else out.set(state(sweep, q), here, {state(ret, q), symbol(g, kVisited), -1});
        if (f & kCurrent) out.set(state(ret, q), here, {state(back, q), symbol(g, f & ~kCurrent), +1});
        else out.set(state(ret, q), here, {state(ret, q), here, -1});
        out.set(state(back, q), here, {state(sim, q), here, -1});
      }
    }
  }
  return out;
}

/// Original-alphabet view of a T-infinity tape.
inline std::vector<int> project_tinf_tape(const std::vector<int>& tape) {
  std::vector<int> out;
  for (int s : tape) out.push_back(s / 4);
  return out;
}

// ---------------------------------------------------------------- text format

inline TuringMachine parse_tm(std::string_view text) {
  std::optional<std::string> name;
  std::vector<std::string> states, input, extra;
  std::optional<std::string> initial, blank;
  std::vector<std::string> accept;
  struct Delta {
    std::size_t line;
    std::string q, s, q2, s2, dir;
  };
  std::vector<Delta> deltas;
  bool header = false;
  for (const auto& line : split_lines(text)) {
    const auto& k = line.tokens;
    auto fail = [&](const std::string& what) { throw ParseError(line.number, what); };
    if (!header) {
      if (k[0] != "tm" || k.size() > 2) fail("expected 'tm [name]'");
      header = true;
      if (k.size() == 2) name = k[1];
      continue;
    }
    if (k[0] == "states") states.assign(k.begin() + 1, k.end());
    else if (k[0] == "initial") {
      if (k.size() != 2) fail("expected 'initial <state>'");
      initial = k[1];
    } else if (k[0] == "accept") accept.insert(accept.end(), k.begin() + 1, k.end());
    else if (k[0] == "blank") {
      if (k.size() != 2) fail("expected 'blank <symbol>'");
      blank = k[1];
    } else if (k[0] == "input") input.insert(input.end(), k.begin() + 1, k.end());
    else if (k[0] == "tape") extra.insert(extra.end(), k.begin() + 1, k.end());
    else if (k[0] == "delta") {
      if (k.size() != 7 || k[3] != "->") fail("expected 'delta <q> <sym> -> <q'> <sym'> <L|R>'");
      deltas.push_back({line.number, k[1], k[2], k[4], k[5], k[6]});
    } else {
      fail("unknown directive '" + k[0] + "'");
    }
  }
  if (!header) throw ParseError(0, "empty turing machine file");
  if (states.empty()) throw ParseError(0, "missing 'states'");
  if (!initial) throw ParseError(0, "missing 'initial'");
  if (!blank) blank = "_";

  std::vector<std::string> symbols{*blank};
  for (const auto* list : {&input, &extra})
    for (const auto& s : *list)
      if (std::find(symbols.begin(), symbols.end(), s) == symbols.end()) symbols.push_back(s);

  auto state_of = [&](const std::string& s, std::size_t line) {
    auto it = std::find(states.begin(), states.end(), s);
    if (it == states.end()) throw ParseError(line, "unknown state '" + s + "'");
    return static_cast<int>(it - states.begin());
  };
  auto symbol_of = [&](const std::string& s, std::size_t line) {
    auto it = std::find(symbols.begin(), symbols.end(), s);
    if (it == symbols.end()) throw ParseError(line, "symbol '" + s + "' not in tape alphabet");
    return static_cast<int>(it - symbols.begin());
  };
  std::vector<int> acc, in;
  for (const auto& a : accept) acc.push_back(state_of(a, 0));
  for (const auto& s : input) in.push_back(symbol_of(s, 0));
  try {
    TuringMachine t(name.value_or("tm"), states, symbols, state_of(*initial, 0), acc, 0, in);
    for (const auto& d : deltas) {
      if (d.dir != "L" && d.dir != "R") throw ParseError(d.line, "direction must be L or R");
      try {
        t.set(state_of(d.q, d.line), symbol_of(d.s, d.line),
              {state_of(d.q2, d.line), symbol_of(d.s2, d.line), d.dir == "L" ? -1 : 1});
      } catch (const std::invalid_argument& e) {
        throw ParseError(d.line, e.what());
      }
    }
    return t;
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

inline std::string to_text(const TuringMachine& t) {
  std::ostringstream out;
  out << "tm " << t.name() << "\nstates";
  for (std::size_t q = 0; q < t.state_count(); ++q) out << ' ' << t.state_name(static_cast<int>(q));
  out << "\ninitial " << t.state_name(t.initial()) << '\n';
  auto acc = t.accepting_states();
  if (!acc.empty()) {
    out << "accept";
    for (int q : acc) out << ' ' << t.state_name(q);
    out << '\n';
  }
  out << "blank " << t.symbol_name(t.blank()) << '\n';
  auto in = t.input_symbols();
  if (!in.empty()) {
    out << "input";
    for (int s : in) out << ' ' << t.symbol_name(s);
    out << '\n';
  }
  std::vector<int> rest;
  for (std::size_t s = 0; s < t.symbol_count(); ++s)
    if (static_cast<int>(s) != t.blank() && !t.input_symbol(static_cast<int>(s))) rest.push_back(static_cast<int>(s));
  if (!rest.empty()) {
    out << "tape";
    for (int s : rest) out << ' ' << t.symbol_name(s);
    out << '\n';
  }
  for (std::size_t q = 0; q < t.state_count(); ++q)
    for (std::size_t s = 0; s < t.symbol_count(); ++s)
      if (const auto& a = t.action(static_cast<int>(q), static_cast<int>(s)))
        out << "delta " << t.state_name(static_cast<int>(q)) << ' ' << t.symbol_name(static_cast<int>(s)) << " -> "
            << t.state_name(a->state) << ' ' << t.symbol_name(a->symbol) << ' ' << (a->move < 0 ? 'L' : 'R') << '\n';
  return out.str();
}

}  // namespace distauto
