#pragma once

// Machine text format.
//
//   machine <name> detection <d|D> acceptance <a|A> beta <k> alphabet <plain|snowball> [projected]
//   state <s>
//   init <label...> <s>
//   accept <s>
//   reject <s>
//   rule <priority> <pattern> | <true | atom && atom ...> -> <s>
//   end
//
// with atoms `count(<pattern>) <>=|==|<=> <k>`. Products nest two blocks:
//
//   product <name> mode <stable-consensus|halting> [projected]
//   <machine block>
//   <machine block>
//   end

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "distauto/machine.hpp"
#include "distauto/text.hpp"

namespace distauto {

namespace detail {

inline void write_machine(const DistributedMachine& m, std::ostringstream& out) {
  if (m.is_product()) {
    out << "product " << m.name() << " mode " << to_string(m.mode()) << (m.projected() ? " projected" : "") << '\n';
    write_machine(m.first(), out);
    write_machine(m.second(), out);
    out << "end\n";
    return;
  }
  const auto& t = m.table();
  const auto& s = t.spec();
  out << "machine " << s.name << " detection " << to_string(s.detection) << " acceptance "
      << to_string(s.acceptance) << " beta " << s.beta << " alphabet " << to_string(s.alphabet)
      << (m.projected() ? " projected" : "") << '\n';
  for (StateId q = 0; q < t.size(); ++q) out << "state " << t.name(q) << '\n';
  for (const auto& [l, q] : s.init) out << "init " << l.text() << ' ' << q << '\n';
  for (const auto& q : s.accepting) out << "accept " << q << '\n';
  for (const auto& q : s.rejecting) out << "reject " << q << '\n';
  for (const auto& r : s.rules) {
    out << "rule " << r.priority << ' ' << r.source << " | ";
    if (r.atoms.empty()) out << "true";
    for (std::size_t i = 0; i < r.atoms.size(); ++i) {
      if (i) out << " && ";
      out << "count(" << r.atoms[i].pattern << ") " << to_string(r.atoms[i].op) << ' ' << r.atoms[i].k;
    }
    out << " -> " << r.result << '\n';
  }
  out << "end\n";
}

class MachineReader {
 public:
  explicit MachineReader(std::string_view text) : lines_(split_lines(text)) {}

  DistributedMachine read() {
    DistributedMachine m = block();
    if (pos_ != lines_.size()) fail(lines_[pos_], "trailing content after machine");
    return m;
  }

 private:
  [[noreturn]] static void fail(const TextLine& l, const std::string& what) { throw ParseError(l.number, what); }

  const TextLine& take() {
    if (pos_ >= lines_.size()) throw ParseError(lines_.empty() ? 0 : lines_.back().number, "unexpected end of machine file");
    return lines_[pos_++];
  }

  DistributedMachine block() {
    const TextLine& head = take();
    const auto& t = head.tokens;
    if (t[0] == "product") {
      if ((t.size() != 4 && t.size() != 5) || t[2] != "mode") fail(head, "expected 'product <name> mode <mode> [projected]'");
      bool projected = t.size() == 5;
      if (projected && t[4] != "projected") fail(head, "unknown product flag '" + t[4] + "'");
      ProductMode mode;
      try {
        mode = parse_product_mode(t[3]);
      } catch (const std::invalid_argument& e) {
        fail(head, e.what());
      }
      DistributedMachine a = block();
      DistributedMachine b = block();
      const TextLine& end = take();
      if (end.tokens.size() != 1 || end.tokens[0] != "end") fail(end, "expected 'end' after product components");
      try {
        DistributedMachine m = DistributedMachine::product(a, b, mode, t[1]);
        return projected ? m.adapted() : m;
      } catch (const std::invalid_argument& e) {
        fail(head, e.what());
      }
    }
    if (t[0] != "machine") fail(head, "expected 'machine' or 'product'");
    if ((t.size() != 10 && t.size() != 11) || t[2] != "detection" || t[4] != "acceptance" || t[6] != "beta" ||
        t[8] != "alphabet")
      fail(head, "malformed machine header");
    MachineSpec spec;
    spec.name = t[1];
    if (t[3] == "d") spec.detection = Detection::d;
    else if (t[3] == "D") spec.detection = Detection::D;
    else fail(head, "detection must be d or D");
    if (t[5] == "a") spec.acceptance = Acceptance::a;
    else if (t[5] == "A") spec.acceptance = Acceptance::A;
    else fail(head, "acceptance must be a or A");
    long long beta = parse_int(t[7], head.number);
    if (beta < 1) fail(head, "counting bound must be positive");
    spec.beta = static_cast<unsigned>(beta);
    if (t[9] == "plain") spec.alphabet = Alphabet::plain;
    else if (t[9] == "snowball") spec.alphabet = Alphabet::snowball;
    else fail(head, "unknown alphabet '" + t[9] + "'");
    bool projected = t.size() == 11;
    if (projected && t[10] != "projected") fail(head, "unknown machine flag '" + t[10] + "'");

    for (;;) {
      const TextLine& l = take();
      const auto& k = l.tokens;
      if (k[0] == "end") {
        if (k.size() != 1) fail(l, "'end' takes no arguments");
        break;
      }
      if (k[0] == "state" || k[0] == "accept" || k[0] == "reject") {
        if (k.size() != 2) fail(l, "expected '" + k[0] + " <state>'");
        if (!valid_state_name(k[1])) fail(l, "invalid state name '" + k[1] + "'");
        auto& list = k[0] == "state" ? spec.states : k[0] == "accept" ? spec.accepting : spec.rejecting;
        list.push_back(k[1]);
      } else if (k[0] == "init") {
        std::size_t want = spec.alphabet == Alphabet::plain ? 3 : 5;
        if (k.size() != want) fail(l, "init line has wrong number of fields");
        NodeLabel label = NodeLabel::plain(static_cast<int>(parse_int(k[1], l.number)));
        if (spec.alphabet == Alphabet::snowball) {
          if (k[2] != "+1" && k[2] != "-1") fail(l, "direction must be +1 or -1");
          label.direction = k[2] == "+1" ? 1 : -1;
          label.snowball = static_cast<int>(parse_int(k[3], l.number));
        }
        if (!label.valid()) fail(l, "invalid init label");
        spec.init.emplace_back(label, k.back());
      } else if (k[0] == "rule") {
        spec.rules.push_back(rule(l));
      } else {
        fail(l, "unknown directive '" + k[0] + "'");
      }
    }
    try {
      DistributedMachine m(std::move(spec));
      return projected ? m.adapted() : m;
    } catch (const std::invalid_argument& e) {
      fail(head, e.what());
    }
  }

  static Rule rule(const TextLine& l) {
    const auto& k = l.tokens;
    if (k.size() < 7 || k[3] != "|" || k[k.size() - 2] != "->") fail(l, "expected 'rule <prio> <pattern> | <pred> -> <state>'");
    Rule r;
    r.priority = static_cast<int>(parse_int(k[1], l.number));
    r.source = k[2];
    r.result = k.back();
    try {
      Pattern::parse(r.source);
    } catch (const std::invalid_argument& e) {
      fail(l, e.what());
    }
    if (!valid_state_name(r.result)) fail(l, "invalid result state '" + r.result + "'");
    std::size_t i = 4, end = k.size() - 2;
    if (end - i == 1 && k[i] == "true") return r;
    for (;;) {
      if (end - i < 3) fail(l, "incomplete count atom");
      const std::string& c = k[i];
      if (c.size() < 8 || c.rfind("count(", 0) != 0 || c.back() != ')') fail(l, "expected count(<pattern>)");
      CountAtom a;
      a.pattern = c.substr(6, c.size() - 7);
      try {
        Pattern::parse(a.pattern);
      } catch (const std::invalid_argument& e) {
        fail(l, e.what());
      }
      if (k[i + 1] == ">=") a.op = Cmp::ge;
      else if (k[i + 1] == "==") a.op = Cmp::eq;
      else if (k[i + 1] == "<=") a.op = Cmp::le;
      else fail(l, "unknown comparison '" + k[i + 1] + "'");
      long long v = parse_int(k[i + 2], l.number);
      if (v < 0) fail(l, "negative threshold");
      a.k = static_cast<unsigned>(v);
      r.atoms.push_back(std::move(a));
      i += 3;
      if (i == end) break;
      if (k[i] != "&&") fail(l, "expected '&&' between atoms");
      ++i;
    }
    return r;
  }

  std::vector<TextLine> lines_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string to_text(const DistributedMachine& m) {
  std::ostringstream out;
  detail::write_machine(m, out);
  return out.str();
}

inline DistributedMachine parse_machine(std::string_view text) { return detail::MachineReader(text).read(); }

}  // namespace distauto
