#pragma once

// Machine states are canonical strings: a sentinel token (BOT, CHECK, BOX)
// or a tuple "(f1,f2,...)". Patterns select sets of states by shape.

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace distauto {

inline const std::string kBot = "BOT";
inline const std::string kCheck = "CHECK";
inline const std::string kBox = "BOX";

namespace detail {

inline bool field_char(char c) {
  return c > ' ' && c != ',' && c != '(' && c != ')' && c != '\\' && c != '*' && c != '|' && c != '#' &&
         c != '[' && c != ']' && c != ';';
}

inline bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!field_char(c)) return false;
  return true;
}

}  // namespace detail

inline std::string tuple_state(const std::vector<std::string>& fields) {
  std::string out = "(";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out + ")";
}

inline std::string tuple_state(std::initializer_list<std::string> fields) {
  return tuple_state(std::vector<std::string>(fields));
}

/// Fields of a tuple-shaped name, nullopt for sentinels.
inline std::optional<std::vector<std::string>> tuple_fields(std::string_view s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
  std::vector<std::string> out;
  std::string_view body = s.substr(1, s.size() - 2);
  std::size_t pos = 0;
  for (;;) {
    std::size_t comma = body.find(',', pos);
    out.emplace_back(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline bool valid_state_name(std::string_view s) {
  if (auto f = tuple_fields(s)) {
    for (const auto& x : *f)
      if (!detail::valid_token(x)) return false;
    return true;
  }
  return detail::valid_token(s);
}

/// `*`, a sentinel, or a tuple whose fields are literals or `*`; optional
/// exclusions follow as `\<pattern>`, e.g. `*\CHECK\BOT`.
class Pattern {
 public:
  static Pattern parse(std::string_view text) {
    Pattern p;
    p.text_ = std::string(text);
    std::size_t pos = 0;
    bool first = true;
    for (;;) {
      std::size_t cut = text.find('\\', pos);
      std::string_view part = text.substr(pos, cut == std::string_view::npos ? std::string_view::npos : cut - pos);
      Shape s = shape(part, text);
      if (first) p.base_ = s;
      else p.excluded_.push_back(s);
      first = false;
      if (cut == std::string_view::npos) break;
      pos = cut + 1;
    }
    return p;
  }

  bool matches(std::string_view state) const {
    if (!base_.matches(state)) return false;
    for (const auto& e : excluded_)
      if (e.matches(state)) return false;
    return true;
  }

  /// The single state named by a wildcard-free pattern.
  std::optional<std::string> literal() const {
    if (!excluded_.empty() || base_.any) return std::nullopt;
    if (!base_.tuple) return base_.sentinel;
    for (const auto& f : base_.fields)
      if (f == "*") return std::nullopt;
    return tuple_state(base_.fields);
  }

  const std::string& text() const { return text_; }

 private:
  struct Shape {
    bool any = false;
    bool tuple = false;
    std::string sentinel;
    std::vector<std::string> fields;

    bool matches(std::string_view state) const {
      if (any) return true;
      if (!tuple) return state == sentinel;
      auto f = tuple_fields(state);
      if (!f || f->size() != fields.size()) return false;
      for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] != "*" && fields[i] != (*f)[i]) return false;
      return true;
    }
  };

  static Shape shape(std::string_view part, std::string_view whole) {
    Shape s;
    if (part == "*") {
      s.any = true;
      return s;
    }
    if (auto f = tuple_fields(part)) {
      for (const auto& x : *f)
        if (x != "*" && !detail::valid_token(x))
          throw std::invalid_argument("bad pattern '" + std::string(whole) + "'");
      s.tuple = true;
      s.fields = std::move(*f);
      return s;
    }
    if (!detail::valid_token(part)) throw std::invalid_argument("bad pattern '" + std::string(whole) + "'");
    s.sentinel = std::string(part);
    return s;
  }

  Shape base_;
  std::vector<Shape> excluded_;
  std::string text_;
};

}  // namespace distauto
