#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whittemore/error.hpp"

namespace whittemore {

/// An endogenous variable, identified by name. Names are non-empty and contain
/// no whitespace and none of the delimiters `( ) [ ] { } #`.
class Variable {
 public:
  explicit Variable(std::string name) : name_(std::move(name)) {
    if (!valid_name(name_)) {
      throw ModelError(ModelError::Kind::unknown_variable, "invalid variable name '" + name_ + "'");
    }
  }

  const std::string& name() const noexcept { return name_; }

  static bool valid_name(std::string_view name) {
    if (name.empty()) return false;
    return std::none_of(name.begin(), name.end(), [](char c) {
      return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == '(' ||
             c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == '#' || c == '"' || c == ';' || c == ',';
    });
  }

  friend bool operator==(const Variable&, const Variable&) = default;
  friend std::strong_ordering operator<=>(const Variable& a, const Variable& b) {
    return a.name_.compare(b.name_) <=> 0;
  }

 private:
  std::string name_;
};

inline Variable operator""_v(const char* s, std::size_t n) { return Variable(std::string(s, n)); }

using VarSet = std::set<Variable>;

/// A categorical outcome. CSV cells are strings; DSL literals may be any of these.
using Category = std::variant<bool, std::int64_t, double, std::string>;

/// An assignment of values to variables.
using Event = std::map<Variable, Category>;

inline VarSet unite(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline VarSet minus(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline VarSet intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// True when every element of `part` is in `whole`.
inline bool includes(const VarSet& whole, const VarSet& part) {
  return std::includes(whole.begin(), whole.end(), part.begin(), part.end());
}

inline bool disjoint(const VarSet& a, const VarSet& b) { return intersect(a, b).empty(); }

inline VarSet keys(const Event& e) {
  VarSet out;
  for (const auto& [k, _] : e) out.insert(k);
  return out;
}

inline Event restrict(const Event& e, const VarSet& vars) {
  Event out;
  for (const auto& [k, v] : e) {
    if (vars.contains(k)) out.emplace(k, v);
  }
  return out;
}

/// Shortest decimal text that reads back as the same double. Integral values
/// keep a trailing ".0" so they stay distinguishable from integers.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "##NaN";
  if (std::isinf(x)) return x > 0 ? "##Inf" : "##-Inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, end);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

/// Category text without quoting (for tables and LaTeX).
inline std::string category_text(const Category& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return v;
        }
      },
      c);
}

std::string quote_string(std::string_view s);

/// Category in source syntax: strings quoted, everything else as a literal.
inline std::string category_literal(const Category& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return quote_string(*s);
  return category_text(c);
}

inline std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string format_vars(const VarSet& vars) {
  std::string out = "#{";
  bool first = true;
  for (const auto& v : vars) {
    if (!first) out += ' ';
    first = false;
    out += ':' + v.name();
  }
  return out + "}";
}

}  // namespace whittemore
