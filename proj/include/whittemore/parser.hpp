#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "whittemore/error.hpp"
#include "whittemore/value.hpp"

namespace whittemore {

/// A parsed expression with its 1-based source position.
struct Expr {
  enum class Kind { constant, symbol, vector, map, set, list };

  Kind kind = Kind::constant;
  Value constant;            // constant
  std::string symbol;        // symbol
  std::vector<Expr> items;   // vector, set, list; map as alternating key/value
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_list_headed_by(std::string_view head) const {
    return kind == Kind::list && !items.empty() && items.front().kind == Kind::symbol &&
           items.front().symbol == head;
  }
};

/// Structural equality of literal syntax, used to reject duplicate set
/// elements and map keys.
inline bool same_syntax(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::constant: return a.constant == b.constant;
    case Expr::Kind::symbol: return a.symbol == b.symbol;
    case Expr::Kind::vector:
    case Expr::Kind::list:
      return std::equal(a.items.begin(), a.items.end(), b.items.begin(), b.items.end(), same_syntax);
    case Expr::Kind::set:
      return a.items.size() == b.items.size() &&
             std::all_of(a.items.begin(), a.items.end(), [&](const Expr& x) {
               return std::any_of(b.items.begin(), b.items.end(), [&](const Expr& y) { return same_syntax(x, y); });
             });
    case Expr::Kind::map: {
      if (a.items.size() != b.items.size()) return false;
      for (std::size_t i = 0; i < a.items.size(); i += 2) {
        bool found = false;
        for (std::size_t j = 0; j < b.items.size() && !found; j += 2) {
          found = same_syntax(a.items[i], b.items[j]) && same_syntax(a.items[i + 1], b.items[j + 1]);
        }
        if (!found) return false;
      }
      return true;
    }
  }
  return false;
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Expr> parse_all() {
    std::vector<Expr> out;
    skip_space();
    while (!at_end()) {
      out.push_back(parse_expr());
      skip_space();
    }
    return out;
  }

 private:
  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '[' || c == ']' || c == '{' ||
           c == '}' || c == '"' || c == ';' || c == ',';
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t line, std::size_t column) const {
    throw SyntaxError(what, line, column);
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        advance();
      } else {
        break;
      }
    }
  }

  Expr parse_expr() {
    const std::size_t line = line_;
    const std::size_t column = column_;
    char c = peek();
    Expr e;
    e.line = line;
    e.column = column;
    switch (c) {
      case '(':
        e.kind = Expr::Kind::list;
        e.items = parse_sequence(')', line, column);
        return e;
      case '[':
        e.kind = Expr::Kind::vector;
        e.items = parse_sequence(']', line, column);
        return e;
      case '{':
        e.kind = Expr::Kind::map;
        e.items = parse_sequence('}', line, column);
        if (e.items.size() % 2 != 0) fail("map literal needs an even number of forms", line, column);
        for (std::size_t i = 0; i < e.items.size(); i += 2) {
          for (std::size_t j = 0; j < i; j += 2) {
            if (same_syntax(e.items[i], e.items[j])) {
              fail("duplicate key in map literal", e.items[i].line, e.items[i].column);
            }
          }
        }
        return e;
      case ')':
      case ']':
      case '}':
        fail(std::string("unexpected '") + c + "'", line, column);
      case '"':
        e.constant = parse_string();
        return e;
      case '#':
        return parse_dispatch(line, column);
      default:
        return parse_token(line, column);
    }
  }

  std::vector<Expr> parse_sequence(char close, std::size_t line, std::size_t column) {
    advance();
    std::vector<Expr> items;
    while (true) {
      skip_space();
      if (at_end()) fail(std::string("unbalanced delimiter: missing '") + close + "'", line, column);
      if (peek() == close) {
        advance();
        return items;
      }
      if (peek() == ')' || peek() == ']' || peek() == '}') {
        fail(std::string("mismatched '") + peek() + "', expected '" + close + "'", line_, column_);
      }
      items.push_back(parse_expr());
    }
  }

  Expr parse_dispatch(std::size_t line, std::size_t column) {
    advance();
    if (!at_end() && peek() == '{') {
      Expr e;
      e.kind = Expr::Kind::set;
      e.line = line;
      e.column = column;
      e.items = parse_sequence('}', line, column);
      for (std::size_t i = 0; i < e.items.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (same_syntax(e.items[i], e.items[j])) {
            fail("duplicate element in set literal", e.items[i].line, e.items[i].column);
          }
        }
      }
      return e;
    }
    if (!at_end() && peek() == '#') {
      advance();
      std::string word = read_word();
      Expr e;
      e.line = line;
      e.column = column;
      if (word == "NaN") e.constant = std::numeric_limits<double>::quiet_NaN();
      else if (word == "Inf") e.constant = std::numeric_limits<double>::infinity();
      else if (word == "-Inf") e.constant = -std::numeric_limits<double>::infinity();
      else fail("unknown symbolic value ##" + word, line, column);
      return e;
    }
    fail("bad token after '#'", line, column);
  }

  std::string read_word() {
    std::size_t start = pos_;
    while (!at_end() && !is_delimiter(peek())) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  Value parse_string() {
    const std::size_t line = line_;
    const std::size_t column = column_;
    advance();
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string", line, column);
      char c = peek();
      advance();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail("unterminated string", line, column);
      char esc = peek();
      advance();
      switch (esc) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unknown escape \\") + esc, line_, column_ - 1);
      }
    }
  }

  Expr parse_token(std::size_t line, std::size_t column) {
    std::string word = read_word();
    Expr e;
    e.line = line;
    e.column = column;
    if (word.empty()) fail("bad token", line, column);
    if (word.front() == ':') {
      if (word.size() == 1 || word[1] == ':') fail("bad keyword '" + word + "'", line, column);
      e.constant = Keyword{word.substr(1)};
      return e;
    }
    if (word == "nil") {
      e.constant = Nil{};
      return e;
    }
    if (word == "true" || word == "false") {
      e.constant = word == "true";
      return e;
    }
    const char first = word.front();
    const bool numeric = std::isdigit(static_cast<unsigned char>(first)) ||
                         ((first == '-' || first == '+' || first == '.') && word.size() > 1 &&
                          (std::isdigit(static_cast<unsigned char>(word[1])) || word[1] == '.'));
    if (numeric) {
      e.constant = parse_number(word, line, column);
      return e;
    }
    e.kind = Expr::Kind::symbol;
    e.symbol = std::move(word);
    return e;
  }

  Value parse_number(const std::string& word, std::size_t line, std::size_t column) const {
    std::string_view digits = word;
    if (digits.front() == '+') digits.remove_prefix(1);
    const char* begin = digits.data();
    const char* end = begin + digits.size();
    if (digits.find_first_of(".eE") == std::string_view::npos) {
      std::int64_t i = 0;
      auto [ptr, ec] = std::from_chars(begin, end, i);
      if (ec == std::errc() && ptr == end) return i;
      if (ec == std::errc::result_out_of_range) fail("integer out of range '" + word + "'", line, column);
    } else {
      double d = 0;
      auto [ptr, ec] = std::from_chars(begin, end, d);
      if (ec == std::errc() && ptr == end) return d;
    }
    fail("bad number '" + word + "'", line, column);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace detail

/// Parses zero or more top-level expressions. `;` starts a line comment and
/// commas are whitespace.
inline std::vector<Expr> parse(std::string_view text) { return detail::Parser(text).parse_all(); }

/// Net open-delimiter count, ignoring strings and comments; used by the REPL
/// to decide whether an input needs more lines.
inline int delimiter_depth(std::string_view text) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(' || c == '[' || c == '{') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
  }
  return in_string ? depth + 1 : depth;
}

}  // namespace whittemore
