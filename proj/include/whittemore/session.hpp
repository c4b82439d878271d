#pragma once

#include <cstdlib>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "whittemore/interpreter.hpp"
#include "whittemore/parser.hpp"
#include "whittemore/printer.hpp"

namespace whittemore {

struct SessionOptions {
  std::string source_name = "<input>";
  std::filesystem::path base_dir;
  bool color = false;
};

/// True when ANSI styling is allowed on a stream that is a terminal.
inline bool color_enabled(bool is_tty) { return is_tty && std::getenv("WHITTEMORE_NO_COLOR") == nullptr; }

inline std::string format_error(const std::string& source, const Error& e, bool color) {
  std::string where = source;
  if (const auto* p = dynamic_cast<const PositionedError*>(&e); p && p->line()) {
    where += ':' + std::to_string(p->line());
    if (p->column()) where += ':' + std::to_string(p->column());
  }
  std::string label = color ? "\x1b[1;31merror\x1b[0m" : "error";
  return where + ": " + label + ": " + e.what() + "\n";
}

namespace detail {

inline std::string echo(const Value& v) {
  std::string s = print_value(v);
  if (s.empty() || s.back() != '\n') s += '\n';
  return s;
}

}  // namespace detail

/// Evaluates every top-level expression of `text`, echoing each result
/// except those of `define`. Returns the final environment and last value.
struct ScriptResult {
  Environment env;
  std::optional<Value> last;
};

inline ScriptResult run_script(std::string_view text, std::ostream& out, const SessionOptions& options = {},
                               Environment env = {}) {
  EvalOptions eval{options.base_dir};
  ScriptResult result{env, std::nullopt};
  for (const auto& e : parse(text)) {
    auto r = eval_expr(result.env, e, eval);
    result.env = r.env;
    if (!e.is_list_headed_by("define")) out << detail::echo(r.value);
    result.last = std::move(r.value);
  }
  return result;
}

/// Value of the last top-level expression, without printing anything.
inline std::optional<Value> last_value(std::string_view text, const SessionOptions& options = {}) {
  std::ostringstream sink;
  return run_script(text, sink, options).last;
}

/// Read-eval-print loop. Input is accumulated until delimiters balance, so
/// one expression may span lines. `doc name` prints a binding's docstring.
/// Returns the number of failed inputs.
inline int repl(std::istream& in, std::ostream& out, std::ostream& err, const SessionOptions& options,
                bool prompt) {
  Environment env;
  EvalOptions eval{options.base_dir};
  int failures = 0;
  std::string buffer;
  std::size_t first_line = 1;
  std::size_t line_no = 0;
  std::string line;
  auto show_prompt = [&] {
    if (prompt) out << (buffer.empty() ? "whittemore> " : "       ...> ") << std::flush;
  };
  show_prompt();
  while (std::getline(in, line)) {
    ++line_no;
    if (buffer.empty()) {
      first_line = line_no;
      std::istringstream words(line);
      std::string cmd, name, rest;
      if (words >> cmd && cmd == "doc" && words >> name && !(words >> rest)) {
        try {
          out << describe_symbol(env, name);
        } catch (const Error& e) {
          err << format_error(options.source_name, e, options.color);
          ++failures;
        }
        show_prompt();
        continue;
      }
    }
    buffer += line;
    buffer += '\n';
    if (delimiter_depth(buffer) > 0) {
      show_prompt();
      continue;
    }
    try {
      for (auto e : parse(buffer)) {
        auto r = eval_expr(env, e, eval);
        env = r.env;
        if (!e.is_list_headed_by("define")) out << detail::echo(r.value);
      }
    } catch (const PositionedError& e) {
      // Report positions relative to the whole transcript.
      if (e.line()) {
        err << format_error(options.source_name, PositionedError(e.what(), e.line() + first_line - 1, e.column()),
                            options.color);
      } else {
        err << format_error(options.source_name, e, options.color);
      }
      ++failures;
    } catch (const Error& e) {
      err << format_error(options.source_name, e, options.color);
      ++failures;
    }
    buffer.clear();
    show_prompt();
  }
  if (!buffer.empty()) {
    err << format_error(options.source_name, SyntaxError("unbalanced delimiter at end of input", first_line, 0),
                        options.color);
    ++failures;
  }
  if (prompt) out << '\n';
  return failures;
}

}  // namespace whittemore
