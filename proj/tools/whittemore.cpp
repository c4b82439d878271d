#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "whittemore/whittemore.hpp"

namespace {

namespace wt = whittemore;

constexpr int exit_ok = 0;
constexpr int exit_script_error = 1;
constexpr int exit_usage = 2;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return true;
}

wt::SessionOptions options_for(const std::string& path) {
  wt::SessionOptions o;
  o.source_name = path;
  o.base_dir = std::filesystem::path(path).parent_path();
  o.color = wt::color_enabled(isatty(STDERR_FILENO) != 0);
  return o;
}

int run_file(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "whittemore: cannot read '" << path << "'\n";
    return exit_script_error;
  }
  auto options = options_for(path);
  try {
    wt::run_script(text, std::cout, options);
  } catch (const wt::Error& e) {
    std::cout.flush();
    std::cerr << wt::format_error(options.source_name, e, options.color);
    return exit_script_error;
  }
  return exit_ok;
}

int emit(const std::string& format, const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "whittemore: cannot read '" << path << "'\n";
    return exit_script_error;
  }
  auto options = options_for(path);
  try {
    auto last = wt::last_value(text, options);
    if (!last) throw wt::EvalError("--emit: the script has no value to render");
    if (format == "dot") {
      const auto* m = last->get_if<wt::Model>();
      if (!m) throw wt::EvalError("--emit dot: the last value is a " + last->type_name() + ", not a model");
      std::cout << wt::to_dot(*m);
    } else {
      const auto* f = last->get_if<wt::Formula>();
      if (!f) throw wt::EvalError("--emit latex: the last value is a " + last->type_name() + ", not a formula");
      std::cout << wt::to_latex(*f) << '\n';
    }
  } catch (const wt::Error& e) {
    std::cerr << wt::format_error(options.source_name, e, options.color);
    return exit_script_error;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whittemore: a causal programming language"};
  app.set_version_flag("--version", std::string("whittemore ") + WHITTEMORE_VERSION);
  app.require_subcommand(0, 1);

  std::string emit_format;
  std::string emit_path;
  auto* emit_opt = app.add_option("--emit", emit_format, "Print a rendering of the script's last value")
                       ->check(CLI::IsMember({"dot", "latex"}));
  app.add_option("file", emit_path, "Script for --emit");

  std::string script;
  auto* run = app.add_subcommand("run", "Run a script, printing each top-level result");
  run->add_option("file", script, "Script file (.wt)")->required();

  auto* repl = app.add_subcommand("repl", "Start an interactive session");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  if (*emit_opt) {
    if (*run || *repl) {
      std::cerr << "whittemore: --emit cannot be combined with a subcommand\n";
      return exit_usage;
    }
    if (emit_path.empty()) {
      std::cerr << "whittemore: --emit needs a script file\n";
      return exit_usage;
    }
    return emit(emit_format, emit_path);
  }
  if (!emit_path.empty()) {
    std::cerr << "whittemore: unexpected argument '" << emit_path << "'\n" << app.help();
    return exit_usage;
  }
  if (*run) return run_file(script);
  if (*repl) {
    wt::SessionOptions options;
    options.source_name = "<repl>";
    options.base_dir = std::filesystem::current_path();
    options.color = wt::color_enabled(isatty(STDERR_FILENO) != 0);
    int failures = wt::repl(std::cin, std::cout, std::cerr, options, isatty(STDIN_FILENO) != 0);
    return failures == 0 ? exit_ok : exit_script_error;
  }
  std::cerr << app.help();
  return exit_usage;
}
