#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "whittemore/form.hpp"
#include "whittemore/model.hpp"

namespace whittemore {

namespace detail {

inline std::string latex_variable(const std::string& name) {
  auto is_alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  if (name.size() == 1 && std::isalpha(static_cast<unsigned char>(name[0]))) return name;
  if (name.size() >= 3 && std::isalpha(static_cast<unsigned char>(name[0])) && name[1] == '_' &&
      std::all_of(name.begin() + 2, name.end(), is_alnum)) {
    return name.size() == 3 ? name : name.substr(0, 2) + "{" + name.substr(2) + "}";
  }
  std::string escaped;
  for (char c : name) {
    if (c == '_' || c == '#' || c == '$' || c == '%' || c == '&' || c == '{' || c == '}') escaped += '\\';
    if (c == '\\') {
      escaped += "\\backslash{}";
      continue;
    }
    if (c == '^' || c == '~') {
      escaped += std::string("\\") + c + "{}";
      continue;
    }
    escaped += c;
  }
  return "\\mathrm{" + escaped + "}";
}

class LatexWriter {
 public:
  explicit LatexWriter(const std::vector<Variable>& order) {
    for (std::size_t i = 0; i < order.size(); ++i) rank_.emplace(order[i], i);
  }

  std::string vars(const VarSet& s) const {
    std::vector<Variable> sorted(s.begin(), s.end());
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Variable& a, const Variable& b) {
      return rank(a) < rank(b);
    });
    std::string out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (i) out += ", ";
      out += latex_variable(sorted[i].name());
    }
    return out;
  }

  std::string form(const Form& f) const {
    return f.visit([&](const auto& n) -> std::string {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, PForm>) {
        if (n.vars.empty()) return "1";
        std::string s = "P(" + vars(n.vars);
        if (!n.given.empty()) s += " \\mid " + vars(n.given);
        return s + ")";
      } else if constexpr (std::is_same_v<T, SumForm>) {
        return "\\sum_{" + vars(n.sub) + "} " + form(n.body);
      } else if constexpr (std::is_same_v<T, ProdForm>) {
        return product(n);
      } else {
        return "\\frac{" + form(n.numer) + "}{" + form(n.denom) + "}";
      }
    });
  }

 private:
  // Factors in descending lexicographic order of their rendering; a sum
  // used as a factor is bracketed so the scope of its subscript is visible.
  std::string product(const ProdForm& p) const {
    std::vector<std::string> parts;
    for (const auto& x : p.factors) {
      std::string s = form(x);
      if (x.get_if<SumForm>()) s = "\\left[ " + s + " \\right]";
      else if (x.get_if<ProdForm>()) s = "\\left( " + s + " \\right)";
      parts.push_back(std::move(s));
    }
    std::sort(parts.begin(), parts.end(), std::greater<>());
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ' ';
      out += parts[i];
    }
    return out;
  }

  std::size_t rank(const Variable& v) const {
    auto it = rank_.find(v);
    return it == rank_.end() ? rank_.size() : it->second;
  }

  std::map<Variable, std::size_t> rank_;
};

inline std::string latex_value(const Category& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return "\\text{" + *s + "}";
  return category_text(c);
}

}  // namespace detail

/// LaTeX math for a form. Variables inside P(...) and sum subscripts follow
/// `order`, then lexicographic order for variables not in it.
inline std::string to_latex(const Form& f, const std::vector<Variable>& order = {}) {
  return detail::LatexWriter(order).form(f);
}

/// LaTeX math for a formula; non-empty bindings add a second `where:` line.
inline std::string to_latex(const Formula& f) {
  std::string out = to_latex(f.form, f.display_order);
  if (!f.bindings.empty()) {
    out += "\n\\text{where: } ";
    bool first = true;
    for (const auto& [v, value] : f.bindings) {
      if (!first) out += ", ";
      first = false;
      out += detail::latex_variable(v.name()) + "=" + detail::latex_value(value);
    }
  }
  return out;
}

namespace detail {

inline std::string dot_id(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Graphviz digraph: solid edges for the DAG, one dashed, double-headed,
/// non-constraining edge per confounded pair.
inline std::string to_dot(const Model& m) {
  std::string out = "digraph {\n";
  for (const auto& v : m.vertices()) out += "  " + detail::dot_id(v.name()) + ";\n";
  std::set<std::pair<Variable, Variable>> edges;
  for (const auto& [child, parents] : m.dag()) {
    for (const auto& p : parents) edges.emplace(p, child);
  }
  for (const auto& [from, to] : edges) {
    out += "  " + detail::dot_id(from.name()) + " -> " + detail::dot_id(to.name()) + ";\n";
  }
  for (const auto& [a, b] : m.bidirected_edges()) {
    out += "  " + detail::dot_id(a.name()) + " -> " + detail::dot_id(b.name()) +
           " [style=dashed, dir=both, constraint=false];\n";
  }
  return out + "}\n";
}

}  // namespace whittemore
