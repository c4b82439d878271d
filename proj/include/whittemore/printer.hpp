#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "whittemore/distribution.hpp"
#include "whittemore/value.hpp"

namespace whittemore {

namespace detail {

inline std::string keyword_list(const std::vector<Variable>& vars, const char* open, const char* close) {
  std::string s = open;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) s += ' ';
    s += ':' + vars[i].name();
  }
  return s + close;
}

inline std::string event_literal(const Event& e) {
  std::string s = "{";
  bool first = true;
  for (const auto& [k, v] : e) {
    if (!first) s += ", ";
    first = false;
    s += ':' + k.name() + ' ' + category_literal(v);
  }
  return s + "}";
}

inline std::string model_literal(const Model& m) {
  std::string s = "(model {";
  bool first = true;
  for (const auto& [v, ps] : m.dag()) {
    if (!first) s += ", ";
    first = false;
    s += ':' + v.name() + ' ' + keyword_list({ps.begin(), ps.end()}, "[", "]");
  }
  s += "}";
  for (const auto& group : m.confounding()) s += ' ' + format_vars(group);
  return s + ")";
}

inline std::string query_part(const VarSet& vars, const Event& values, Query::Kind kind) {
  if (kind == Query::Kind::unbound) return keyword_list({vars.begin(), vars.end()}, "[", "]");
  return event_literal(values);
}

inline std::string query_literal(const Query& q) {
  std::string s = "(q ";
  s += q.kind == Query::Kind::event ? event_literal(q.effect_values)
                                    : keyword_list({q.effect.begin(), q.effect.end()}, "[", "]");
  if (!q.do_vars.empty()) s += " :do " + query_part(q.do_vars, q.do_values, q.kind);
  if (!q.given_vars.empty()) s += " :given " + query_part(q.given_vars, q.given_values, q.kind);
  return s + ")";
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace detail

/// Aligned text table: a header row, then one row per sample.
inline std::string format_table(const std::vector<Variable>& columns, const std::vector<Event>& rows) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& c : columns) width.push_back(c.name().size());
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      auto it = row.find(columns[i]);
      line.push_back(it == row.end() ? "" : category_text(it->second));
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s;
    for (std::size_t i = 0; i < line.size(); ++i) {
      s += i + 1 == line.size() ? line[i] : detail::pad(line[i], width[i] + 2);
    }
    return s + "\n";
  };
  std::vector<std::string> header;
  for (const auto& c : columns) header.push_back(c.name());
  std::string out = emit(header);
  for (const auto& line : cells) out += emit(line);
  return out;
}

/// First min(n, size) rows.
inline Dataset head(const Dataset& d, std::int64_t n) {
  if (n < 0) throw EvalError("head needs a non-negative count, got " + std::to_string(n));
  Dataset out{d.columns, {}};
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(n), d.rows.size());
  out.rows.assign(d.rows.begin(), d.rows.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

inline constexpr std::size_t marginal_bar_width = 40;

/// One row per support value of `v`: value, probability, and a bar of `#`
/// proportional to the probability (40 characters for probability 1).
inline std::string marginal_table(const Distribution& d, const Variable& v) {
  if (!d.variables().contains(v)) throw EstimationError("unknown variable :" + v.name());
  std::vector<std::string> labels;
  std::vector<double> probs;
  std::size_t label_width = v.name().size();
  for (const auto& value : d.support(v)) {
    labels.push_back(category_literal(value));
    probs.push_back(d.measure({{v, value}}));
    label_width = std::max(label_width, labels.back().size());
  }
  std::size_t prob_width = std::string("probability").size();
  for (double p : probs) prob_width = std::max(prob_width, format_double(p).size());
  std::string out = detail::pad(v.name(), label_width + 2) + "probability\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto bar = static_cast<std::size_t>(std::lround(probs[i] * marginal_bar_width));
    out += detail::pad(labels[i], label_width + 2) + detail::pad(format_double(probs[i]), prob_width + 2) +
           std::string(std::min(bar, marginal_bar_width), '#') + "\n";
  }
  return out;
}

/// Canonical text of a value. Literal values, models, data and queries print
/// as source that evaluates back to an equal value.
inline std::string print_value(const Value& v) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Nil>) {
          return "nil";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return quote_string(x);
        } else if constexpr (std::is_same_v<T, Keyword>) {
          return ':' + x.name;
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const VectorValue>> ||
                             std::is_same_v<T, std::shared_ptr<const SetValue>>) {
          std::string s = std::is_same_v<T, std::shared_ptr<const SetValue>> ? "#{" : "[";
          for (std::size_t i = 0; i < x->items.size(); ++i) {
            if (i) s += ' ';
            s += print_value(x->items[i]);
          }
          return s + (std::is_same_v<T, std::shared_ptr<const SetValue>> ? "}" : "]");
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const MapValue>>) {
          std::string s = "{";
          for (std::size_t i = 0; i < x->entries.size(); ++i) {
            if (i) s += ", ";
            s += print_value(x->entries[i].first) + ' ' + print_value(x->entries[i].second);
          }
          return s + "}";
        } else if constexpr (std::is_same_v<T, Model>) {
          return detail::model_literal(x);
        } else if constexpr (std::is_same_v<T, Data>) {
          return detail::keyword_list({x.joint.begin(), x.joint.end()}, "(data [", "])");
        } else if constexpr (std::is_same_v<T, Query>) {
          return detail::query_literal(x);
        } else if constexpr (std::is_same_v<T, Formula>) {
          std::string s = "(formula " + format_form(x.form);
          if (!x.bindings.empty()) s += " :where " + detail::event_literal(x.bindings);
          s += " :effect " + format_vars(x.effect);
          return s + ")";
        } else if constexpr (std::is_same_v<T, Fail>) {
          return "#<fail " + x.message + ">";
        } else if constexpr (std::is_same_v<T, DistributionPtr>) {
          return x->describe();
        } else if constexpr (std::is_same_v<T, Dataset>) {
          return format_table(x.columns, x.rows);
        } else {
          return x.text;
        }
      },
      v.storage());
}

}  // namespace whittemore
