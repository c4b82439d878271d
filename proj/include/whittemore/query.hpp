#pragma once

#include <string>
#include <variant>
#include <vector>

#include "whittemore/error.hpp"
#include "whittemore/variable.hpp"

namespace whittemore {

/// A statistical or causal query P(effect | do(...), given).
///
/// unbound: do/given name variables only, e.g. P(y | do(x)).
/// bound:   do/given carry values, e.g. P(y | do(X=0)); the canonical form.
/// event:   effect carries values too, e.g. P(Y=1 | do(X=0)).
struct Query {
  enum class Kind { unbound, bound, event };

  Kind kind = Kind::bound;
  VarSet effect;
  Event effect_values;  // event queries only
  VarSet do_vars;
  Event do_values;  // bound and event queries
  VarSet given_vars;
  Event given_values;

  bool causal() const noexcept { return !do_vars.empty(); }

  VarSet variables() const { return unite(unite(effect, do_vars), given_vars); }

  /// The value maps a bound or event query fixes (do, given, and for events the effect).
  Event values() const {
    Event out = do_values;
    out.insert(given_values.begin(), given_values.end());
    out.insert(effect_values.begin(), effect_values.end());
    return out;
  }

  friend bool operator==(const Query&, const Query&) = default;
};

/// Either a list of variables or an assignment of values.
using QueryPart = std::variant<std::vector<Variable>, Event>;

namespace detail {

inline bool part_empty(const QueryPart& p) {
  return std::visit([](const auto& x) { return x.empty(); }, p);
}

inline bool part_bound(const QueryPart& p) { return std::holds_alternative<Event>(p); }

inline VarSet part_vars(const QueryPart& p) {
  if (const auto* e = std::get_if<Event>(&p)) return keys(*e);
  const auto& vs = std::get<std::vector<Variable>>(p);
  return VarSet(vs.begin(), vs.end());
}

}  // namespace detail

inline Query make_query(const QueryPart& effect, const QueryPart& intervention = Event{},
                        const QueryPart& given = Event{}) {
  Query q;
  q.effect = detail::part_vars(effect);
  q.do_vars = detail::part_vars(intervention);
  q.given_vars = detail::part_vars(given);
  if (q.effect.empty()) throw QueryError("a query needs at least one effect variable");

  auto require_disjoint = [](const VarSet& a, const VarSet& b, const char* what) {
    VarSet both = intersect(a, b);
    if (!both.empty()) throw QueryError(std::string("variables ") + format_vars(both) + " appear in both " + what);
  };
  require_disjoint(q.effect, q.do_vars, "effect and :do");
  require_disjoint(q.effect, q.given_vars, "effect and :given");
  require_disjoint(q.do_vars, q.given_vars, ":do and :given");

  // Empty parts are compatible with any kind.
  bool any_unbound = false;
  bool any_bound = false;
  for (const QueryPart* part : {&intervention, &given}) {
    if (detail::part_empty(*part)) continue;
    (detail::part_bound(*part) ? any_bound : any_unbound) = true;
  }
  if (any_bound && any_unbound) {
    throw QueryError("cannot mix bound {var value} and unbound [var] forms in :do and :given");
  }
  if (detail::part_bound(effect)) {
    if (any_unbound) throw QueryError("an event query needs :do and :given values, not bare variables");
    q.kind = Query::Kind::event;
    q.effect_values = std::get<Event>(effect);
  } else {
    q.kind = any_unbound ? Query::Kind::unbound : Query::Kind::bound;
  }
  if (const auto* e = std::get_if<Event>(&intervention)) q.do_values = *e;
  if (const auto* e = std::get_if<Event>(&given)) q.given_values = *e;
  return q;
}

}  // namespace whittemore
