#pragma once

#include <algorithm>
#include <string>
#include <variant>
#include <vector>

#include "whittemore/error.hpp"
#include "whittemore/form.hpp"
#include "whittemore/model.hpp"
#include "whittemore/query.hpp"
#include "whittemore/simplify.hpp"

namespace whittemore {

/// A hedge: two C-forests F' inside F, both sharing the root set `effect`
/// (the sub-effect the recursion was trying to identify when it failed).
struct Hedge {
  Model forest;
  Model subforest;
  VarSet effect;

  friend bool operator==(const Hedge&, const Hedge&) = default;
};

/// Result of identify when no formula exists.
struct Fail {
  Hedge hedge;
  std::string message;

  friend bool operator==(const Fail&, const Fail&) = default;
};

using Identification = std::variant<Formula, Fail>;

namespace detail {

struct HedgeFound {
  Hedge hedge;
};

// P(target | cond) out of a probability expression `p` over `vertices`.
inline Form conditional(const Form& p, const VarSet& vertices, const VarSet& target, const VarSet& cond) {
  return fraction(sum(p, minus(vertices, unite(target, cond))), sum(p, minus(vertices, cond)));
}

// Chain factorization of `members`, each conditioned on all of its
// predecessors in the topological order of `g`.
inline Form chain_product(const Form& p, const Model& g, const VarSet& members) {
  const VarSet vertices = g.vertices();
  std::vector<Form> factors;
  VarSet before;
  for (const auto& v : topological_order(g)) {
    if (members.contains(v)) factors.push_back(conditional(p, vertices, {v}, before));
    before.insert(v);
  }
  return product(std::move(factors));
}

// The ID recursion: P_x(y) from the probability expression `p` over the vertices of `g`.
inline Form id(const VarSet& y, const VarSet& x, const Form& p, const Model& g) {
  const VarSet v = g.vertices();

  if (x.empty()) return sum(p, minus(v, y));

  const VarSet an = ancestors(g, y);
  if (an != v) return id(y, intersect(x, an), sum(p, minus(v, an)), subgraph(g, an));

  const VarSet w = minus(minus(v, x), ancestors_avoiding(g, y, x));
  if (!w.empty()) {
    // The result is constant in w; average it over w's marginal so that no
    // w stays free.
    Form f = id(y, unite(x, w), p, g);
    const VarSet open = intersect(w, free_variables(f));
    if (open.empty()) return f;
    return sum(product({f, sum(p, minus(v, open))}), open);
  }

  const auto parts = c_components(subgraph(g, minus(v, x)));
  if (parts.size() > 1) {
    std::vector<Form> factors;
    for (const auto& s : parts) factors.push_back(id(s, minus(v, s), p, g));
    return sum(product(std::move(factors)), minus(v, unite(y, x)));
  }

  const VarSet& s = *parts.begin();
  const auto components = c_components(g);
  if (components.size() == 1) throw HedgeFound{Hedge{g, subgraph(g, s), y}};

  if (components.contains(s)) return sum(chain_product(p, g, s), minus(s, y));

  auto enclosing = std::find_if(components.begin(), components.end(),
                                [&](const VarSet& c) { return includes(c, s); });
  return id(y, intersect(x, *enclosing), chain_product(p, g, *enclosing), subgraph(g, *enclosing));
}

inline std::string describe_hedge(const Hedge& h, const Query& q) {
  std::string given = q.given_vars.empty() ? "" : ", " + format_vars(q.given_vars);
  return "P(" + format_vars(q.effect) + " | do " + format_vars(q.do_vars) + given +
         ") is not identifiable: hedge F = " + format_vars(h.forest.vertices()) +
         ", F' = " + format_vars(h.subforest.vertices()) + " for " + format_vars(h.effect);
}

}  // namespace detail

/// Compiles `q` into a formula over the joint distribution of `d.joint`, or
/// returns the hedge that makes it non-identifiable. Latent variables (model
/// vertices outside `d.joint`) are projected out first. Conditional queries
/// are answered as P(effect, given | do) / sum_effect P(effect, given | do).
inline Identification identify(const Model& m, const Data& d, const Query& q) {
  for (const auto& v : d.joint) {
    if (!m.contains(v)) throw QueryError("data variable :" + v.name() + " is not a variable of the model");
  }
  for (const auto& v : q.variables()) {
    if (!d.joint.contains(v)) throw QueryError("query variable :" + v.name() + " is not in the data signature");
  }
  const Model g = d.joint == m.vertices() ? m : latent_projection(m, d.joint);
  const Form joint = prob(d.joint);

  Form form = one();
  try {
    if (q.given_vars.empty()) {
      form = detail::id(q.effect, q.do_vars, joint, g);
    } else {
      Form both = detail::id(unite(q.effect, q.given_vars), q.do_vars, joint, g);
      form = fraction(both, sum(both, q.effect));
    }
  } catch (const detail::HedgeFound& found) {
    return Fail{found.hedge, detail::describe_hedge(found.hedge, q)};
  }

  Formula out;
  out.form = simplify(form);
  out.effect = q.effect;
  out.bindings = restrict(q.values(), free_variables(out.form));
  out.display_order = topological_order(g);
  return out;
}

/// Identification against the full observational joint of the model.
inline Identification identify(const Model& m, const Query& q) { return identify(m, Data{m.vertices()}, q); }

/// A statistical query as a formula, without any causal model.
inline Formula statistical_formula(const Query& q) {
  if (q.causal()) throw QueryError("a causal query needs a model to be identified");
  const VarSet all = unite(q.effect, q.given_vars);
  Formula out;
  out.form = simplify(fraction(prob(all), sum(prob(all), q.effect)));
  out.effect = q.effect;
  out.bindings = restrict(q.values(), free_variables(out.form));
  out.display_order.assign(all.begin(), all.end());
  return out;
}

}  // namespace whittemore
