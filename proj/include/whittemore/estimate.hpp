#pragma once

#include <cmath>
#include <memory>
#include <variant>
#include <vector>

#include "whittemore/distribution.hpp"
#include "whittemore/error.hpp"
#include "whittemore/form.hpp"
#include "whittemore/identify.hpp"
#include "whittemore/query.hpp"

namespace whittemore {

/// Counts conditionals evaluated on zero-probability contexts (taken as 0).
struct EvalStats {
  std::size_t zero_denominators = 0;
};

inline constexpr double normalization_tolerance = 1e-9;

/// Numeric value of `f` under `env`. P-forms are conditional probabilities,
/// with 0/0 taken as 0 and P() taken as 1; Sum-forms range over the support of
/// their subscripts and shadow outer values of the same variables.
inline double evaluate(const Distribution& d, const Form& f, const Event& env, EvalStats* stats = nullptr) {
  return f.visit([&](const auto& n) -> double {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, PForm>) {
      if (n.vars.empty()) return 1.0;
      Event given;
      for (const auto& v : n.given) {
        auto it = env.find(v);
        if (it == env.end()) throw EstimationError("unbound variable :" + v.name());
        given.emplace(v, it->second);
      }
      Event both = given;
      for (const auto& v : n.vars) {
        auto it = env.find(v);
        if (it == env.end()) throw EstimationError("unbound variable :" + v.name());
        both.emplace(v, it->second);
      }
      const double joint = d.measure(both);
      if (given.empty()) return joint;
      const double context = d.measure(given);
      if (context == 0) {
        if (stats) ++stats->zero_denominators;
        return 0.0;
      }
      return joint / context;
    } else if constexpr (std::is_same_v<T, SumForm>) {
      std::vector<Variable> sub(n.sub.begin(), n.sub.end());
      std::vector<std::vector<Category>> supports;
      for (const auto& v : sub) {
        supports.push_back(d.support(v));
        if (supports.back().empty()) return 0.0;
      }
      Event inner = env;
      std::vector<std::size_t> digit(sub.size(), 0);
      double total = 0;
      while (true) {
        for (std::size_t i = 0; i < sub.size(); ++i) inner.insert_or_assign(sub[i], supports[i][digit[i]]);
        total += evaluate(d, n.body, inner, stats);
        std::size_t i = 0;
        for (; i < sub.size(); ++i) {
          if (++digit[i] < supports[i].size()) break;
          digit[i] = 0;
        }
        if (i == sub.size()) break;
      }
      return total;
    } else if constexpr (std::is_same_v<T, ProdForm>) {
      double total = 1;
      for (const auto& x : n.factors) total *= evaluate(d, x, env, stats);
      return total;
    } else {
      const double numer = evaluate(d, n.numer, env, stats);
      const double denom = evaluate(d, n.denom, env, stats);
      if (denom == 0) {
        if (stats) ++stats->zero_denominators;
        return 0.0;
      }
      return numer / denom;
    }
  });
}

/// Evaluates a formula; `context` supplies values for free variables the
/// bindings leave open. Outer bindings win over the context.
inline double evaluate(const Distribution& d, const Formula& f, const Event& context = {}, EvalStats* stats = nullptr) {
  Event env = context;
  for (const auto& [v, value] : f.bindings) env.insert_or_assign(v, value);
  return evaluate(d, f.form, env, stats);
}

/// A probability, or a distribution over the effect variables.
using Estimate = std::variant<double, DistributionPtr>;

/// Applies a formula to a distribution. When the bindings fix every free
/// variable the result is a probability; otherwise it is the distribution over
/// the remaining (effect) variables, which must sum to 1.
inline Estimate estimate(const Distribution& d, const Formula& f) {
  const VarSet known = d.variables();
  const VarSet free = free_variables(f.form);
  for (const auto& v : free) {
    if (!known.contains(v)) throw EstimationError("formula variable :" + v.name() + " is not in the distribution");
  }
  const VarSet open = minus(free, keys(f.bindings));
  if (!includes(f.effect, open)) {
    throw EstimationError("formula is unbound: provide values for " + format_vars(minus(open, f.effect)) +
                          " before estimating");
  }
  if (open.empty()) return evaluate(d, f);

  std::vector<Variable> vars(open.begin(), open.end());
  std::vector<std::vector<Category>> supports;
  for (const auto& v : vars) {
    supports.push_back(d.support(v));
    if (supports.back().empty()) throw EstimationError("variable :" + v.name() + " has an empty support");
  }
  std::vector<std::pair<CategoricalDistribution::Cell, double>> cells;
  std::vector<std::size_t> digit(vars.size(), 0);
  double total = 0;
  while (true) {
    Event context;
    CategoricalDistribution::Cell cell;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      context.emplace(vars[i], supports[i][digit[i]]);
      cell.push_back(supports[i][digit[i]]);
    }
    const double w = evaluate(d, f, context);
    total += w;
    cells.emplace_back(std::move(cell), w);
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++digit[i] < supports[i].size()) break;
      digit[i] = 0;
    }
    if (i == vars.size()) break;
  }
  if (std::abs(total - 1.0) > normalization_tolerance) {
    throw EstimationError("estimated values sum to " + format_double(total) + ", not 1 (is the context possible?)");
  }
  return std::make_shared<const CategoricalDistribution>(CategoricalDistribution::from_weights(vars, cells));
}

/// Applies a statistical query directly. Causal queries need a model, see infer.
inline Estimate estimate(const Distribution& d, const Query& q) {
  if (q.causal()) {
    throw EstimationError("a causal (:do) query needs a model to be identified first; use infer");
  }
  if (q.kind == Query::Kind::unbound) {
    throw EstimationError("an unbound query cannot be estimated without values for its :given variables");
  }
  const VarSet known = d.variables();
  for (const auto& v : q.variables()) {
    if (!known.contains(v)) throw EstimationError("query variable :" + v.name() + " is not in the distribution");
  }
  return estimate(d, statistical_formula(q));
}

/// A probability, a distribution, or the identification failure.
using Inference = std::variant<double, DistributionPtr, Fail>;

/// identify against the distribution's signature, then estimate.
inline Inference infer(const Model& m, const Distribution& d, const Query& q) {
  Identification id = identify(m, signature(d), q);
  if (auto* fail = std::get_if<Fail>(&id)) return *fail;
  Estimate e = estimate(d, std::get<Formula>(id));
  if (auto* p = std::get_if<double>(&e)) return *p;
  return std::get<DistributionPtr>(e);
}

}  // namespace whittemore
