#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "whittemore/form.hpp"

namespace whittemore {

/// A local rewrite: returns the replacement for a node, or nothing.
using Rule = std::function<std::optional<Form>(const Form&)>;

/// Applies `rule` bottom-up: children are rewritten first, then the rule is
/// retried at the node until it no longer fires. Untouched subtrees are shared.
inline Form rewrite_bottom_up(const Form& f, const Rule& rule) {
  Form rebuilt = f.visit([&](const auto& n) -> Form {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, PForm>) {
      return f;
    } else if constexpr (std::is_same_v<T, SumForm>) {
      Form body = rewrite_bottom_up(n.body, rule);
      return &body.node() == &n.body.node() ? f : sum(body, n.sub);
    } else if constexpr (std::is_same_v<T, ProdForm>) {
      bool changed = false;
      std::vector<Form> factors;
      factors.reserve(n.factors.size());
      for (const auto& x : n.factors) {
        factors.push_back(rewrite_bottom_up(x, rule));
        changed |= &factors.back().node() != &x.node();
      }
      return changed ? product(std::move(factors)) : f;
    } else {
      Form numer = rewrite_bottom_up(n.numer, rule);
      Form denom = rewrite_bottom_up(n.denom, rule);
      bool same = &numer.node() == &n.numer.node() && &denom.node() == &n.denom.node();
      return same ? f : fraction(numer, denom);
    }
  });
  while (auto next = rule(rebuilt)) rebuilt = rewrite_bottom_up(*next, rule);
  return rebuilt;
}

namespace rules {

// sum_T P(S | G) = P(S \ T | G)  when T is a subset of S and disjoint from G.
inline std::optional<Form> marginalize(const Form& f) {
  const auto* s = f.get_if<SumForm>();
  if (!s) return std::nullopt;
  const auto* p = s->body.get_if<PForm>();
  if (!p || !includes(p->vars, s->sub) || !disjoint(s->sub, p->given)) return std::nullopt;
  return prob(minus(p->vars, s->sub), p->given);
}

// P(A | G) / P(B | G) = P(A \ B | G u B)  when B is a proper subset of A.
inline std::optional<Form> condition(const Form& f) {
  const auto* q = f.get_if<FractionForm>();
  if (!q) return std::nullopt;
  const auto* a = q->numer.get_if<PForm>();
  const auto* b = q->denom.get_if<PForm>();
  if (!a || !b || a->given != b->given) return std::nullopt;
  if (b->vars.size() >= a->vars.size() || !includes(a->vars, b->vars)) return std::nullopt;
  return prob(minus(a->vars, b->vars), unite(a->given, b->vars));
}

// A sum over nothing is its body.
inline std::optional<Form> drop_empty_sum(const Form& f) {
  const auto* s = f.get_if<SumForm>();
  if (s && s->sub.empty()) return s->body;
  return std::nullopt;
}

// Nested sums over disjoint subscripts merge into one.
inline std::optional<Form> merge_sums(const Form& f) {
  const auto* s = f.get_if<SumForm>();
  if (!s) return std::nullopt;
  const auto* inner = s->body.get_if<SumForm>();
  if (!inner || !disjoint(inner->sub, s->sub)) return std::nullopt;
  return sum(inner->body, unite(inner->sub, s->sub));
}

// Flattens nested products, drops constant-1 factors (only when that keeps the
// free variables unchanged), and unwraps products of zero or one factor.
inline std::optional<Form> tidy_product(const Form& f) {
  const auto* p = f.get_if<ProdForm>();
  if (!p) return std::nullopt;
  std::vector<Form> flat;
  bool changed = false;
  for (const auto& x : p->factors) {
    if (const auto* inner = x.get_if<ProdForm>()) {
      flat.insert(flat.end(), inner->factors.begin(), inner->factors.end());
      changed = true;
    } else {
      flat.push_back(x);
    }
  }
  const VarSet free = free_variables(f);
  for (std::size_t i = 0; i < flat.size();) {
    if (is_one(flat[i])) {
      std::vector<Form> rest = flat;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      VarSet rest_free;
      for (const auto& x : rest) rest_free = unite(rest_free, free_variables(x));
      if (rest_free == free) {
        flat = std::move(rest);
        changed = true;
        continue;
      }
    }
    ++i;
  }
  if (flat.empty()) return one();
  if (flat.size() == 1) return flat.front();
  if (!changed) return std::nullopt;
  return product(std::move(flat));
}

// x / 1 = x, again only when no free variable disappears.
inline std::optional<Form> drop_unit_denominator(const Form& f) {
  const auto* q = f.get_if<FractionForm>();
  if (!q || !is_one(q->denom)) return std::nullopt;
  if (!includes(free_variables(q->numer), free_variables(q->denom))) return std::nullopt;
  return q->numer;
}

inline std::optional<Form> cleanup(const Form& f) {
  for (const auto& rule : {drop_empty_sum, merge_sums, tidy_product, drop_unit_denominator}) {
    if (auto out = rule(f)) return out;
  }
  return std::nullopt;
}

}  // namespace rules

inline Form marginalize_pass(const Form& f) { return rewrite_bottom_up(f, rules::marginalize); }

inline Form condition_pass(const Form& f) { return rewrite_bottom_up(f, rules::condition); }

inline Form cleanup_pass(const Form& f) { return rewrite_bottom_up(f, rules::cleanup); }

/// Runs marginalize, condition and cleanup passes to a global fixpoint. Each
/// rewrite strictly shrinks `node_count`, so the loop is bounded by it.
inline Form simplify(const Form& f) {
  Form current = f;
  for (std::size_t round = 0, limit = node_count(f) + 1; round <= limit; ++round) {
    Form next = cleanup_pass(condition_pass(marginalize_pass(current)));
    if (next == current) return next;
    current = next;
  }
  return current;
}

inline Formula simplify(const Formula& f) {
  Formula out = f;
  out.form = simplify(f.form);
  return out;
}

}  // namespace whittemore
