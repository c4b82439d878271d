#pragma once

#include <algorithm>
#include <compare>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "whittemore/variable.hpp"

namespace whittemore {

struct FormNode;

/// An immutable probability expression. One of:
///   P-form        P(vars | given)
///   Sum-form      sum over `sub` of a body
///   Prod-form     product of an unordered collection of factors
///   Fraction-form numer / denom
/// A Sum-form binds its `sub` variables lexically within its body.
class Form {
 public:
  explicit Form(std::shared_ptr<const FormNode> node) : node_(std::move(node)) {}

  const FormNode& node() const noexcept { return *node_; }

  template <class T>
  const T* get_if() const;

  template <class Visitor>
  decltype(auto) visit(Visitor&& vis) const;

 private:
  std::shared_ptr<const FormNode> node_;
};

struct PForm {
  VarSet vars;
  VarSet given;
};

struct SumForm {
  Form body;
  VarSet sub;
};

// Factors are kept sorted by `compare` so equality ignores their order.
struct ProdForm {
  std::vector<Form> factors;
};

struct FractionForm {
  Form numer;
  Form denom;
};

struct FormNode {
  std::variant<PForm, SumForm, ProdForm, FractionForm> value;
};

template <class T>
const T* Form::get_if() const {
  return std::get_if<T>(&node_->value);
}

template <class Visitor>
decltype(auto) Form::visit(Visitor&& vis) const {
  return std::visit(std::forward<Visitor>(vis), node_->value);
}

namespace detail {

inline std::strong_ordering compare_sets(const VarSet& a, const VarSet& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

/// Total structural order on forms.
inline std::strong_ordering compare(const Form& a, const Form& b) {
  if (&a.node() == &b.node()) return std::strong_ordering::equal;
  const auto& va = a.node().value;
  const auto& vb = b.node().value;
  if (va.index() != vb.index()) return va.index() <=> vb.index();
  if (const auto* p = std::get_if<PForm>(&va)) {
    const auto& q = std::get<PForm>(vb);
    if (auto c = detail::compare_sets(p->vars, q.vars); c != 0) return c;
    return detail::compare_sets(p->given, q.given);
  }
  if (const auto* s = std::get_if<SumForm>(&va)) {
    const auto& t = std::get<SumForm>(vb);
    if (auto c = detail::compare_sets(s->sub, t.sub); c != 0) return c;
    return compare(s->body, t.body);
  }
  if (const auto* p = std::get_if<ProdForm>(&va)) {
    const auto& q = std::get<ProdForm>(vb);
    return std::lexicographical_compare_three_way(p->factors.begin(), p->factors.end(), q.factors.begin(),
                                                  q.factors.end(),
                                                  [](const Form& x, const Form& y) { return compare(x, y); });
  }
  const auto& f = std::get<FractionForm>(va);
  const auto& g = std::get<FractionForm>(vb);
  if (auto c = compare(f.numer, g.numer); c != 0) return c;
  return compare(f.denom, g.denom);
}

inline bool operator==(const Form& a, const Form& b) { return compare(a, b) == 0; }
inline std::strong_ordering operator<=>(const Form& a, const Form& b) { return compare(a, b); }

inline Form prob(VarSet vars, VarSet given = {}) {
  return Form(std::make_shared<const FormNode>(FormNode{PForm{std::move(vars), std::move(given)}}));
}

/// The constant 1, written P() with no variables.
inline Form one() { return prob({}); }

inline Form sum(Form body, VarSet sub) {
  return Form(std::make_shared<const FormNode>(FormNode{SumForm{std::move(body), std::move(sub)}}));
}

inline Form product(std::vector<Form> factors) {
  std::sort(factors.begin(), factors.end(), [](const Form& a, const Form& b) { return compare(a, b) < 0; });
  return Form(std::make_shared<const FormNode>(FormNode{ProdForm{std::move(factors)}}));
}

inline Form fraction(Form numer, Form denom) {
  return Form(std::make_shared<const FormNode>(FormNode{FractionForm{std::move(numer), std::move(denom)}}));
}

/// P-form with no variables, i.e. a factor equal to 1.
inline bool is_one(const Form& f) {
  const auto* p = f.get_if<PForm>();
  return p && p->vars.empty();
}

/// Variables appearing in some P-form and not captured by an enclosing Sum-form.
inline VarSet free_variables(const Form& f) {
  return f.visit([](const auto& n) -> VarSet {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, PForm>) {
      return unite(n.vars, n.given);
    } else if constexpr (std::is_same_v<T, SumForm>) {
      return minus(free_variables(n.body), n.sub);
    } else if constexpr (std::is_same_v<T, ProdForm>) {
      VarSet out;
      for (const auto& x : n.factors) out = unite(out, free_variables(x));
      return out;
    } else {
      return unite(free_variables(n.numer), free_variables(n.denom));
    }
  });
}

/// Size measure: one per node plus one per variable mention.
inline std::size_t node_count(const Form& f) {
  return f.visit([](const auto& n) -> std::size_t {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, PForm>) {
      return 1 + n.vars.size() + n.given.size();
    } else if constexpr (std::is_same_v<T, SumForm>) {
      return 1 + n.sub.size() + node_count(n.body);
    } else if constexpr (std::is_same_v<T, ProdForm>) {
      std::size_t total = 1;
      for (const auto& x : n.factors) total += node_count(x);
      return total;
    } else {
      return 1 + node_count(n.numer) + node_count(n.denom);
    }
  });
}

/// Map-literal notation, e.g. {:sum {:p #{:x :y}}, :sub #{:y}}.
inline std::string format_form(const Form& f) {
  return f.visit([](const auto& n) -> std::string {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, PForm>) {
      std::string s = "{:p " + format_vars(n.vars);
      if (!n.given.empty()) s += ", :given " + format_vars(n.given);
      return s + "}";
    } else if constexpr (std::is_same_v<T, SumForm>) {
      return "{:sum " + format_form(n.body) + ", :sub " + format_vars(n.sub) + "}";
    } else if constexpr (std::is_same_v<T, ProdForm>) {
      std::string s = "{:prod #{";
      for (std::size_t i = 0; i < n.factors.size(); ++i) {
        if (i) s += ' ';
        s += format_form(n.factors[i]);
      }
      return s + "}}";
    } else {
      return "{:numer " + format_form(n.numer) + ", :denom " + format_form(n.denom) + "}";
    }
  });
}

/// A form plus value bindings for (some of) its free variables.
///
/// `effect` names the variables the formula is a distribution over; estimation
/// uses it to tell an unbound formula from a bound one. `display_order` is the
/// vertex order of the diagram it was identified on and only affects rendering.
struct Formula {
  Form form = one();
  Event bindings;
  VarSet effect;
  std::vector<Variable> display_order;

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.form == b.form && a.bindings == b.bindings && a.effect == b.effect;
  }
};

inline VarSet free_variables(const Formula& f) { return free_variables(f.form); }

}  // namespace whittemore
