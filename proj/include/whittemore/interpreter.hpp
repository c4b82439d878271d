#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "whittemore/csv.hpp"
#include "whittemore/distribution.hpp"
#include "whittemore/error.hpp"
#include "whittemore/estimate.hpp"
#include "whittemore/identify.hpp"
#include "whittemore/model.hpp"
#include "whittemore/parser.hpp"
#include "whittemore/printer.hpp"
#include "whittemore/query.hpp"
#include "whittemore/render.hpp"
#include "whittemore/simplify.hpp"
#include "whittemore/value.hpp"

namespace whittemore {

struct Binding {
  Value value;
  std::optional<std::string> doc;
};

/// Immutable symbol table. `extend` returns a new environment and refuses to
/// rebind an existing symbol.
class Environment {
 public:
  Environment() : bindings_(std::make_shared<const std::map<std::string, Binding>>()) {}

  const Binding* find(const std::string& name) const {
    auto it = bindings_->find(name);
    return it == bindings_->end() ? nullptr : &it->second;
  }

  Environment extend(const std::string& name, Value value, std::optional<std::string> doc = std::nullopt) const {
    if (bindings_->contains(name)) throw EvalError("cannot redefine '" + name + "': define cannot rebind symbols");
    auto next = std::make_shared<std::map<std::string, Binding>>(*bindings_);
    next->emplace(name, Binding{std::move(value), std::move(doc)});
    return Environment(std::move(next));
  }

  std::size_t size() const noexcept { return bindings_->size(); }

 private:
  explicit Environment(std::shared_ptr<const std::map<std::string, Binding>> b) : bindings_(std::move(b)) {}

  std::shared_ptr<const std::map<std::string, Binding>> bindings_;
};

struct EvalOptions {
  // Fallback directory for relative read-csv paths (normally the script's).
  std::filesystem::path base_dir;
};

struct EvalResult {
  Value value;
  Environment env;
};

namespace detail {

[[noreturn]] inline void type_error(const std::string& op, const std::string& expected, const Value& got) {
  throw EvalError(op + ": expected " + expected + ", got " + got.type_name());
}

inline Variable to_variable(const std::string& op, const Value& v) {
  std::string name;
  if (const auto* k = v.get_if<Keyword>()) name = k->name;
  else if (const auto* s = v.get_if<std::string>()) name = *s;
  else type_error(op, "a variable (keyword or string)", v);
  if (!Variable::valid_name(name)) throw EvalError(op + ": '" + name + "' is not a valid variable name");
  return Variable(name);
}

inline std::vector<Variable> to_variables(const std::string& op, const Value& v) {
  const std::vector<Value>* items = v.as_vector();
  if (!items) items = v.as_set();
  if (!items) type_error(op, "a vector or set of variables", v);
  std::vector<Variable> out;
  for (const auto& x : *items) out.push_back(to_variable(op, x));
  return out;
}

inline Category to_category(const std::string& op, const Value& v) {
  if (const auto* b = v.get_if<bool>()) return *b;
  if (const auto* i = v.get_if<std::int64_t>()) return *i;
  if (const auto* d = v.get_if<double>()) return *d;
  if (const auto* s = v.get_if<std::string>()) return *s;
  type_error(op, "a value (number, string or boolean)", v);
}

inline Event to_event(const std::string& op, const Value& v) {
  const auto* entries = v.as_map();
  if (!entries) type_error(op, "an event map", v);
  Event out;
  for (const auto& [k, x] : *entries) {
    Variable var = to_variable(op, k);
    if (!out.emplace(var, to_category(op, x)).second) {
      throw EvalError(op + ": variable :" + var.name() + " is assigned twice");
    }
  }
  return out;
}

inline QueryPart to_query_part(const Value& v) {
  if (v.as_map()) return to_event("q", v);
  return to_variables("q", v);
}

inline std::vector<Event> to_samples(const std::string& op, const Value& v) {
  if (const auto* d = v.get_if<Dataset>()) return d->rows;
  const auto* items = v.as_vector();
  if (!items) type_error(op, "a vector of sample maps or a dataset", v);
  std::vector<Event> out;
  for (const auto& x : *items) out.push_back(to_event(op, x));
  return out;
}

template <class T>
const T& expect(const std::string& op, const Value& v, const char* what) {
  const T* x = v.get_if<T>();
  if (!x) type_error(op, what, v);
  return *x;
}

inline const Distribution& expect_distribution(const std::string& op, const Value& v) {
  return *expect<DistributionPtr>(op, v, "a distribution");
}

inline void arity(const std::string& op, const std::vector<Value>& args, std::size_t lo, std::size_t hi) {
  if (args.size() < lo || args.size() > hi) {
    std::string range = lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi);
    throw EvalError(op + ": expected " + range + " arguments, got " + std::to_string(args.size()));
  }
}

inline Value from_estimate(const Estimate& e) {
  if (const auto* p = std::get_if<double>(&e)) return *p;
  return std::get<DistributionPtr>(e);
}

inline Value from_identification(const Identification& id) {
  if (const auto* f = std::get_if<Formula>(&id)) return *f;
  return std::get<Fail>(id);
}

inline Form to_form(const Value& v);

inline VarSet to_var_set(const std::string& op, const Value& v) {
  auto vars = to_variables(op, v);
  return VarSet(vars.begin(), vars.end());
}

// Inverse of format_form.
inline Form to_form(const Value& v) {
  const auto* entries = v.as_map();
  if (!entries) type_error("formula", "a form map", v);
  std::map<std::string, Value> fields;
  for (const auto& [k, x] : *entries) {
    const auto* kw = k.get_if<Keyword>();
    if (!kw) type_error("formula", "keyword keys in a form map", k);
    fields.emplace(kw->name, x);
  }
  auto has = [&](const char* key) { return fields.contains(key); };
  auto require_only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, _] : fields) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        throw EvalError("formula: unexpected key :" + k + " in form");
      }
    }
  };
  if (has("p")) {
    require_only({"p", "given"});
    return prob(to_var_set("formula", fields.at("p")), has("given") ? to_var_set("formula", fields.at("given")) : VarSet{});
  }
  if (has("sum")) {
    require_only({"sum", "sub"});
    if (!has("sub")) throw EvalError("formula: a :sum form needs :sub");
    return sum(to_form(fields.at("sum")), to_var_set("formula", fields.at("sub")));
  }
  if (has("prod")) {
    require_only({"prod"});
    const Value& members = fields.at("prod");
    const std::vector<Value>* items = members.as_set();
    if (!items) items = members.as_vector();
    if (!items) type_error("formula", "a set of forms under :prod", members);
    std::vector<Form> factors;
    for (const auto& x : *items) factors.push_back(to_form(x));
    return product(std::move(factors));
  }
  if (has("numer")) {
    require_only({"numer", "denom"});
    if (!has("denom")) throw EvalError("formula: a :numer form needs :denom");
    return fraction(to_form(fields.at("numer")), to_form(fields.at("denom")));
  }
  throw EvalError("formula: a form needs one of :p, :sum, :prod or :numer");
}

// Keyword arguments after `positional` leading arguments.
inline std::map<std::string, Value> keyword_args(const std::string& op, const std::vector<Value>& args,
                                                 std::size_t positional, std::initializer_list<const char*> allowed) {
  std::map<std::string, Value> out;
  if ((args.size() - positional) % 2 != 0) throw EvalError(op + ": keyword arguments must come in pairs");
  for (std::size_t i = positional; i < args.size(); i += 2) {
    const auto* kw = args[i].get_if<Keyword>();
    if (!kw) type_error(op, "a keyword argument", args[i]);
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return kw->name == a; })) {
      throw EvalError(op + ": unknown keyword argument :" + kw->name);
    }
    if (!out.emplace(kw->name, args[i + 1]).second) throw EvalError(op + ": :" + kw->name + " given twice");
  }
  return out;
}

struct Context {
  const EvalOptions& options;
};

using Operator = std::function<Value(const std::vector<Value>&, const Context&)>;

inline Value op_model(const std::vector<Value>& args, const Context&) {
  if (args.empty()) throw EvalError("model: expected a dag map and optional confounding sets");
  const auto* entries = args[0].as_map();
  if (!entries) type_error("model", "a map of variables to parents", args[0]);
  std::vector<std::pair<Variable, std::vector<Variable>>> dag;
  for (const auto& [k, parents] : *entries) dag.emplace_back(to_variable("model", k), to_variables("model", parents));
  std::vector<std::vector<Variable>> confounding;
  for (std::size_t i = 1; i < args.size(); ++i) confounding.push_back(to_variables("model", args[i]));
  return make_model(dag, confounding);
}

inline Value op_data(const std::vector<Value>& args, const Context&) {
  arity("data", args, 1, 1);
  return make_data(to_var_set("data", args[0]));
}

inline Value op_q(const std::vector<Value>& args, const Context&) {
  if (args.empty()) throw EvalError("q: expected an effect");
  auto kw = keyword_args("q", args, 1, {"do", "given"});
  QueryPart intervention = Event{};
  QueryPart given = Event{};
  if (kw.contains("do")) intervention = to_query_part(kw.at("do"));
  if (kw.contains("given")) given = to_query_part(kw.at("given"));
  return make_query(to_query_part(args[0]), intervention, given);
}

inline Value op_identify(const std::vector<Value>& args, const Context&) {
  arity("identify", args, 2, 3);
  const auto& m = expect<Model>("identify", args[0], "a model");
  const auto& q = expect<Query>("identify", args.back(), "a query");
  if (args.size() == 3) return from_identification(identify(m, expect<Data>("identify", args[1], "data"), q));
  return from_identification(identify(m, q));
}

inline Value op_estimate(const std::vector<Value>& args, const Context&) {
  arity("estimate", args, 2, 2);
  const Distribution& d = expect_distribution("estimate", args[0]);
  if (const auto* f = args[1].get_if<Formula>()) return from_estimate(estimate(d, *f));
  if (const auto* q = args[1].get_if<Query>()) return from_estimate(estimate(d, *q));
  if (const auto* fail = args[1].get_if<Fail>()) throw EvalError("estimate: cannot estimate a failed identification: " + fail->message);
  type_error("estimate", "a formula or query", args[1]);
}

inline Value op_measure(const std::vector<Value>& args, const Context&) {
  arity("measure", args, 2, 2);
  return expect_distribution("measure", args[0]).measure(to_event("measure", args[1]));
}

inline Value op_signature(const std::vector<Value>& args, const Context&) {
  arity("signature", args, 1, 1);
  return signature(expect_distribution("signature", args[0]));
}

inline Value op_infer(const std::vector<Value>& args, const Context&) {
  arity("infer", args, 3, 3);
  Inference r = infer(expect<Model>("infer", args[0], "a model"), expect_distribution("infer", args[1]),
                      expect<Query>("infer", args[2], "a query"));
  if (const auto* p = std::get_if<double>(&r)) return *p;
  if (const auto* d = std::get_if<DistributionPtr>(&r)) return *d;
  return std::get<Fail>(r);
}

inline Value op_categorical(const std::vector<Value>& args, const Context&) {
  arity("categorical", args, 1, 1);
  auto samples = to_samples("categorical", args[0]);
  return DistributionPtr(std::make_shared<const CategoricalDistribution>(categorical(samples)));
}

inline Value op_read_csv(const std::vector<Value>& args, const Context& ctx) {
  arity("read-csv", args, 1, 1);
  std::filesystem::path path = expect<std::string>("read-csv", args[0], "a file path string");
  if (path.is_relative() && !std::filesystem::exists(path) && !ctx.options.base_dir.empty()) {
    path = ctx.options.base_dir / path;
  }
  return read_csv(path.string());
}

inline Value op_head(const std::vector<Value>& args, const Context&) {
  arity("head", args, 1, 2);
  std::int64_t n = args.size() == 2 ? expect<std::int64_t>("head", args[1], "an integer count") : 5;
  if (const auto* d = args[0].get_if<Dataset>()) return head(*d, n);
  const auto* items = args[0].as_vector();
  if (!items) type_error("head", "a dataset or vector", args[0]);
  if (n < 0) throw EvalError("head needs a non-negative count, got " + std::to_string(n));
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(n), items->size());
  return Value::vector({items->begin(), items->begin() + static_cast<std::ptrdiff_t>(count)});
}

inline Value op_marginal_table(const std::vector<Value>& args, const Context&) {
  arity("marginal-table", args, 2, 2);
  return Text{marginal_table(expect_distribution("marginal-table", args[0]), to_variable("marginal-table", args[1]))};
}

inline Value op_latex(const std::vector<Value>& args, const Context&) {
  arity("latex", args, 1, 1);
  return Text{to_latex(expect<Formula>("latex", args[0], "a formula")) + "\n"};
}

inline Value op_dot(const std::vector<Value>& args, const Context&) {
  arity("dot", args, 1, 1);
  return Text{to_dot(expect<Model>("dot", args[0], "a model"))};
}

inline Value op_simplify(const std::vector<Value>& args, const Context&) {
  arity("simplify", args, 1, 1);
  return simplify(expect<Formula>("simplify", args[0], "a formula"));
}

inline Value op_formula(const std::vector<Value>& args, const Context&) {
  if (args.empty()) throw EvalError("formula: expected a form map");
  auto kw = keyword_args("formula", args, 1, {"where", "effect"});
  Formula f;
  f.form = to_form(args[0]);
  if (kw.contains("where")) f.bindings = to_event("formula", kw.at("where"));
  f.effect = kw.contains("effect") ? to_var_set("formula", kw.at("effect"))
                                   : minus(free_variables(f.form), keys(f.bindings));
  return f;
}

inline const std::map<std::string, Operator>& operators() {
  static const std::map<std::string, Operator> table{
      {"model", op_model},
      {"data", op_data},
      {"q", op_q},
      {"identify", op_identify},
      {"estimate", op_estimate},
      {"measure", op_measure},
      {"signature", op_signature},
      {"infer", op_infer},
      {"categorical", op_categorical},
      {"read-csv", op_read_csv},
      {"head", op_head},
      {"marginal-table", op_marginal_table},
      {"plot-univariate", op_marginal_table},
      {"latex", op_latex},
      {"dot", op_dot},
      {"simplify", op_simplify},
      {"formula", op_formula},
  };
  return table;
}

inline Value collection_item_check(Value v, const Expr& e) {
  if (!v.is_literal()) {
    throw EvalError("set elements and map keys must be constants, got " + v.type_name(), e.line, e.column);
  }
  return v;
}

}  // namespace detail

/// Operator names the evaluator dispatches on, besides `define` and `doc`.
inline std::vector<std::string> operator_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : detail::operators()) out.push_back(name);
  return out;
}

/// Documentation text for a bound symbol, as shown by `doc`.
inline std::string describe_symbol(const Environment& env, const std::string& name) {
  if (const Binding* b = env.find(name)) {
    return name + "\n  " + (b->doc ? *b->doc : std::string("(no documentation)")) + "\n";
  }
  if (name == "define" || name == "doc" || detail::operators().contains(name)) return name + "\n  built-in operator\n";
  throw EvalError("unbound symbol '" + name + "'");
}

/// Evaluates one expression, threading the environment through `define`s in
/// argument order. Evaluation always terminates: there are no user functions.
inline EvalResult eval_expr(const Environment& env, const Expr& e, const EvalOptions& options = {}) {
  auto at = [&](const EvalError& err) {
    return err.line() ? err : EvalError(err.what(), e.line, e.column);
  };
  switch (e.kind) {
    case Expr::Kind::constant:
      return {e.constant, env};
    case Expr::Kind::symbol: {
      const Binding* b = env.find(e.symbol);
      if (!b) {
        if (e.symbol == "define" || e.symbol == "doc" || detail::operators().contains(e.symbol)) {
          throw EvalError("operator '" + e.symbol + "' can only be used in call position", e.line, e.column);
        }
        throw EvalError("unbound symbol '" + e.symbol + "'", e.line, e.column);
      }
      return {b->value, env};
    }
    case Expr::Kind::vector:
    case Expr::Kind::set: {
      Environment current = env;
      std::vector<Value> items;
      for (const auto& x : e.items) {
        auto r = eval_expr(current, x, options);
        items.push_back(e.kind == Expr::Kind::set ? detail::collection_item_check(std::move(r.value), x)
                                                  : std::move(r.value));
        current = r.env;
      }
      return {e.kind == Expr::Kind::set ? Value::set(std::move(items)) : Value::vector(std::move(items)), current};
    }
    case Expr::Kind::map: {
      Environment current = env;
      std::vector<std::pair<Value, Value>> entries;
      for (std::size_t i = 0; i < e.items.size(); i += 2) {
        auto k = eval_expr(current, e.items[i], options);
        auto v = eval_expr(k.env, e.items[i + 1], options);
        entries.emplace_back(detail::collection_item_check(std::move(k.value), e.items[i]), std::move(v.value));
        current = v.env;
      }
      return {Value::map(std::move(entries)), current};
    }
    case Expr::Kind::list:
      break;
  }

  if (e.items.empty()) throw EvalError("empty application ()", e.line, e.column);
  const Expr& head = e.items.front();
  if (head.kind != Expr::Kind::symbol) throw EvalError("the head of an application must be an operator", e.line, e.column);

  if (head.symbol == "define") {
    if (e.items.size() < 3 || e.items.size() > 4) {
      throw EvalError("define: expected (define symbol docstring? value)", e.line, e.column);
    }
    const Expr& name = e.items[1];
    if (name.kind != Expr::Kind::symbol) throw EvalError("define: the name must be a symbol", name.line, name.column);
    if (name.symbol == "define" || name.symbol == "doc" || detail::operators().contains(name.symbol)) {
      throw EvalError("define: cannot redefine operator '" + name.symbol + "'", name.line, name.column);
    }
    std::optional<std::string> doc;
    if (e.items.size() == 4) {
      const Expr& d = e.items[2];
      const auto* text = d.kind == Expr::Kind::constant ? d.constant.get_if<std::string>() : nullptr;
      if (!text) throw EvalError("define: the docstring must be a string literal", d.line, d.column);
      doc = *text;
    }
    if (env.find(name.symbol)) {
      throw EvalError("cannot redefine '" + name.symbol + "': define cannot rebind symbols", name.line, name.column);
    }
    auto r = eval_expr(env, e.items.back(), options);
    return {r.value, r.env.extend(name.symbol, r.value, std::move(doc))};
  }

  if (head.symbol == "doc") {
    if (e.items.size() != 2 || e.items[1].kind != Expr::Kind::symbol) {
      throw EvalError("doc: expected (doc symbol)", e.line, e.column);
    }
    try {
      return {Text{describe_symbol(env, e.items[1].symbol)}, env};
    } catch (const EvalError& err) {
      throw at(err);
    }
  }

  const auto& table = detail::operators();
  auto op = table.find(head.symbol);
  if (op == table.end()) {
    if (env.find(head.symbol)) {
      throw EvalError("'" + head.symbol + "' is not an operator", head.line, head.column);
    }
    throw EvalError("unknown operator '" + head.symbol + "'", head.line, head.column);
  }

  Environment current = env;
  std::vector<Value> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    auto r = eval_expr(current, e.items[i], options);
    args.push_back(std::move(r.value));
    current = r.env;
  }
  try {
    return {op->second(args, detail::Context{options}), current};
  } catch (const PositionedError& err) {
    if (err.line()) throw;
    throw EvalError(err.what(), e.line, e.column);
  } catch (const Error& err) {
    throw EvalError(err.what(), e.line, e.column);
  }
}

}  // namespace whittemore
