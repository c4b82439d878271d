#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "whittemore/distribution.hpp"
#include "whittemore/form.hpp"
#include "whittemore/identify.hpp"
#include "whittemore/model.hpp"
#include "whittemore/query.hpp"

namespace whittemore {

struct Keyword {
  std::string name;

  friend bool operator==(const Keyword&, const Keyword&) = default;
  friend std::strong_ordering operator<=>(const Keyword& a, const Keyword& b) { return a.name.compare(b.name) <=> 0; }
};

struct Nil {
  friend bool operator==(Nil, Nil) { return true; }
};

struct VectorValue;
struct MapValue;
struct SetValue;

/// Rows read from a CSV file, with their column order.
struct Dataset {
  std::vector<Variable> columns;
  std::vector<Event> rows;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Preformatted text, printed verbatim (tables, renderings).
struct Text {
  std::string text;

  friend bool operator==(const Text&, const Text&) = default;
};

/// A runtime value of the language.
class Value {
 public:
  using Storage =
      std::variant<Nil, bool, std::int64_t, double, std::string, Keyword, std::shared_ptr<const VectorValue>,
                   std::shared_ptr<const MapValue>, std::shared_ptr<const SetValue>, Model, Data, Query, Formula,
                   Fail, DistributionPtr, Dataset, Text>;

  Value() = default;
  template <class T>
    requires std::is_constructible_v<Storage, T&&>
  Value(T&& v) : storage_(std::forward<T>(v)) {}  // NOLINT(google-explicit-constructor)

  static Value vector(std::vector<Value> items);
  static Value map(std::vector<std::pair<Value, Value>> entries);
  static Value set(std::vector<Value> items);

  const Storage& storage() const noexcept { return storage_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&storage_);
  }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(storage_);
  }

  const std::vector<Value>* as_vector() const;
  const std::vector<std::pair<Value, Value>>* as_map() const;
  const std::vector<Value>* as_set() const;

  /// Atoms and (nested) collections of atoms, i.e. what literal syntax can spell.
  bool is_literal() const;

  std::string type_name() const;

 private:
  Storage storage_;
};

struct VectorValue {
  std::vector<Value> items;
};

// Entries keep their insertion order; keys are unique.
struct MapValue {
  std::vector<std::pair<Value, Value>> entries;
};

// Items are sorted by `compare` and unique.
struct SetValue {
  std::vector<Value> items;
};

/// Total order on literal values (kind first, then content). Maps compare as
/// their key-sorted entries, so entry order is irrelevant.
std::strong_ordering compare(const Value& a, const Value& b);

bool operator==(const Value& a, const Value& b);

namespace detail {

inline bool same_items(const std::vector<Value>& x, const std::vector<Value>& y) {
  return std::equal(x.begin(), x.end(), y.begin(), y.end());
}

}  // namespace detail

/// Structural equality. Maps ignore entry order; distributions compare by identity.
inline bool operator==(const Value& a, const Value& b) {
  const auto& sa = a.storage();
  const auto& sb = b.storage();
  if (sa.index() != sb.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(sb);
        if constexpr (std::is_same_v<T, std::shared_ptr<const VectorValue>> ||
                      std::is_same_v<T, std::shared_ptr<const SetValue>>) {
          return detail::same_items(x->items, y->items);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const MapValue>>) {
          if (x->entries.size() != y->entries.size()) return false;
          return std::all_of(x->entries.begin(), x->entries.end(), [&](const auto& e) {
            return std::any_of(y->entries.begin(), y->entries.end(),
                               [&](const auto& f) { return e.first == f.first && e.second == f.second; });
          });
        } else if constexpr (std::is_same_v<T, double>) {
          return x == y || (x != x && y != y);
        } else {
          return x == y;
        }
      },
      sa);
}

namespace detail {

inline std::vector<std::pair<Value, Value>> sorted_entries(const std::vector<std::pair<Value, Value>>& entries) {
  auto out = entries;
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
  return out;
}

template <class T>
std::strong_ordering three_way(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, double>) {
    // NaN sorts after every number and equal to itself.
    if (a != a || b != b) return (a != a) <=> (b != b);
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  } else {
    return a <=> b;
  }
}

}  // namespace detail

inline std::strong_ordering compare(const Value& a, const Value& b) {
  const auto& sa = a.storage();
  const auto& sb = b.storage();
  if (sa.index() != sb.index()) return sa.index() <=> sb.index();
  auto items = [](const std::vector<Value>& x, const std::vector<Value>& y) {
    return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end(),
                                                  [](const Value& p, const Value& q) { return compare(p, q); });
  };
  return std::visit(
      [&](const auto& x) -> std::strong_ordering {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(sb);
        if constexpr (std::is_same_v<T, Nil>) {
          return std::strong_ordering::equal;
        } else if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, std::int64_t> || std::is_same_v<T, double> ||
                             std::is_same_v<T, std::string> || std::is_same_v<T, Keyword>) {
          return detail::three_way(x, y);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const VectorValue>> ||
                             std::is_same_v<T, std::shared_ptr<const SetValue>>) {
          return items(x->items, y->items);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const MapValue>>) {
          auto ex = detail::sorted_entries(x->entries);
          auto ey = detail::sorted_entries(y->entries);
          return std::lexicographical_compare_three_way(
              ex.begin(), ex.end(), ey.begin(), ey.end(), [](const auto& p, const auto& q) {
                if (auto c = compare(p.first, q.first); c != 0) return c;
                return compare(p.second, q.second);
              });
        } else {
          // Non-literal values have no meaningful order; only identity-equal ones tie.
          return &x == &y ? std::strong_ordering::equal : std::strong_ordering::less;
        }
      },
      sa);
}

inline Value Value::vector(std::vector<Value> items) {
  return Value(std::make_shared<const VectorValue>(VectorValue{std::move(items)}));
}

inline Value Value::map(std::vector<std::pair<Value, Value>> entries) {
  std::vector<std::pair<Value, Value>> unique;
  for (auto& [k, v] : entries) {
    auto it = std::find_if(unique.begin(), unique.end(), [&](const auto& e) { return compare(e.first, k) == 0; });
    if (it == unique.end()) {
      unique.emplace_back(std::move(k), std::move(v));
    } else {
      it->second = std::move(v);
    }
  }
  return Value(std::make_shared<const MapValue>(MapValue{std::move(unique)}));
}

inline Value Value::set(std::vector<Value> items) {
  std::sort(items.begin(), items.end(), [](const Value& x, const Value& y) { return compare(x, y) < 0; });
  items.erase(std::unique(items.begin(), items.end(), [](const Value& x, const Value& y) { return compare(x, y) == 0; }),
              items.end());
  return Value(std::make_shared<const SetValue>(SetValue{std::move(items)}));
}

inline const std::vector<Value>* Value::as_vector() const {
  const auto* p = get_if<std::shared_ptr<const VectorValue>>();
  return p ? &(*p)->items : nullptr;
}

inline const std::vector<std::pair<Value, Value>>* Value::as_map() const {
  const auto* p = get_if<std::shared_ptr<const MapValue>>();
  return p ? &(*p)->entries : nullptr;
}

inline const std::vector<Value>* Value::as_set() const {
  const auto* p = get_if<std::shared_ptr<const SetValue>>();
  return p ? &(*p)->items : nullptr;
}

inline bool Value::is_literal() const {
  if (storage_.index() <= 5) return true;
  auto all = [](const std::vector<Value>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](const Value& x) { return x.is_literal(); });
  };
  if (const auto* v = as_vector()) return all(*v);
  if (const auto* s = as_set()) return all(*s);
  if (const auto* m = as_map()) {
    return std::all_of(m->begin(), m->end(), [](const auto& e) { return e.first.is_literal() && e.second.is_literal(); });
  }
  return false;
}

inline std::string Value::type_name() const {
  static constexpr const char* names[] = {"nil",   "boolean", "integer", "float",   "string", "keyword",
                                          "vector", "map",     "set",     "model",   "data",   "query",
                                          "formula", "fail",   "distribution", "dataset", "text"};
  return names[storage_.index()];
}

inline Value to_value(const Category& c) {
  return std::visit([](const auto& x) { return Value(x); }, c);
}

inline Value to_value(const Variable& v) { return Keyword{v.name()}; }

inline Value to_value(const VarSet& vars, bool as_set = true) {
  std::vector<Value> items;
  for (const auto& v : vars) items.push_back(to_value(v));
  return as_set ? Value::set(std::move(items)) : Value::vector(std::move(items));
}

inline Value to_value(const Event& e) {
  std::vector<std::pair<Value, Value>> entries;
  for (const auto& [k, v] : e) entries.emplace_back(to_value(k), to_value(v));
  return Value::map(std::move(entries));
}

}  // namespace whittemore
