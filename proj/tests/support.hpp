#pragma once

#include <cmath>
#include <cstring>
#include <limits>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "whittemore/whittemore.hpp"

namespace whittemore {

// Readable test failure messages.
inline void PrintTo(const Form& f, std::ostream* os) { *os << format_form(f); }
inline void PrintTo(const Model& m, std::ostream* os) { *os << print_value(m); }
inline void PrintTo(const Formula& f, std::ostream* os) { *os << print_value(f); }
inline void PrintTo(const Value& v, std::ostream* os) { *os << print_value(v); }

}  // namespace whittemore

namespace fixtures {

namespace wt = whittemore;

inline const char* front_door_text = R"wt((define front-door
  (model
    {:x []
     :z [:x]
     :y [:z]}
    #{:x :y})))wt";

inline const char* concomitant_text = R"wt((define concomitant-example
  "Figure 1 (f) from (Shpitser 2008)"
  (model
    {:y [:x :z_1 :z_2]
     :z_2 [:z_1]
     :z_1 [:x]
     :x []}
    #{:y :z_1}
    #{:x :z_2})))wt";

inline const char* charig_text = R"wt((define charig1986
  (model
    {:size []
     :treatment [:size]
     :success [:treatment :size]})))wt";

inline wt::Model front_door() {
  using wt::operator""_v;
  return wt::make_model({{"x"_v, {}}, {"z"_v, {"x"_v}}, {"y"_v, {"z"_v}}}, {{"x"_v, "y"_v}});
}

inline wt::Model concomitant() {
  using wt::operator""_v;
  return wt::make_model({{"y"_v, {"x"_v, "z_1"_v, "z_2"_v}}, {"z_2"_v, {"z_1"_v}}, {"z_1"_v, {"x"_v}}, {"x"_v, {}}},
                        {{"y"_v, "z_1"_v}, {"x"_v, "z_2"_v}});
}

inline wt::Model charig1986() {
  using wt::operator""_v;
  return wt::make_model(
      {{"size"_v, {}}, {"treatment"_v, {"size"_v}}, {"success"_v, {"treatment"_v, "size"_v}}}, {});
}

struct Stratum {
  const char* treatment;
  const char* size;
  int successes;
  int total;
};

// Success counts per (treatment, size), recovered from the printed ratios.
inline const std::vector<Stratum> kidney_strata{
    {"surgery", "small", 81, 87},
    {"surgery", "large", 192, 263},
    {"nephrolithotomy", "small", 234, 270},
    {"nephrolithotomy", "large", 55, 80},
};

inline wt::Dataset kidney_dataset() {
  using wt::operator""_v;
  wt::Dataset d{{"treatment"_v, "size"_v, "success"_v}, {}};
  for (const auto& s : kidney_strata) {
    for (int i = 0; i < s.total; ++i) {
      d.rows.push_back({{"treatment"_v, std::string(s.treatment)},
                        {"size"_v, std::string(s.size)},
                        {"success"_v, std::string(i < s.successes ? "yes" : "no")}});
    }
  }
  return d;
}

// Pearl's Table 3.1 as 4000 samples: (x, z, count, count with y = 1).
inline std::vector<wt::Event> smoking_samples() {
  using wt::operator""_v;
  struct Row {
    std::int64_t x, z;
    int n, y1;
  };
  static const Row rows[] = {{0, 0, 1900, 190}, {1, 0, 100, 90}, {0, 1, 100, 5}, {1, 1, 1900, 1615}};
  std::vector<wt::Event> out;
  for (const auto& r : rows) {
    for (int i = 0; i < r.n; ++i) {
      out.push_back({{"x"_v, r.x}, {"z"_v, r.z}, {"y"_v, std::int64_t{i < r.y1 ? 1 : 0}}});
    }
  }
  return out;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Strictly positive random joint over binary variables.
inline wt::CategoricalDistribution random_joint(std::mt19937_64& rng, const std::vector<wt::Variable>& vars) {
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  std::vector<std::pair<wt::CategoricalDistribution::Cell, double>> cells;
  std::vector<double> raw;
  double total = 0;
  for (std::size_t k = 0; k < (std::size_t{1} << vars.size()); ++k) {
    wt::CategoricalDistribution::Cell cell;
    for (std::size_t i = 0; i < vars.size(); ++i) cell.push_back(std::int64_t((k >> i) & 1));
    raw.push_back(weight(rng));
    total += raw.back();
    cells.emplace_back(cell, 0);
  }
  for (std::size_t k = 0; k < cells.size(); ++k) cells[k].second = raw[k] / total;
  return wt::CategoricalDistribution::from_weights(vars, cells);
}

// Random well-formed forms over `vars`.
class FormGenerator {
 public:
  FormGenerator(std::mt19937_64& rng, std::vector<wt::Variable> vars) : rng_(rng), vars_(std::move(vars)) {}

  wt::Form operator()(int depth = 3) {
    const int choice = depth <= 0 ? 0 : pick(6);
    switch (choice) {
      case 0: return p_form();
      case 1: {
        wt::Form body = (*this)(depth - 1);
        auto free = wt::free_variables(body);
        return wt::sum(body, flip() && !free.empty() ? subset_of(free, true) : subset_of(all(), false));
      }
      case 2: {
        std::vector<wt::Form> factors;
        const int n = pick(3);
        for (int i = 0; i < n; ++i) factors.push_back((*this)(depth - 1));
        return wt::product(std::move(factors));
      }
      case 3: return wt::fraction((*this)(depth - 1), (*this)(depth - 1));
      case 4: return conditional();
      default: return marginal();
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool flip() { return pick(2) == 1; }

  wt::VarSet all() const { return wt::VarSet(vars_.begin(), vars_.end()); }

  wt::VarSet subset_of(const wt::VarSet& s, bool nonempty) {
    while (true) {
      wt::VarSet out;
      for (const auto& v : s) {
        if (flip()) out.insert(v);
      }
      if (!nonempty || !out.empty() || s.empty()) return out;
    }
  }

  wt::Form p_form() {
    auto a = subset_of(all(), true);
    return wt::prob(a, flip() ? subset_of(wt::minus(all(), a), false) : wt::VarSet{});
  }

  // Sum_s P(A).
  wt::Form marginal() {
    auto a = subset_of(all(), true);
    return wt::sum(wt::prob(a), subset_of(a, false));
  }

  // Sum_{W \ (A u B)} P(W) / Sum_{W \ B} P(W).
  wt::Form conditional() {
    auto w = subset_of(all(), true);
    auto b = subset_of(w, false);
    auto a = subset_of(wt::minus(w, b), true);
    return wt::fraction(wt::sum(wt::prob(w), wt::minus(w, wt::unite(a, b))), wt::sum(wt::prob(w), wt::minus(w, b)));
  }

  std::mt19937_64& rng_;
  std::vector<wt::Variable> vars_;
};

// Random literal values of every kind the reader can spell.
class LiteralGenerator {
 public:
  explicit LiteralGenerator(std::mt19937_64& rng) : rng_(rng) {}

  wt::Value operator()(int depth = 3) {
    const int choice = pick(depth > 0 ? 9 : 6);
    switch (choice) {
      case 0: return wt::Nil{};
      case 1: return pick(2) == 1;
      case 2: return integer();
      case 3: return real();
      case 4: return text();
      case 5: return wt::Keyword{name()};
      case 6: {
        std::vector<wt::Value> items;
        for (int i = pick(4); i > 0; --i) items.push_back((*this)(depth - 1));
        return wt::Value::vector(std::move(items));
      }
      case 7: {
        std::vector<wt::Value> items;
        for (int i = pick(4); i > 0; --i) items.push_back((*this)(depth - 1));
        return wt::Value::set(std::move(items));
      }
      default: {
        std::vector<std::pair<wt::Value, wt::Value>> entries;
        for (int i = pick(4); i > 0; --i) entries.emplace_back((*this)(depth - 1), (*this)(depth - 1));
        return wt::Value::map(std::move(entries));
      }
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::int64_t integer() {
    switch (pick(4)) {
      case 0: return std::numeric_limits<std::int64_t>::min() + pick(2);
      case 1: return std::numeric_limits<std::int64_t>::max() - pick(2);
      case 2: return pick(21) - 10;
      default: return static_cast<std::int64_t>(rng_());
    }
  }

  double real() {
    switch (pick(6)) {
      case 0: return std::numeric_limits<double>::quiet_NaN();
      case 1: return pick(2) ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      case 2: return std::uniform_real_distribution<double>(-1, 1)(rng_);
      case 3: return static_cast<double>(pick(2001) - 1000);
      default: {
        double d;
        do {
          std::uint64_t bits = rng_();
          std::memcpy(&d, &bits, sizeof d);
        } while (!std::isfinite(d));
        return d;
      }
    }
  }

  std::string text() {
    static const std::string alphabet = "ab z09\"\\\n\t\r;,#{}()[]:\xc3\xa9";
    std::string s;
    for (int i = pick(8); i > 0; --i) s += alphabet[static_cast<std::size_t>(pick(static_cast<int>(alphabet.size())))];
    return s;
  }

  std::string name() {
    static const std::string first = "abcxyz";
    static const std::string rest = "abxyz019_-?!*";
    std::string s(1, first[static_cast<std::size_t>(pick(static_cast<int>(first.size())))]);
    for (int i = pick(5); i > 0; --i) s += rest[static_cast<std::size_t>(pick(static_cast<int>(rest.size())))];
    return s;
  }

  std::mt19937_64& rng_;
};

inline wt::Value eval_text(const std::string& text) {
  auto last = wt::last_value(text);
  if (!last) throw wt::Error("no value");
  return *last;
}

}  // namespace fixtures
