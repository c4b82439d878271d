#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "whittemore/error.hpp"
#include "whittemore/model.hpp"
#include "whittemore/variable.hpp"

namespace whittemore {

/// The probability-distribution protocol. Estimation only ever talks to a
/// distribution through this interface.
class Distribution {
 public:
  virtual ~Distribution() = default;

  /// The variables the distribution is a joint over.
  virtual VarSet variables() const = 0;

  /// Values a variable ranges over, in ascending order.
  virtual std::vector<Category> support(const Variable& v) const = 0;

  /// Probability of an event; unmentioned variables are marginalized.
  virtual double measure(const Event& e) const = 0;

  virtual std::string describe() const { return "#<distribution " + format_vars(variables()) + ">"; }
};

using DistributionPtr = std::shared_ptr<const Distribution>;

inline Data signature(const Distribution& d) { return Data{d.variables()}; }

/// A joint over finitely many categorical outcomes. Cell masses are stored
/// unnormalized (sample counts, or weights) so that ratios of counts are
/// computed with a single rounding.
class CategoricalDistribution final : public Distribution {
 public:
  using Cell = std::vector<Category>;

  /// Builds from weighted cells over `vars` (in the given column order).
  static CategoricalDistribution from_weights(std::vector<Variable> vars, const std::vector<std::pair<Cell, double>>& cells) {
    CategoricalDistribution d;
    d.order_ = std::move(vars);
    for (std::size_t i = 0; i < d.order_.size(); ++i) {
      if (!d.index_.emplace(d.order_[i], i).second) {
        throw EstimationError("variable :" + d.order_[i].name() + " appears twice");
      }
      d.support_[d.order_[i]];
    }
    for (const auto& [cell, w] : cells) {
      if (cell.size() != d.order_.size()) throw EstimationError("cell width does not match the variables");
      if (!(w >= 0) || std::isinf(w)) throw EstimationError("cell weights must be finite and non-negative");
      d.cells_[cell] += w;
      d.total_ += w;
      for (std::size_t i = 0; i < cell.size(); ++i) d.support_[d.order_[i]].insert(cell[i]);
    }
    if (!(d.total_ > 0)) throw EstimationError("a distribution needs positive total weight");
    return d;
  }

  VarSet variables() const override { return VarSet(order_.begin(), order_.end()); }

  const std::vector<Variable>& columns() const noexcept { return order_; }

  std::vector<Category> support(const Variable& v) const override {
    auto it = support_.find(v);
    if (it == support_.end()) throw EstimationError("unknown variable :" + v.name());
    return {it->second.begin(), it->second.end()};
  }

  double measure(const Event& e) const override {
    std::vector<std::pair<std::size_t, const Category*>> probe;
    probe.reserve(e.size());
    for (const auto& [v, value] : e) {
      auto it = index_.find(v);
      if (it == index_.end()) throw EstimationError("unknown variable :" + v.name());
      probe.emplace_back(it->second, &value);
    }
    double mass = 0;
    for (const auto& [cell, w] : cells_) {
      bool match = true;
      for (const auto& [i, value] : probe) {
        if (cell[i] != *value) {
          match = false;
          break;
        }
      }
      if (match) mass += w;
    }
    return mass / total_;
  }

  /// Normalized weight of each stored cell, in cell order.
  std::vector<std::pair<Event, double>> cells() const {
    std::vector<std::pair<Event, double>> out;
    for (const auto& [cell, w] : cells_) {
      Event e;
      for (std::size_t i = 0; i < cell.size(); ++i) e.emplace(order_[i], cell[i]);
      out.emplace_back(std::move(e), w / total_);
    }
    return out;
  }

  std::string describe() const override {
    std::string s = "#<categorical " + format_vars(variables()) + " {";
    bool first = true;
    for (const auto& [e, w] : cells()) {
      if (!first) s += ", ";
      first = false;
      s += "{";
      bool inner_first = true;
      for (const auto& [v, value] : e) {
        if (!inner_first) s += ", ";
        inner_first = false;
        s += ":" + v.name() + " " + category_literal(value);
      }
      s += "} " + format_double(w);
    }
    return s + "}>";
  }

 private:
  CategoricalDistribution() = default;

  std::vector<Variable> order_;
  std::map<Variable, std::size_t> index_;
  std::map<Cell, double> cells_;
  std::map<Variable, std::set<Category>> support_;
  double total_ = 0;
};

/// Maximum-likelihood empirical joint of the samples: weight(e) = count(e) / N.
inline CategoricalDistribution categorical(std::span<const Event> samples) {
  if (samples.empty()) throw EstimationError("categorical needs at least one sample");
  const VarSet vars = keys(samples.front());
  if (vars.empty()) throw EstimationError("samples must assign at least one variable");
  std::map<CategoricalDistribution::Cell, double> counts;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (keys(samples[i]) != vars) {
      throw EstimationError("sample " + std::to_string(i) + " assigns " + format_vars(keys(samples[i])) +
                            ", expected " + format_vars(vars));
    }
    CategoricalDistribution::Cell cell;
    for (const auto& [_, value] : samples[i]) cell.push_back(value);
    counts[cell] += 1;
  }
  return CategoricalDistribution::from_weights(std::vector<Variable>(vars.begin(), vars.end()),
                                               {counts.begin(), counts.end()});
}

}  // namespace whittemore
