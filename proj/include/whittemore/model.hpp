#pragma once

#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "whittemore/error.hpp"
#include "whittemore/variable.hpp"

namespace whittemore {

/// A semi-Markovian causal diagram: a DAG over endogenous variables plus
/// confounding sets, each marking variables whose background noise is
/// dependent. A confounding set of size k stands for its k-choose-2
/// bidirected edges.
class Model {
 public:
  using Dag = std::map<Variable, VarSet>;
  using Confounding = std::set<VarSet>;

  const Dag& dag() const noexcept { return dag_; }
  const Confounding& confounding() const noexcept { return confounding_; }

  VarSet vertices() const {
    VarSet out;
    for (const auto& [v, _] : dag_) out.insert(v);
    return out;
  }

  std::size_t size() const noexcept { return dag_.size(); }

  bool contains(const Variable& v) const { return dag_.contains(v); }

  const VarSet& parents(const Variable& v) const {
    auto it = dag_.find(v);
    if (it == dag_.end()) {
      throw ModelError(ModelError::Kind::unknown_variable, "unknown variable :" + v.name());
    }
    return it->second;
  }

  /// Pairwise expansion of the confounding sets, each pair ordered (a < b).
  std::set<std::pair<Variable, Variable>> bidirected_edges() const {
    std::set<std::pair<Variable, Variable>> out;
    for (const auto& group : confounding_) {
      for (auto a = group.begin(); a != group.end(); ++a) {
        for (auto b = std::next(a); b != group.end(); ++b) out.emplace(*a, *b);
      }
    }
    return out;
  }

  bool confounded(const Variable& a, const Variable& b) const {
    for (const auto& group : confounding_) {
      if (group.contains(a) && group.contains(b) && a != b) return true;
    }
    return false;
  }

  friend bool operator==(const Model&, const Model&) = default;

 private:
  friend Model make_model(const std::vector<std::pair<Variable, std::vector<Variable>>>& dag,
                          const std::vector<std::vector<Variable>>& confounding);
  friend Model subgraph(const Model& m, const VarSet& s);
  friend Model latent_projection(const Model& m, const VarSet& observed);

  Model(Dag dag, Confounding confounding) : dag_(std::move(dag)), confounding_(std::move(confounding)) {}

  Dag dag_;
  Confounding confounding_;
};

/// Signature of a probability function: the variables whose joint is known.
struct Data {
  VarSet joint;

  friend bool operator==(const Data&, const Data&) = default;
};

inline Data make_data(VarSet joint) {
  if (joint.empty()) throw ModelError(ModelError::Kind::empty_data, "data signature must name at least one variable");
  return Data{std::move(joint)};
}

namespace detail {

inline void require_vertices(const Model& m, const VarSet& s) {
  for (const auto& v : s) {
    if (!m.contains(v)) throw ModelError(ModelError::Kind::unknown_variable, "unknown variable :" + v.name());
  }
}

}  // namespace detail

/// Lexicographic-tie-broken topological order (Kahn's algorithm with an
/// ordered ready set).
inline std::vector<Variable> topological_order(const Model& m) {
  std::map<Variable, std::size_t> indegree;
  std::map<Variable, std::vector<Variable>> children;
  for (const auto& [v, ps] : m.dag()) {
    indegree[v] += ps.size();
    for (const auto& p : ps) children[p].push_back(v);
  }
  std::set<Variable> ready;
  for (const auto& [v, d] : indegree) {
    if (d == 0) ready.insert(v);
  }
  std::vector<Variable> order;
  while (!ready.empty()) {
    Variable v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (const auto& c : children[v]) {
      if (--indegree[c] == 0) ready.insert(c);
    }
  }
  return order;
}

/// Validates raw diagram input. Parent order is kept by the caller's syntax only;
/// internally parents are a set.
inline Model make_model(const std::vector<std::pair<Variable, std::vector<Variable>>>& dag,
                        const std::vector<std::vector<Variable>>& confounding) {
  Model::Dag out;
  for (const auto& [v, parents] : dag) {
    VarSet ps;
    for (const auto& p : parents) {
      if (!ps.insert(p).second) {
        throw ModelError(ModelError::Kind::duplicate_parent,
                         "duplicate parent :" + p.name() + " of :" + v.name());
      }
    }
    if (!out.emplace(v, std::move(ps)).second) {
      throw ModelError(ModelError::Kind::duplicate_vertex, "variable :" + v.name() + " is declared twice");
    }
  }
  for (const auto& [v, ps] : out) {
    for (const auto& p : ps) {
      if (!out.contains(p)) {
        throw ModelError(ModelError::Kind::unknown_parent,
                         "parent :" + p.name() + " of :" + v.name() + " is not a variable of the model");
      }
    }
  }
  Model::Confounding conf;
  for (const auto& group : confounding) {
    VarSet g(group.begin(), group.end());
    for (const auto& v : g) {
      if (!out.contains(v)) {
        throw ModelError(ModelError::Kind::unknown_confounded,
                         "confounded variable :" + v.name() + " is not a variable of the model");
      }
    }
    if (g.size() < 2) {
      throw ModelError(ModelError::Kind::confounding_too_small,
                       "confounding set " + format_vars(g) + " needs at least two variables");
    }
    conf.insert(std::move(g));
  }
  Model m(std::move(out), std::move(conf));
  if (topological_order(m).size() != m.size()) {
    throw ModelError(ModelError::Kind::cycle, "the model's directed edges contain a cycle");
  }
  return m;
}

/// `s` plus every vertex with a directed path into `s`.
inline VarSet ancestors(const Model& m, const VarSet& s) {
  detail::require_vertices(m, s);
  VarSet out = s;
  std::deque<Variable> todo(s.begin(), s.end());
  while (!todo.empty()) {
    Variable v = todo.front();
    todo.pop_front();
    for (const auto& p : m.parents(v)) {
      if (out.insert(p).second) todo.push_back(p);
    }
  }
  return out;
}

/// Ancestors of `s` in the graph with every edge into `cut` removed.
inline VarSet ancestors_avoiding(const Model& m, const VarSet& s, const VarSet& cut) {
  detail::require_vertices(m, s);
  VarSet out = s;
  std::deque<Variable> todo(s.begin(), s.end());
  while (!todo.empty()) {
    Variable v = todo.front();
    todo.pop_front();
    if (cut.contains(v)) continue;
    for (const auto& p : m.parents(v)) {
      if (out.insert(p).second) todo.push_back(p);
    }
  }
  return out;
}

/// Partition of the vertices into maximal bidirected-connected sets.
inline std::set<VarSet> c_components(const Model& m) {
  std::vector<Variable> verts;
  std::map<Variable, std::size_t> index;
  for (const auto& [v, _] : m.dag()) {
    index.emplace(v, verts.size());
    verts.push_back(v);
  }
  std::vector<std::size_t> root(verts.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  for (const auto& [a, b] : m.bidirected_edges()) root[find(index.at(a))] = find(index.at(b));
  std::map<std::size_t, VarSet> groups;
  for (std::size_t i = 0; i < verts.size(); ++i) groups[find(i)].insert(verts[i]);
  std::set<VarSet> out;
  for (auto& [_, g] : groups) out.insert(std::move(g));
  return out;
}

/// Induced subgraph over `s`.
inline Model subgraph(const Model& m, const VarSet& s) {
  detail::require_vertices(m, s);
  Model::Dag dag;
  for (const auto& v : s) dag.emplace(v, intersect(m.parents(v), s));
  Model::Confounding conf;
  for (const auto& group : m.confounding()) {
    VarSet g = intersect(group, s);
    if (g.size() >= 2) conf.insert(std::move(g));
  }
  return Model(std::move(dag), std::move(conf));
}

/// Projects out the vertices not in `observed`. A directed edge a -> b is kept
/// when a directed path from a to b runs through unobserved vertices only; a
/// bidirected edge a <-> b when a and b are reached, by such directed paths,
/// from a common unobserved vertex or from the two ends of a bidirected edge.
inline Model latent_projection(const Model& m, const VarSet& observed) {
  detail::require_vertices(m, observed);
  const VarSet hidden = minus(m.vertices(), observed);

  // Directed parents of each observed vertex through hidden intermediates, and
  // the "sources": the vertex itself plus hidden vertices with a hidden-only
  // directed path into it.
  std::map<Variable, VarSet> parents;
  std::map<Variable, VarSet> sources;
  for (const auto& v : observed) {
    VarSet& ps = parents[v];
    VarSet& src = sources[v];
    src.insert(v);
    std::deque<Variable> todo{v};
    VarSet seen{v};
    while (!todo.empty()) {
      Variable u = todo.front();
      todo.pop_front();
      for (const auto& p : m.parents(u)) {
        if (observed.contains(p)) {
          ps.insert(p);
        } else if (seen.insert(p).second) {
          src.insert(p);
          todo.push_back(p);
        }
      }
    }
  }

  Model::Dag dag(parents.begin(), parents.end());
  Model::Confounding conf;
  for (const auto& group : m.confounding()) {
    VarSet g = intersect(group, observed);
    if (g.size() >= 2) conf.insert(std::move(g));
  }
  auto covered = [&](const Variable& a, const Variable& b) {
    for (const auto& g : conf) {
      if (g.contains(a) && g.contains(b)) return true;
    }
    return false;
  };
  for (auto a = observed.begin(); a != observed.end(); ++a) {
    for (auto b = std::next(a); b != observed.end(); ++b) {
      const VarSet& sa = sources.at(*a);
      const VarSet& sb = sources.at(*b);
      bool linked = !intersect(intersect(sa, sb), hidden).empty();
      for (auto u = sa.begin(); !linked && u != sa.end(); ++u) {
        for (const auto& w : sb) {
          if (m.confounded(*u, w)) {
            linked = true;
            break;
          }
        }
      }
      if (linked && !covered(*a, *b)) conf.insert(VarSet{*a, *b});
    }
  }
  return Model(std::move(dag), std::move(conf));
}

}  // namespace whittemore
