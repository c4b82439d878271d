#include <gtest/gtest.h>

#include "support.hpp"
#include "whittemore/testing/oracle.hpp"

namespace wt = whittemore;
namespace wtt = whittemore::testing;
using wt::operator""_v;

namespace {

double total_mass(const wt::CategoricalDistribution& d) {
  std::vector<wt::Variable> vars;
  for (const auto& v : d.variables()) vars.push_back(v);
  double total = 0;
  std::vector<std::size_t> digit(vars.size(), 0);
  while (true) {
    wt::Event e;
    for (std::size_t i = 0; i < vars.size(); ++i) e.emplace(vars[i], d.support(vars[i])[digit[i]]);
    total += d.measure(e);
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++digit[i] < d.support(vars[i]).size()) break;
      digit[i] = 0;
    }
    if (i == vars.size()) break;
  }
  return total;
}

wt::Event bits(std::initializer_list<std::pair<const char*, std::int64_t>> kv) {
  wt::Event e;
  for (const auto& [k, v] : kv) e.emplace(wt::Variable(k), v);
  return e;
}

}  // namespace

TEST(Oracle, ChainWithUniformRoot) {
  wtt::DiscreteSCM s{wt::make_model({{"a"_v, {}}, {"b"_v, {"a"_v}}}, {}), {}, {}, {}};
  s.noise["u"] = {0.5, 0.5};
  s.reads["a"_v] = {"u"};
  s.mechanisms["a"_v] = [](const wt::Event&, const wtt::NoiseValues& n) { return wt::Category{std::int64_t{n.at("u")}}; };
  s.mechanisms["b"_v] = [](const wt::Event& p, const wtt::NoiseValues&) { return p.at("a"_v); };
  auto d = wtt::exact_joint(s);
  EXPECT_EQ(d.measure(bits({{"a", 0}, {"b", 0}})), 0.5);
  EXPECT_EQ(d.measure(bits({{"a", 1}, {"b", 1}})), 0.5);
  EXPECT_EQ(d.measure(bits({{"a", 0}, {"b", 1}})), 0.0);
  EXPECT_EQ(d.support("a"_v).size(), 2u);
}

TEST(Oracle, SmokingJoint) {
  auto d = wtt::exact_joint(wtt::smoking_scm());
  EXPECT_NEAR(d.measure(bits({{"x", 1}, {"y", 1}})) / d.measure(bits({{"x", 1}})), 0.8525, 1e-12);
  EXPECT_NEAR(d.measure(bits({{"x", 0}, {"y", 1}})) / d.measure(bits({{"x", 0}})), 0.0975, 1e-12);
  EXPECT_NEAR(d.measure(bits({{"x", 1}})), 0.5, 1e-12);
}

TEST(Oracle, SmokingInterventions) {
  auto s = wtt::smoking_scm();
  EXPECT_NEAR(wtt::exact_joint(wtt::intervene(s, bits({{"x", 0}}))).measure(bits({{"y", 1}})), 0.4975, 1e-12);
  EXPECT_NEAR(wtt::exact_joint(wtt::intervene(s, bits({{"x", 1}}))).measure(bits({{"y", 1}})), 0.4525, 1e-12);
}

TEST(Oracle, RandomJointsSumToOne) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto s = wtt::random_scm(seed, 5, 0.3);
    EXPECT_NEAR(total_mass(wtt::exact_joint(s)), 1.0, 1e-12) << seed;
  }
}

TEST(Oracle, InterveningOnARootIsConditioning) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto s = wtt::random_scm(seed, 4, 0.0);
    auto joint = wtt::exact_joint(s);
    for (const auto& [v, parents] : s.model.dag()) {
      if (!parents.empty()) continue;
      for (const auto& [w, _] : s.model.dag()) {
        if (w == v) continue;
        for (std::int64_t x : {0, 1}) {
          const wt::Event cause{{v, x}};
          wt::Event both = cause;
          both.emplace(w, std::int64_t{1});
          const double conditioned = joint.measure(both) / joint.measure(cause);
          const double intervened = wtt::exact_joint(wtt::intervene(s, cause)).measure({{w, std::int64_t{1}}});
          EXPECT_NEAR(intervened, conditioned, 1e-12);
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Oracle, EmptyInterventionIsIdentity) {
  auto s = wtt::random_scm(7, 5, 0.4);
  auto a = wtt::exact_joint(s);
  auto b = wtt::exact_joint(wtt::intervene(s, {}));
  EXPECT_EQ(wtt::intervene(s, {}).model, s.model);
  EXPECT_EQ(a.variables(), b.variables());
  for (std::uint64_t i = 0; i < 32; ++i) {
    wt::Event e;
    std::uint64_t k = i;
    for (const auto& v : a.variables()) {
      e.emplace(v, static_cast<std::int64_t>(k & 1));
      k >>= 1;
    }
    EXPECT_EQ(a.measure(e), b.measure(e));
  }
}

TEST(Oracle, InterventionCutsIncomingStructure) {
  auto s = wtt::intervene(wtt::smoking_scm(), bits({{"z", 1}}));
  EXPECT_TRUE(s.model.parents("z"_v).empty());
  EXPECT_TRUE(s.model.bidirected_edges().contains({"x"_v, "y"_v}));
  auto t = wtt::intervene(wtt::smoking_scm(), bits({{"x", 1}}));
  EXPECT_TRUE(t.model.bidirected_edges().empty());
  EXPECT_THROW(wtt::intervene(wtt::smoking_scm(), bits({{"w", 1}})), wt::Error);
}

TEST(Oracle, SeedsAreDeterministic) {
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    auto a = wtt::random_scm(seed, 5, 0.3);
    auto b = wtt::random_scm(seed, 5, 0.3);
    EXPECT_EQ(a.model, b.model);
    EXPECT_EQ(a.noise, b.noise);
    auto ja = wtt::exact_joint(a), jb = wtt::exact_joint(b);
    EXPECT_EQ(ja.measure({}), jb.measure({}));
    for (const auto& v : ja.variables()) EXPECT_EQ(ja.measure({{v, std::int64_t{1}}}), jb.measure({{v, std::int64_t{1}}}));
  }
}

TEST(Oracle, ConfoundingProbabilityExtremes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_TRUE(wtt::random_scm(seed, 5, 0.0).model.bidirected_edges().empty());
    auto s = wtt::random_scm(seed, 2, 1.0);
    EXPECT_EQ(s.model.vertices().size(), 2u);
    EXPECT_EQ(s.model.bidirected_edges().size(), 1u);
  }
}
