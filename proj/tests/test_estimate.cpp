#include <gtest/gtest.h>

#include "support.hpp"
#include "whittemore/testing/oracle.hpp"

namespace wt = whittemore;
using wt::operator""_v;

namespace {

wt::CategoricalDistribution example_distribution() {
  std::vector<wt::Event> samples;
  for (auto [x, y] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 1}}) {
    samples.push_back({{"x"_v, std::int64_t{x}}, {"y"_v, std::int64_t{y}}});
  }
  return wt::categorical(samples);
}

wt::CategoricalDistribution kidney() {
  auto d = fixtures::kidney_dataset();
  return wt::categorical(d.rows);
}

wt::Event ev(std::initializer_list<std::pair<const char*, wt::Category>> kv) {
  wt::Event e;
  for (const auto& [k, v] : kv) e.emplace(wt::Variable(k), v);
  return e;
}

// Minimal second implementation of the protocol, delegating to another one.
class Wrapped final : public wt::Distribution {
 public:
  explicit Wrapped(const wt::Distribution& inner) : inner_(inner) {}
  wt::VarSet variables() const override { return inner_.variables(); }
  std::vector<wt::Category> support(const wt::Variable& v) const override { return inner_.support(v); }
  double measure(const wt::Event& e) const override { return inner_.measure(e); }

 private:
  const wt::Distribution& inner_;
};

}  // namespace

TEST(Categorical, ExampleDistribution) {
  auto d = example_distribution();
  EXPECT_DOUBLE_EQ(d.measure(ev({{"x", std::int64_t{1}}, {"y", std::int64_t{1}}})), 0.4);
  EXPECT_DOUBLE_EQ(d.measure(ev({{"x", std::int64_t{0}}, {"y", std::int64_t{1}}})), 0.2);
  EXPECT_EQ(d.measure(ev({{"x", std::int64_t{1}}, {"y", std::int64_t{1}}})), 0.4);
  EXPECT_EQ(d.measure({}), 1.0);
}

TEST(Categorical, SingleSample) {
  std::vector<wt::Event> one{ev({{"x", std::int64_t{0}}})};
  EXPECT_EQ(wt::categorical(one).measure(ev({{"x", std::int64_t{0}}})), 1.0);
}

TEST(Categorical, Kidney) {
  auto d = kidney();
  EXPECT_EQ(d.measure(ev({{"treatment", std::string("surgery")}})), 0.5);
  EXPECT_EQ(d.measure(ev({{"success", std::string("yes")}})), 562.0 / 700.0);
  EXPECT_EQ(wt::signature(d).joint, (wt::VarSet{"treatment"_v, "size"_v, "success"_v}));
}

TEST(Categorical, Errors) {
  EXPECT_THROW(wt::categorical(std::vector<wt::Event>{}), wt::EstimationError);
  std::vector<wt::Event> ragged{ev({{"x", std::int64_t{0}}}), ev({{"y", std::int64_t{0}}})};
  EXPECT_THROW(wt::categorical(ragged), wt::EstimationError);
  auto d = example_distribution();
  EXPECT_THROW(d.measure(ev({{"w", std::int64_t{0}}})), wt::EstimationError);
  EXPECT_EQ(d.measure(ev({{"x", std::int64_t{7}}})), 0.0);
}

TEST(Categorical, MarginalConsistency) {
  auto d = kidney();
  for (const auto& t : d.support("treatment"_v)) {
    double total = 0;
    for (const auto& s : d.support("size"_v)) {
      for (const auto& o : d.support("success"_v)) {
        total += d.measure({{"treatment"_v, t}, {"size"_v, s}, {"success"_v, o}});
      }
    }
    EXPECT_NEAR(total, d.measure({{"treatment"_v, t}}), 1e-12);
  }
}

TEST(Evaluate, Basics) {
  auto d = example_distribution();
  EXPECT_DOUBLE_EQ(wt::evaluate(d, wt::prob({"y"_v}), ev({{"y", std::int64_t{1}}})), 0.6);
  EXPECT_DOUBLE_EQ(wt::evaluate(d, wt::sum(wt::prob({"x"_v}), {"x"_v}), {}), 1.0);
  EXPECT_DOUBLE_EQ(wt::evaluate(d, wt::prob({"y"_v}, {"x"_v}), ev({{"x", std::int64_t{1}}, {"y", std::int64_t{1}}})),
                   2.0 / 3.0);
  EXPECT_THROW(wt::evaluate(d, wt::prob({"y"_v}), {}), wt::EstimationError);
}

TEST(Evaluate, ZeroContextGivesZero) {
  auto d = example_distribution();
  wt::EvalStats stats;
  EXPECT_EQ(wt::evaluate(d, wt::prob({"y"_v}, {"x"_v}), ev({{"x", std::int64_t{5}}, {"y", std::int64_t{1}}}), &stats), 0.0);
  EXPECT_GT(stats.zero_denominators, 0u);
}

TEST(Evaluate, LexicalScoping) {
  // The inner sum rebinds x even though the root binds x = 1.
  auto d = example_distribution();
  wt::Formula f;
  f.form = wt::product({wt::sum(wt::prob({"x"_v}), {"x"_v}), wt::prob({"x"_v})});
  f.bindings = ev({{"x", std::int64_t{1}}});
  EXPECT_DOUBLE_EQ(wt::evaluate(d, f), 0.6);
}

TEST(Estimate, KidneyConditionals) {
  auto d = kidney();
  auto q = [](const char* t) {
    return wt::make_query(ev({{"success", std::string("yes")}}), wt::Event{}, ev({{"treatment", std::string(t)}}));
  };
  EXPECT_EQ(std::get<double>(wt::estimate(d, q("surgery"))), 0.78);
  EXPECT_EQ(std::get<double>(wt::estimate(d, q("nephrolithotomy"))), 0.8257142857142857);
}

TEST(Estimate, BoundQueryGivesDistribution) {
  auto d = example_distribution();
  auto r = wt::estimate(d, wt::make_query(std::vector{"y"_v}, wt::Event{}, ev({{"x", std::int64_t{1}}})));
  const auto& out = *std::get<wt::DistributionPtr>(r);
  EXPECT_EQ(out.variables(), wt::VarSet{"y"_v});
  EXPECT_NEAR(out.measure(ev({{"y", std::int64_t{1}}})), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(out.measure(ev({{"y", std::int64_t{0}}})) + out.measure(ev({{"y", std::int64_t{1}}})), 1.0, 1e-9);
}

TEST(Estimate, ValueOutsideSupportIsZero) {
  auto d = example_distribution();
  EXPECT_EQ(std::get<double>(wt::estimate(d, wt::make_query(ev({{"x", std::int64_t{9}}})))), 0.0);
}

TEST(Estimate, Errors) {
  auto d = example_distribution();
  EXPECT_THROW(wt::estimate(d, wt::make_query(std::vector{"y"_v}, ev({{"x", std::int64_t{0}}}))), wt::EstimationError);
  EXPECT_THROW(wt::estimate(d, wt::make_query(std::vector{"y"_v}, wt::Event{}, std::vector{"x"_v})), wt::EstimationError);
  wt::Formula unnormalized;
  unnormalized.form = wt::prob({"y"_v}, {"x"_v});
  unnormalized.effect = {"x"_v, "y"_v};
  EXPECT_THROW(wt::estimate(d, unnormalized), wt::EstimationError);
  wt::Formula open;
  open.form = wt::prob({"y"_v}, {"x"_v});
  open.effect = {"y"_v};
  EXPECT_THROW(wt::estimate(d, open), wt::EstimationError);
}

TEST(Infer, Kidney) {
  auto d = kidney();
  auto q = [](const char* t) {
    return wt::make_query(ev({{"success", std::string("yes")}}), ev({{"treatment", std::string(t)}}));
  };
  EXPECT_EQ(std::get<double>(wt::infer(fixtures::charig1986(), d, q("surgery"))), 0.8325462173856037);
  EXPECT_EQ(std::get<double>(wt::infer(fixtures::charig1986(), d, q("nephrolithotomy"))), 0.778875);
}

TEST(Infer, NoInterventionIsMeasure) {
  auto m = wt::make_model({{"x"_v, {}}}, {});
  std::vector<wt::Event> s{ev({{"x", std::int64_t{0}}}), ev({{"x", std::int64_t{1}}}), ev({{"x", std::int64_t{1}}})};
  auto d = wt::categorical(s);
  EXPECT_EQ(std::get<double>(wt::infer(m, d, wt::make_query(ev({{"x", std::int64_t{1}}})))),
            d.measure(ev({{"x", std::int64_t{1}}})));
}

TEST(Infer, FailIsReturned) {
  auto bow = wt::make_model({{"x"_v, {}}, {"y"_v, {"x"_v}}}, {{"x"_v, "y"_v}});
  auto d = example_distribution();
  EXPECT_TRUE(std::holds_alternative<wt::Fail>(
      wt::infer(bow, d, wt::make_query(ev({{"y", std::int64_t{1}}}), ev({{"x", std::int64_t{0}}})))));
}

TEST(Infer, SmokingLevels) {
  auto samples = fixtures::smoking_samples();
  auto d = wt::categorical(samples);
  auto q = [](std::int64_t level) { return wt::make_query(ev({{"y", std::int64_t{1}}}), ev({{"x", level}})); };
  EXPECT_NEAR(std::get<double>(wt::infer(fixtures::front_door(), d, q(0))), 0.4975, 1e-12);
  EXPECT_NEAR(std::get<double>(wt::infer(fixtures::front_door(), d, q(1))), 0.4525, 1e-12);
}

TEST(Protocol, PipelineUsesOnlyTheProtocol) {
  auto joint = wt::testing::exact_joint(wt::testing::smoking_scm());
  Wrapped wrapped(joint);
  auto q = wt::make_query(ev({{"y", std::int64_t{1}}}), ev({{"x", std::int64_t{0}}}));
  EXPECT_NEAR(std::get<double>(wt::infer(fixtures::front_door(), wrapped, q)), 0.4975, 1e-12);
  EXPECT_EQ(wrapped.describe(), "#<distribution #{:x :y :z}>");
}
