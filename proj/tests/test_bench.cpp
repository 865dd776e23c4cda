#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "advinterp/bench.hpp"

using namespace advinterp;
using namespace advinterp::bench;

namespace {

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.cases = {1};
  plan.n_train = {40};
  plan.n_vali = 40;
  plan.n_test = 20;
  plan.radii = {0.0, 0.05};
  plan.replications = 3;
  plan.bandwidth_count = 6;
  plan.degree = 3;
  return plan;
}

}  // namespace

TEST(SyntheticCase, TruthFunctions) {
  EXPECT_DOUBLE_EQ(SyntheticCase(1).truth(1.5), 1.5 * 1.5 * 1.5 - 1.5);
  EXPECT_DOUBLE_EQ(SyntheticCase(2).truth(0.4), 0.4 + std::cos(1.2));
  EXPECT_DOUBLE_EQ(SyntheticCase(3).truth(-0.7), std::exp(-0.49) * std::sin(-3.5));
  EXPECT_THROW(SyntheticCase(4), InvalidArgument);
  EXPECT_DOUBLE_EQ(SyntheticCase(1).sigma(), std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(SyntheticCase(1, 0.5, NoiseConvention::StdDev).sigma(), 0.5);
}

TEST(GenerateCase, NoiseVarianceAndDesignMean) {
  const SyntheticCase c(2);
  SeededRng rng(1, 0);
  const auto data = generate_case(c, 1'000'000, rng);
  double sx = 0.0;
  double se = 0.0;
  double se2 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double x = data.x(i)[0];
    ASSERT_GE(x, -2.0);
    ASSERT_LE(x, 2.0);
    const double e = data.y(i) - c.truth(x);
    sx += x;
    se += e;
    se2 += e * e;
  }
  const double n = static_cast<double>(data.size());
  EXPECT_NEAR(sx / n, 0.0, 0.01);
  EXPECT_NEAR(se2 / n - (se / n) * (se / n), 0.5, 0.01);
}

TEST(GenerateCase, Deterministic) {
  SeededRng a(5, 5);
  SeededRng b(5, 5);
  const auto da = generate_case(SyntheticCase(1), 50, a);
  const auto db = generate_case(SyntheticCase(1), 50, b);
  EXPECT_EQ(da.xs().coords(), db.xs().coords());
  EXPECT_EQ(da.ys(), db.ys());
}

TEST(Method, Names) {
  for (auto m : {Method::LP, Method::IP1, Method::IP2, Method::IP0, Method::SI, Method::OneNN, Method::Zero})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_EQ(to_string(Method::OneNN), "1N");
  EXPECT_THROW(parse_method("MNN"), InvalidArgument);
  EXPECT_TRUE(is_interpolating(Method::SI));
  EXPECT_FALSE(is_interpolating(Method::LP));
}

TEST(ExperimentPlan, Validation) {
  ExperimentPlan plan;
  EXPECT_NO_THROW(plan.validate());
  plan.radii = {-0.1};
  EXPECT_THROW(plan.validate(), InvalidArgument);
  plan = ExperimentPlan{};
  plan.replications = 0;
  EXPECT_THROW(plan.validate(), InvalidArgument);
  plan = ExperimentPlan{};
  plan.cases = {7};
  EXPECT_THROW(plan.validate(), InvalidArgument);
}

TEST(RunPlan, ZeroMethodSingleRecord) {
  ExperimentPlan plan = small_plan();
  plan.replications = 1;
  plan.radii = {0.0};
  plan.methods = {Method::Zero};
  const auto recs = run_plan(plan);
  ASSERT_EQ(recs.size(), 1u);

  const SeededRng unit = SeededRng(plan.seed, 1).derive(40).derive(0);
  SeededRng test_rng = unit.derive(2);
  const auto xs = generate_inputs(plan.n_test, test_rng);
  const SyntheticCase c(1);
  double m = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) m += std::pow(c.truth(xs[i][0]), 2);
  m /= static_cast<double>(xs.size());
  EXPECT_NEAR(recs[0].adv_loss, m, 1e-12);
  EXPECT_EQ(recs[0].adv_loss, recs[0].std_loss);
  EXPECT_TRUE(std::isnan(recs[0].bandwidth));
}

TEST(RunPlan, RecordCountAndOrder) {
  const auto plan = small_plan();
  const auto recs = run_plan(plan);
  EXPECT_EQ(recs.size(), plan.replications * plan.radii.size() * plan.methods.size());
  for (const auto& r : recs) {
    EXPECT_FALSE(r.failed) << r.error;
    EXPECT_LT(r.rep, plan.replications);
    EXPECT_GE(r.adv_loss, 0.0);
    EXPECT_GE(r.std_loss, 0.0);
  }
}

TEST(RunPlan, WrappersMatchBaseAtZeroRadius) {
  const auto recs = run_plan(small_plan());
  for (const auto& lp : recs) {
    if (lp.method != Method::LP || lp.r != 0.0) continue;
    for (const auto& w : recs) {
      if ((w.method == Method::IP1 || w.method == Method::IP2) && w.r == 0.0 && w.rep == lp.rep)
        EXPECT_EQ(w.std_loss, lp.std_loss);
    }
  }
}

TEST(RunPlan, LossNondecreasingAlongSweep) {
  ExperimentPlan plan = small_plan();
  plan.radii = {0.0, 0.02, 0.05, 0.1};
  const auto recs = run_plan(plan);
  for (const auto& a : recs) {
    for (const auto& b : recs) {
      if (a.method == b.method && a.rep == b.rep && a.r < b.r) EXPECT_LE(a.adv_loss, b.adv_loss);
    }
  }
}

TEST(RunPlan, WorkerCountDoesNotMatter) {
  const auto plan = small_plan();
  const auto a = run_plan(plan, 1);
  const auto b = run_plan(plan, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].adv_loss, b[i].adv_loss);
    EXPECT_TRUE(a[i].bandwidth == b[i].bandwidth ||
                (std::isnan(a[i].bandwidth) && std::isnan(b[i].bandwidth)));
  }
}

TEST(Median, KnownValues) {
  std::vector<double> v(101);
  std::iota(v.begin(), v.end(), 1.0);
  const auto m = median_with_se(v);
  EXPECT_EQ(m.median, 51.0);
  EXPECT_EQ(m.se, 5.5);
  EXPECT_EQ(median_with_se({3.2}).se, 0.0);
  EXPECT_EQ(median_with_se({3.2}).median, 3.2);
  EXPECT_EQ(median_with_se(std::vector<double>(10, 0.7)).se, 0.0);
  EXPECT_EQ(median_with_se({4.0, 1.0, 2.0, 3.0}).median, 2.5);
  EXPECT_THROW(median_with_se({}), InvalidArgument);
}

TEST(Aggregate, GroupsAndSkipsFailures) {
  std::vector<ReplicationRecord> recs;
  for (std::size_t k = 0; k < 5; ++k) {
    ReplicationRecord r;
    r.case_id = 1;
    r.n = 80;
    r.r = 0.05;
    r.method = Method::SI;
    r.rep = k;
    r.adv_loss = static_cast<double>(k);
    recs.push_back(r);
  }
  recs.back().failed = true;
  const auto rows = aggregate(recs);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].count, 4u);
  EXPECT_EQ(rows[0].median, 1.5);
  recs.resize(1);
  recs[0].failed = true;
  EXPECT_THROW(aggregate(recs), InvalidArgument);
}

TEST(Curse, SingletonAndRadiusRule) {
  ExperimentPlan plan = small_plan();
  const std::vector<std::size_t> one{50};
  const auto rows = curse_experiment(plan, 2, Method::SI, RadiusRule::Fixed, 0.1, one);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].r, 0.1);
  EXPECT_NEAR(rows[0].log_log_n, std::log(std::log(50.0)), 1e-12);
  const auto scaled = curse_experiment(plan, 2, Method::SI, RadiusRule::NOverLogN, 0.0, one);
  EXPECT_NEAR(scaled[0].r, 4.0 * std::log(50.0) / 50.0, 1e-15);
  EXPECT_EQ(parse_radius_rule("n_log_n"), RadiusRule::NOverLogN);
}
