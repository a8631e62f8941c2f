#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qwalk/analysis.hpp"

namespace {

using namespace qwalk;
using namespace qwalk::analysis;

DensityField field(std::vector<double> rho, int first = 0) {
  DensityField d;
  d.rho = std::move(rho);
  d.first_label = first;
  return d;
}

DensityField random_field(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e;
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) total += (x = e(rng));
  for (double& x : v) x /= total;
  return field(v);
}

TEST(TotalVariation, ElementaryCases) {
  EXPECT_EQ(total_variation(field({0.25, 0.75}), field({0.25, 0.75})), 0.0);
  EXPECT_EQ(total_variation(field({1, 0, 0, 0}), field({0, 0, 0.5, 0.5})), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(field({1, 0}), field({0.5, 0.5})), 0.5);
}

TEST(TotalVariation, RejectsBadInput) {
  EXPECT_THROW(total_variation(field({1, 0}), field({1, 0, 0})), ValidationError);
  EXPECT_THROW(total_variation(field({1, 0}, -1), field({1, 0}, 0)), ValidationError);
  EXPECT_THROW(total_variation(field({0.6, 0.6}), field({0.5, 0.5})), ValidationError);
}

TEST(TotalVariation, MetricSpotChecks) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const DensityField p = random_field(rng, 9), q = random_field(rng, 9), r = random_field(rng, 9);
    EXPECT_DOUBLE_EQ(total_variation(p, q), total_variation(q, p));
    EXPECT_LE(total_variation(p, r), total_variation(p, q) + total_variation(q, r) + 1e-15);
  }
}

TEST(Moments, DeltaAndSymmetric) {
  const Moments d = position_moments(field({0, 0, 1, 0, 0}, -2));
  EXPECT_EQ(d.mean, 0.0);
  EXPECT_EQ(d.variance, 0.0);
  const Moments s = position_moments(field({0.1, 0.2, 0.4, 0.2, 0.1}, -2));
  EXPECT_NEAR(s.mean, 0.0, 1e-16);
  EXPECT_NEAR(s.variance, 0.1 * 8 + 0.2 * 2, 1e-15);
}

TEST(Moments, BesselRowVariance) {
  const Moments m = position_moments(bessel_density(30.0, 150));
  EXPECT_NEAR(m.mean, 0.0, 1e-12);
  EXPECT_NEAR(m.variance, 450.0, 1e-8);
}

TEST(Mirror, ReversesSymmetricSupport) {
  const DensityField m = mirror(field({0.1, 0.2, 0.7}, -1));
  EXPECT_EQ(m.rho, (std::vector<double>{0.7, 0.2, 0.1}));
  EXPECT_THROW(mirror(field({0.5, 0.5}, 0)), ValidationError);
}

TEST(VisitSeries, ReadsResetsFromChangeLog) {
  std::vector<DensityField> snaps{field({0, 1, 0}, -1), field({0.3, 0.4, 0.3}, -1)};
  snaps[1].t = 0.5;
  const std::vector<ensemble::FlagRecord> log{{0.0, -1, true, false},  {0.0, 0, true, true},
                                              {0.0, 1, false, true},   {2.4, 0, false, false},
                                              {2.45, -1, true, true},  {3.0, 0, true, false},
                                              {3.9, 1, false, false},  {5.5, 0, false, false}};
  const VisitSeries v = visit_fraction_series(snaps, log, 0);
  EXPECT_EQ(v.t, (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(v.fraction, (std::vector<double>{1.0, 0.4}));
  EXPECT_EQ(v.crossing_times, (std::vector<double>{2.4, 5.5}));
  EXPECT_EQ(first_crossing(log, 1), 3.9);
  EXPECT_FALSE(first_crossing(log, -1).has_value());
  std::swap(snaps[0], snaps[1]);
  EXPECT_THROW(visit_fraction_series(snaps, log, 0), ValidationError);
}

double early_origin_error(double tau) {
  ensemble::SimConfig c;
  c.tau = tau;
  c.t_max = 2.0;
  const ensemble::RunResult r = ensemble::run(c);
  const VisitSeries v = visit_fraction_series(r.snapshots, r.flag_log, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.t.size(); ++i) {
    const double j0 = bessel::eval_j(0, v.t[i]);
    worst = std::max(worst, std::abs(v.fraction[i] - j0 * j0));
  }
  return worst;
}

TEST(VisitSeries, EarlyOriginTracksBesselSquared) {
  // the lag behind J_0^2 is a first-order time-step effect
  const double fine = early_origin_error(0.01);
  EXPECT_LE(fine, 0.03);
  EXPECT_LT(fine, early_origin_error(0.05));
}

TEST(ExactCrossing, FirstZeros) {
  EXPECT_NEAR(exact_first_crossing(0), 2.4048, 1e-4);
  EXPECT_NEAR(exact_first_crossing(-1), 3.8317, 1e-4);
  EXPECT_EQ(exact_first_crossing(1), exact_first_crossing(-1));
}

TEST(CompareToBessel, ReportsSnapshotsAndCrossings) {
  ensemble::SimConfig c;
  c.n_tr = 5000;
  c.half_width = 30;
  c.t_max = 5.0;
  c.snapshot_every = 1.0;
  const ensemble::RunResult r = ensemble::run(c);
  const ComparisonReport all = compare_to_bessel(r.snapshots, r.flag_log);
  ASSERT_EQ(all.snapshots.size(), 6u);
  for (const auto& s : all.snapshots) {
    EXPECT_GE(s.tv_distance, 0.0);
    EXPECT_LE(s.tv_distance, 1.0);
    EXPECT_GE(s.empirical.variance, 0.0);
    EXPECT_NEAR(s.exact.variance, s.t * s.t / 2, 1e-9);
  }
  ASSERT_EQ(all.crossings.size(), 7u);
  EXPECT_EQ(all.crossings[3].site, 0);
  EXPECT_TRUE(all.crossings[3].empirical.has_value());

  const ComparisonReport one = compare_to_bessel(r.snapshots, r.flag_log, 3.0, 1);
  ASSERT_EQ(one.snapshots.size(), 1u);
  EXPECT_EQ(one.snapshots[0].t, 3.0);
  EXPECT_EQ(one.crossings.size(), 3u);
  EXPECT_THROW(compare_to_bessel(r.snapshots, r.flag_log, 3.3), ValidationError);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

TEST(Sweep, SeedsRowsAndSummary) {
  ensemble::SimConfig base;
  base.half_width = 20;
  base.seed = 7;
  const std::vector<std::int64_t> n{100, 2000};
  const SweepTable t = ntr_sweep(base, n, 2.0, 3);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows[0].seed, 7u);
  EXPECT_EQ(t.rows[2].seed, 9u);
  EXPECT_EQ(t.rows[3].seed, 1007u);
  ASSERT_EQ(t.summary.size(), 2u);
  for (const auto& s : t.summary) {
    EXPECT_LE(s.tv_min, s.tv_median);
    EXPECT_LE(s.tv_median, s.tv_max);
  }
  EXPECT_EQ(t.median_strictly_decreasing, t.summary[1].tv_median < t.summary[0].tv_median);

  const SweepTable parallel = ntr_sweep(base, n, 2.0, 3, 2);
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(parallel.rows[i].tv_distance, t.rows[i].tv_distance);
}

TEST(Sweep, Validation) {
  ensemble::SimConfig base;
  base.half_width = 20;
  const std::vector<std::int64_t> too_small{41};
  EXPECT_THROW(ntr_sweep(base, too_small, 2.0, 1), ValidationError);
  EXPECT_THROW(ntr_sweep(base, {}, 2.0, 1), ValidationError);
  const std::vector<std::int64_t> ok{100};
  EXPECT_THROW(ntr_sweep(base, ok, 2.0, 0), ValidationError);
}

}  // namespace
