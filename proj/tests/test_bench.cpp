#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "test_support.hpp"

namespace gaussfit {
namespace {

using testing::default_table;

BenchConfig small_config(int trials, double snr_lo, double snr_hi) {
  BenchConfig c;
  c.trials = trials;
  c.snr_grid_db = {snr_lo, 0.5, snr_hi};
  return c;
}

std::string csv_of(const BenchReport& r) {
  std::ostringstream out;
  write_report_csv(out, r);
  return out.str();
}

TEST(MseAggregate, Definition) {
  const std::vector<GaussianParams> truths{{1.0, 8.5, 1.1}, {1.0, 8.2, 1.25}};
  EXPECT_EQ(mse_aggregate(truths, truths), (std::array<double, 3>{0.0, 0.0, 0.0}));
  const std::vector<GaussianParams> one_t{{1.0, 8.5, 1.1}};
  const std::vector<GaussianParams> one_e{{1.0, 8.5, 1.2}};
  const auto m = mse_aggregate(one_e, one_t);
  EXPECT_EQ(m[0], 0.0);
  EXPECT_EQ(m[1], 0.0);
  EXPECT_NEAR(m[2], 0.01, 1e-15);
}

TEST(MseAggregate, OrderInvariantAndShapeChecked) {
  const CounterStream rng(3);
  std::vector<GaussianParams> est, tru;
  for (std::uint64_t i = 0; i < 64; ++i) {
    tru.push_back({1.0, rng.uniform(4 * i, 8, 9), rng.uniform(4 * i + 1, 1, 1.3)});
    est.push_back({rng.uniform(4 * i + 2, 0.5, 1.5), tru.back().mu + 0.1 * rng.normal(4 * i + 3),
                   tru.back().sigma * 1.1});
  }
  const auto a = mse_aggregate(est, tru);
  std::reverse(est.begin(), est.end());
  std::reverse(tru.begin(), tru.end());
  const auto b = mse_aggregate(est, tru);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-14 * (a[k] + 1e-300));
  tru.pop_back();
  EXPECT_THROW(mse_aggregate(est, tru), FitError);
  EXPECT_THROW(mse_aggregate({}, {}), FitError);
}

TEST(TrialSeeds, PairwiseDistinct) {
  std::set<std::uint64_t> seen;
  for (std::size_t p = 0; p < 61; ++p) {
    for (std::size_t t = 0; t < 2000; ++t) seen.insert(trial_seed(7, p, t));
  }
  EXPECT_EQ(seen.size(), 61u * 2000u);
}

TEST(MakeTrial, DrawsInsideConfiguredRanges) {
  const BenchConfig c;
  for (std::size_t t = 0; t < 500; ++t) {
    const Trial trial = make_trial(c, 12.0, trial_seed(7, 0, t));
    EXPECT_EQ(trial.truth.A, 1.0);
    EXPECT_GE(trial.truth.mu, 8.0);
    EXPECT_LE(trial.truth.mu, 9.0);
    EXPECT_GE(trial.truth.sigma, 1.0);
    EXPECT_LE(trial.truth.sigma, 1.3);
    EXPECT_EQ(trial.signal.size(), 1001u);
  }
}

TEST(BenchSnr, FullGridShape) {
  BenchConfig c;
  c.trials = 1;
  const BenchReport r = run_bench_snr(c, default_table());
  EXPECT_EQ(r.rows.size(), 915u);
  const std::string csv = csv_of(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 916);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,sweep,param,mse,trials,degenerate,mean_time_us,seed");
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.trials, 1);
    EXPECT_TRUE(std::isnan(row.mse) || row.mse >= 0.0);
  }
  EXPECT_NE(r.find(MethodId::M3, 12.0, "sigma"), nullptr);
}

TEST(BenchSnr, ByteIdenticalAcrossRuns) {
  const BenchConfig c = small_config(20, 0.0, 2.0);
  EXPECT_EQ(csv_of(run_bench_snr(c, default_table())), csv_of(run_bench_snr(c, default_table())));
}

TEST(BenchSnr, ThreadedMatchesSerial) {
  BenchConfig c = small_config(30, 10.0, 12.0);
  const std::string serial = csv_of(run_bench_snr(c, default_table()));
  c.threads = 4;
  EXPECT_EQ(csv_of(run_bench_snr(c, default_table())), serial);
}

TEST(BenchSnr, MethodOrderDoesNotChangeMse) {
  BenchConfig c = small_config(25, 12.0, 12.0);
  const BenchReport a = run_bench_snr(c, default_table());
  std::reverse(c.methods.begin(), c.methods.end());
  const BenchReport b = run_bench_snr(c, default_table());
  for (MethodId id : c.methods) {
    for (auto param : kParamNames) {
      const double x = a.mse(id, 12.0, param), y = b.mse(id, 12.0, param);
      if (std::isnan(x)) {
        EXPECT_TRUE(std::isnan(y));
      } else {
        EXPECT_EQ(x, y);
      }
    }
  }
}

TEST(BenchSnr, TimingIsOptIn) {
  BenchConfig c = small_config(3, 12.0, 12.0);
  for (const auto& row : run_bench_snr(c, default_table()).rows) EXPECT_EQ(row.mean_time_us, 0.0);
  c.timing = true;
  for (const auto& row : run_bench_snr(c, default_table()).rows) EXPECT_GT(row.mean_time_us, 0.0);
}

TEST(BenchSnr, RejectsBadConfig) {
  BenchConfig c;
  c.trials = 0;
  EXPECT_THROW(run_bench_snr(c, default_table()), FitError);
  c = BenchConfig{};
  c.mu_dist = {9.0, 8.0};
  EXPECT_THROW(run_bench_snr(c, default_table()), FitError);
  c = BenchConfig{};
  c.methods.clear();
  EXPECT_THROW(run_bench_snr(c, default_table()), FitError);
}

TEST(BenchIters, SingleIterationShape) {
  BenchConfig c;
  c.trials = 5;
  c.iter_sweep = {1};
  const BenchReport r = run_bench_iters(c, default_table());
  EXPECT_EQ(r.rows.size(), 5u * 1u * 3u);
  c.iter_sweep.clear();
  EXPECT_THROW(run_bench_iters(c, default_table()), FitError);
}

TEST(BenchIters, SweepPointMatchesDirectRun) {
  // Point k of the sweep must equal a standalone run with k iterations.
  BenchConfig c;
  c.trials = 15;
  c.methods = {MethodId::M4, MethodId::M5};
  c.iter_sweep = {1, 2, 5};
  const BenchReport sweep = run_bench_iters(c, default_table());
  for (int k : c.iter_sweep) {
    BenchConfig one = c;
    one.iter_sweep = {k};
    const BenchReport direct = run_bench_iters(one, default_table());
    for (MethodId id : c.methods) {
      for (auto param : kParamNames) {
        const double a = sweep.mse(id, k, param), b = direct.mse(id, k, param);
        if (!std::isnan(a) || !std::isnan(b)) {
          EXPECT_EQ(a, b);
        }
      }
    }
  }
}

TEST(SignalCsv, RoundTrip) {
  const SampledSignal s(std::vector<double>{0.1, 1.0 / 3.0, -2.5e-7}, 0.01, 4.25);
  std::stringstream ss;
  write_signal_csv(ss, s);
  const SampledSignal back = read_signal_csv(ss);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(back[n], s[n]);
  EXPECT_EQ(back.x0(), 4.25);
  EXPECT_NEAR(back.delta_x(), 0.01, 1e-12);

  const SampledSignal big = testing::noisy(testing::long_tail(), 12.0, 1);
  std::stringstream big_ss;
  write_signal_csv(big_ss, big);
  const SampledSignal big_back = read_signal_csv(big_ss);
  ASSERT_EQ(big_back.size(), big.size());
  for (std::size_t n = 0; n < big.size(); ++n) EXPECT_EQ(big_back[n], big[n]);
}

TEST(SignalCsv, Errors) {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_signal_csv(in);
    } catch (const FitError& e) {
      return std::make_pair(e.code(), std::string(e.what()));
    }
    return std::make_pair(Errc::InvalidConfig, std::string());
  };
  const auto nonuniform = parse("x,y\n0,1\n0.1,2\n0.25,3\n");
  EXPECT_EQ(nonuniform.first, Errc::ParseError);
  EXPECT_NE(nonuniform.second.find("line 4"), std::string::npos) << nonuniform.second;
  EXPECT_EQ(parse("x,y\n0,1\n0.1,2\n").first, Errc::ParseError);
  EXPECT_EQ(parse("a,b\n0,1\n0.1,2\n0.2,3\n").first, Errc::ParseError);
  EXPECT_EQ(parse("x,y\n0,1\n0.1,oops\n0.2,3\n").first, Errc::ParseError);
  EXPECT_EQ(parse("x,y\n0,1\n0.1\n0.2,3\n").first, Errc::ParseError);
}

}  // namespace
}  // namespace gaussfit
