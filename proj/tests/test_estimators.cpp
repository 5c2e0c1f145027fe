#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "tailweight/asymptotics.hpp"
#include "tailweight/estimators.hpp"
#include "tailweight/rng.hpp"
#include "tailweight/sampling.hpp"

namespace tw = tailweight;

namespace {

const double e = std::exp(1.0);

tw::SortedSample pareto_sample(double gamma, std::size_t n, std::uint64_t seed) {
  auto s = tw::make_stream(seed, 0);
  return tw::SortedSample(tw::sample_model(tw::StrictParetoModel(gamma), n, s));
}

std::vector<double> scaled(std::span<const double> v, double c, double shift = 0.0) {
  std::vector<double> out;
  for (double x : v) out.push_back(c * x + shift);
  return out;
}

}  // namespace

TEST(OrderStatistics, SortsAndKeepsTies) {
  const auto a = tw::order_statistics(tw::Sample({3, 1, 2}));
  EXPECT_EQ(std::vector<double>(a.values().begin(), a.values().end()),
            (std::vector<double>{1, 2, 3}));
  const auto b = tw::order_statistics(tw::Sample({5, 5, 1}));
  EXPECT_EQ(std::vector<double>(b.values().begin(), b.values().end()),
            (std::vector<double>{1, 5, 5}));
  EXPECT_EQ(b.order_stat(1), 1.0);
  EXPECT_EQ(b.top(1), 5.0);
}

TEST(OrderStatistics, RandomVectorProperty) {
  auto s = tw::make_stream(77, 0);
  auto raw = tw::draw_uniforms(10000, s);
  const auto sorted = tw::order_statistics(tw::Sample(raw));
  const auto v = sorted.values();
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  std::sort(raw.begin(), raw.end());
  EXPECT_TRUE(std::equal(raw.begin(), raw.end(), v.begin(), v.end()));
}

TEST(OrderStatistics, RejectsNan) {
  EXPECT_THROW(tw::SortedSample({1.0, std::nan(""), 2.0}), tw::validation_error);
  EXPECT_THROW(tw::Sample({}), tw::validation_error);
}

TEST(PowerSum, HandValues) {
  const tw::SortedSample x({e, e * e, e * e * e});
  EXPECT_NEAR(tw::power_sum(x, tw::EstimatorSpec(1, 1, tw::WeightScheme(0))), 3.0, 1e-12);
  EXPECT_NEAR(tw::power_sum(x, tw::EstimatorSpec(2, 2, tw::WeightScheme(0))), 13.0, 1e-12);
}

TEST(PowerSum, Preconditions) {
  const tw::SortedSample x({0.5, 0.9, 1.0, 3.0});
  EXPECT_NO_THROW(tw::power_sum(x, tw::EstimatorSpec(1, 1, tw::WeightScheme(0))));
  try {
    tw::power_sum(x, tw::EstimatorSpec(1, 2, tw::WeightScheme(0)));
    FAIL() << "expected precondition_error";
  } catch (const tw::precondition_error& err) {
    EXPECT_NE(std::string(err.what()).find("X_{3,4}"), std::string::npos) << err.what();
  }
  EXPECT_THROW(tw::power_sum(x, tw::EstimatorSpec(1, 4, tw::WeightScheme(0))),
               tw::domain_error);
  EXPECT_THROW(tw::EstimatorSpec(0, 1, tw::WeightScheme(0)), tw::validation_error);
}

TEST(PowerSum, BruteForceOracle) {
  boost::math::quadrature::tanh_sinh<double> rule;
  for (double rho : {-0.3, 0.0, 0.7, 2.0}) {
    for (double p : {0.5, 1.0, 2.5}) {
      for (std::size_t n : {5u, 12u, 20u}) {
        const auto x = pareto_sample(1.0, n, 1000 + n);
        // keep the whole window above 1
        std::vector<double> shifted = scaled(x.values(), 1.0, 1.0);
        const tw::SortedSample sorted(shifted);
        const std::size_t k = n - 1;
        double oracle = 0.0;
        for (std::size_t i = 1; i <= k; ++i) {
          const std::size_t j = n + 1 - i;  // d_{j,n}
          const double a = 1.0 - static_cast<double>(j) / n;
          const double b = 1.0 - (j - 1.0) / n;
          const double d = n * rule.integrate([rho](double t) { return std::pow(t, rho); }, a, b);
          oracle += d * std::pow(std::log(sorted.order_stat(j)), p);
        }
        const double got = tw::power_sum(sorted, tw::EstimatorSpec(p, k, tw::WeightScheme(rho)));
        EXPECT_NEAR(got / oracle, 1.0, 1e-10) << "rho=" << rho << " p=" << p << " n=" << n;
      }
    }
  }
}

TEST(PowerSum, MonotoneInTopValues) {
  const auto x = pareto_sample(1.0, 200, 3);
  const tw::EstimatorSpec spec(1.5, 20, tw::WeightScheme(0.5));
  const double base = tw::power_sum(x, spec);
  for (std::size_t i = 1; i <= 20; ++i) {
    std::vector<double> v(x.values().begin(), x.values().end());
    v[v.size() - i] *= 1.01;
    EXPECT_GE(tw::power_sum(tw::SortedSample(v), spec), base);
  }
}

TEST(GammaWps, DependsOnlyOnWindow) {
  const auto x = pareto_sample(1.0, 200, 4);
  const tw::EstimatorSpec spec(1.0, 20, tw::WeightScheme(1.0));
  std::vector<double> v(x.values().begin(), x.values().end());
  for (std::size_t j = 0; j < 180; ++j) v[j] = 1.0 + 0.5 * (v[j] - 1.0) / v[179];
  EXPECT_EQ(tw::gamma_wps(tw::SortedSample(v), spec), tw::gamma_wps(x, spec));
}

TEST(AlphaN, Values) {
  EXPECT_NEAR(tw::alpha_n(tw::EstimatorSpec(1, 136, tw::WeightScheme(0)), 1000),
              136.0 * std::log(1000.0 / 136.0), 1e-10);
  EXPECT_NEAR(tw::alpha_n(tw::EstimatorSpec(1, 136, tw::WeightScheme(0)), 1000), 271.334, 5e-4);
  EXPECT_NEAR(tw::alpha_n(tw::EstimatorSpec(2, 10, tw::WeightScheme(1)), 900), 1.12490, 5e-5);
  EXPECT_THROW(tw::alpha_n(tw::EstimatorSpec(1, 10, tw::WeightScheme(0)), 10), tw::domain_error);
}

TEST(AlphaN, UnitLogRatio) {
  // alpha_n = k when log(n/k) = 1 and rho = 0: evaluate the formula at n/k = e.
  const double k = 100.0;
  const double alpha = k / 1.0 * std::pow(1.0 / e, 0.0) * std::pow(std::log(e), 1.0);
  EXPECT_DOUBLE_EQ(alpha, k);
}

TEST(GammaWps, HandValue) {
  const tw::SortedSample x({e, e * e, e * e * e});
  EXPECT_NEAR(tw::gamma_wps(x, tw::EstimatorSpec(1, 1, tw::WeightScheme(0))), 3.0 / std::log(3.0),
              1e-12);
  EXPECT_NEAR(3.0 / std::log(3.0), 2.73072, 5e-6);
}

TEST(GammaWps, ParetoCenter) {
  const auto x = pareto_sample(1.0, 100000, 31);
  const double g = tw::gamma_wps(x, tw::EstimatorSpec(1, 40, tw::WeightScheme(1)));
  const double t = 2.0 * std::log(2500.0);
  EXPECT_NEAR(g, 1.0 + 1.0 / t, 0.15);
}

TEST(GammaWps, ScaleShiftIdentity) {
  const auto x = pareto_sample(1.0, 1000, 8);
  for (double rho : {0.0, 0.5, 2.0}) {
    const tw::EstimatorSpec spec(1, 50, tw::WeightScheme(rho));
    const double base = tw::gamma_wps(x, spec);
    for (double c : {0.5, 2.0, 10.0}) {
      const double moved = tw::gamma_wps(tw::SortedSample(scaled(x.values(), c)), spec);
      EXPECT_NEAR(moved, base + std::log(c) / std::log(1000.0 / 50.0), 1e-10);
    }
  }
}

TEST(Hill, HandValue) {
  EXPECT_NEAR(tw::hill(tw::SortedSample({e, e * e, e * e * e, e * e * e * e}), 2), 1.5, 1e-12);
}

TEST(Hill, ScaleInvariant) {
  const auto x = pareto_sample(1.5, 500, 9);
  for (double c : {0.5, 2.0, 10.0}) {
    EXPECT_NEAR(tw::hill(tw::SortedSample(scaled(x.values(), c)), 40), tw::hill(x, 40), 1e-12);
  }
}

TEST(Hill, ParetoSanity) {
  EXPECT_NEAR(tw::hill(pareto_sample(2.0, 10000, 12), 100), 2.0, 0.6);
}

TEST(Hill, NonPositiveReference) {
  EXPECT_THROW(tw::hill(tw::SortedSample({-1.0, 0.0, 2.0, 3.0}), 2), tw::domain_error);
}

TEST(MomentStat, HandValues) {
  const tw::SortedSample x({e, e * e, e * e * e * e});
  EXPECT_NEAR(tw::moment_stat(x, 2, 1), 2.0, 1e-12);
  EXPECT_NEAR(tw::moment_stat(x, 2, 2), 5.0, 1e-12);
  EXPECT_EQ(tw::moment_stat(tw::SortedSample({1.0, 2.0, 2.0, 2.0}), 2, 1), 0.0);
  EXPECT_THROW(tw::moment_stat(x, 2, 3), tw::domain_error);
}

TEST(MomentEstimator, HandValues) {
  EXPECT_NEAR(tw::moment_estimator(tw::SortedSample({e, e * e, e * e * e * e}), 2), 0.5, 1e-12);
  // log-ratios {0, 2}
  EXPECT_NEAR(tw::moment_estimator(tw::SortedSample({1.0, e, e, e * e * e}), 2), 1.0, 1e-12);
}

TEST(MomentEstimator, Degenerate) {
  EXPECT_THROW(tw::moment_estimator(tw::SortedSample({1.0, 2.0, 2.0, 2.0}), 2),
               tw::degenerate_sample_error);
  // identical non-zero log-ratios give M1^2 = M2
  EXPECT_THROW(tw::moment_estimator(tw::SortedSample({1.0, 2.0, 4.0, 4.0}), 2),
               tw::degenerate_sample_error);
}

TEST(Pickands, HandValue) {
  const tw::SortedSample x({1.0, 2.0, 2.5, 2.8, 3.0, 4.0, 7.0, 8.0});
  EXPECT_NEAR(tw::pickands(x, 2), 1.0, 1e-12);
}

TEST(Pickands, ScaleAndShiftInvariant) {
  const auto x = pareto_sample(1.0, 1000, 10);
  const double base = tw::pickands(x, 100);
  for (double c : {0.5, 2.0, 10.0}) {
    EXPECT_NEAR(tw::pickands(tw::SortedSample(scaled(x.values(), c)), 100), base, 1e-12);
  }
  for (double a : {-3.0, 0.25, 100.0}) {
    EXPECT_NEAR(tw::pickands(tw::SortedSample(scaled(x.values(), 1.0, a)), 100), base, 1e-9);
  }
}

TEST(Pickands, Errors) {
  const auto x = pareto_sample(1.0, 1000, 11);
  EXPECT_THROW(tw::pickands(x, 300), tw::domain_error);
  EXPECT_THROW(tw::pickands(tw::SortedSample(std::vector<double>(8, 2.0)), 2),
               tw::degenerate_sample_error);
}
