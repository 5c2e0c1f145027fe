#ifndef TAILWEIGHT_NORMALITY_HPP
#define TAILWEIGHT_NORMALITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tailweight/error.hpp"
#include "tailweight/special_functions.hpp"

namespace tailweight {

struct MeanSd {
  double mean;
  double sd;  // denominator n - 1; 0 for a single value
};

inline MeanSd mean_sd(std::span<const double> values) {
  if (values.empty()) throw domain_error("mean_sd of an empty sequence");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

struct ChiSquareResult {
  double statistic;
  double p_value;
  std::size_t cells;  // after merging
  double dof;
};

/// Pearson chi-square test of normality with mean and sd fitted from the
/// data. `bin_count` cells equiprobable under the fitted normal; adjacent
/// cells are merged left to right until each expected count is >= 5; the
/// statistic is referred to chi-square with (cells - 3) degrees of freedom.
inline ChiSquareResult chi_square_normality_test(std::span<const double> values,
                                                 std::size_t bin_count = 20) {
  if (values.size() < 50) {
    throw domain_error("chi-square normality test needs at least 50 values, got " +
                       std::to_string(values.size()));
  }
  if (bin_count < 4) throw domain_error("chi-square normality test needs >= 4 bins");
  const auto fit = mean_sd(values);
  if (!(fit.sd > 0.0)) {
    throw degenerate_sample_error("chi-square normality test: zero variance");
  }
  std::vector<double> inner_edges(bin_count - 1);
  for (std::size_t j = 1; j < bin_count; ++j) {
    inner_edges[j - 1] =
        normal_quantile(static_cast<double>(j) / static_cast<double>(bin_count));
  }
  std::vector<double> observed(bin_count, 0.0);
  for (double v : values) {
    const double z = (v - fit.mean) / fit.sd;
    const auto cell = static_cast<std::size_t>(
        std::upper_bound(inner_edges.begin(), inner_edges.end(), z) -
        inner_edges.begin());
    observed[cell] += 1.0;
  }
  const double expected_each =
      static_cast<double>(values.size()) / static_cast<double>(bin_count);

  std::vector<double> obs_merged, exp_merged;
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t j = 0; j < bin_count; ++j) {
    obs_acc += observed[j];
    exp_acc += expected_each;
    if (exp_acc >= 5.0) {
      obs_merged.push_back(obs_acc);
      exp_merged.push_back(exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0) {
    if (exp_merged.empty()) {
      obs_merged.push_back(obs_acc);
      exp_merged.push_back(exp_acc);
    } else {
      obs_merged.back() += obs_acc;
      exp_merged.back() += exp_acc;
    }
  }
  if (obs_merged.size() < 4) {
    throw domain_error("chi-square normality test: fewer than 4 cells after "
                       "merging; not enough data");
  }
  double stat = 0.0;
  for (std::size_t j = 0; j < obs_merged.size(); ++j) {
    const double diff = obs_merged[j] - exp_merged[j];
    stat += diff * diff / exp_merged[j];
  }
  const double dof = static_cast<double>(obs_merged.size()) - 3.0;
  return {stat, chi_square_sf(stat, dof), obs_merged.size(), dof};
}

inline double chi_square_normality(std::span<const double> values,
                                   std::size_t bin_count = 20) {
  return chi_square_normality_test(values, bin_count).p_value;
}

struct Histogram {
  std::vector<double> edges;   // bin_count + 1 entries
  std::vector<std::size_t> counts;
  std::vector<double> fitted_density;  // normal pdf at midpoints, fitted mean/sd
};

/// Equal-width bins over [min, max], right-most bin closed. When every value
/// is equal the result is one zero-width bin holding all of them (its fitted
/// density is reported as 0).
inline Histogram histogram(std::span<const double> values, std::size_t bin_count) {
  if (values.empty()) throw domain_error("histogram of an empty sequence");
  if (bin_count < 1) throw domain_error("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const auto fit = mean_sd(values);
  Histogram h;
  if (!(hi > lo)) {
    h.edges = {lo, hi};
    h.counts = {values.size()};
    h.fitted_density = {0.0};
    return h;
  }
  h.edges.resize(bin_count + 1);
  for (std::size_t j = 0; j <= bin_count; ++j) {
    h.edges[j] = j == bin_count
                     ? hi
                     : lo + (hi - lo) * static_cast<double>(j) /
                                static_cast<double>(bin_count);
  }
  h.counts.assign(bin_count, 0);
  for (double v : values) {
    auto bin = static_cast<std::size_t>(
        std::upper_bound(h.edges.begin(), h.edges.end(), v) - h.edges.begin());
    // upper_bound gives the first edge > v; bins are [e_j, e_{j+1}).
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= bin_count) bin = bin_count - 1;
    ++h.counts[bin];
  }
  h.fitted_density.resize(bin_count);
  for (std::size_t j = 0; j < bin_count; ++j) {
    const double mid = 0.5 * (h.edges[j] + h.edges[j + 1]);
    h.fitted_density[j] =
        fit.sd > 0.0 ? normal_pdf((mid - fit.mean) / fit.sd) / fit.sd : 0.0;
  }
  return h;
}

/// Two-sided Kolmogorov-Smirnov statistic sup |F_n - F| against `cdf`.
inline double ks_statistic(std::span<const double> values,
                           const std::function<double(double)>& cdf) {
  if (values.empty()) throw domain_error("ks_statistic of an empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f,
                  f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic KS p-value with Stephens' small-sample correction.
inline double ks_p_value(double d, std::size_t n) {
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  return kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
}

}  // namespace tailweight

#endif  // TAILWEIGHT_NORMALITY_HPP
