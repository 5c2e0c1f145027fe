#ifndef TAILWEIGHT_ESTIMATORS_HPP
#define TAILWEIGHT_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tailweight/error.hpp"
#include "tailweight/weights.hpp"

namespace tailweight {

/// Unordered observations X_1..X_n.
class Sample {
 public:
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw validation_error("sample must not be empty");
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Ascending order statistics X_{1,n} <= ... <= X_{n,n}.
class SortedSample {
 public:
  /// Sorts (stable) and rejects NaN.
  explicit SortedSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw validation_error("sample must not be empty");
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (std::isnan(values_[j])) {
        throw validation_error("sample contains NaN at position " +
                               std::to_string(j + 1));
      }
    }
    std::stable_sort(values_.begin(), values_.end());
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  /// X_{j,n}, 1-based.
  double order_stat(std::size_t j) const { return values_[j - 1]; }

  /// X_{n+1-i,n}: the i-th largest value, 1-based.
  double top(std::size_t i) const { return values_[values_.size() - i]; }

 private:
  std::vector<double> values_;
};

inline SortedSample order_statistics(const Sample& sample) {
  return SortedSample(std::vector<double>(sample.values().begin(),
                                          sample.values().end()));
}

struct EstimatorSpec {
  double p;
  std::size_t k;
  WeightScheme scheme;

  EstimatorSpec(double power, std::size_t k_n, WeightScheme weights)
      : p(power), k(k_n), scheme(weights) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw validation_error("power p must be finite and > 0, got " +
                             std::to_string(p));
    }
    if (k < 1) throw validation_error("k_n must be >= 1");
  }
};

namespace detail {

inline void require_fraction(std::size_t n, std::size_t k, const char* who) {
  if (k < 1 || k >= n) {
    throw domain_error(std::string(who) + " requires 1 <= k < n (k = " +
                       std::to_string(k) + ", n = " + std::to_string(n) + ")");
  }
}

inline double integer_aware_pow(double base, double p) {
  if (p == 1.0) return base;
  if (p == 2.0) return base * base;
  return std::pow(base, p);
}

}  // namespace detail

/// S_n(p) = sum_{i=1}^{k} d_{n+1-i,n} (log X_{n+1-i,n})^p, with precomputed
/// top weights (length >= k). Requires X_{n+1-k,n} > 1.
inline double power_sum(const SortedSample& sorted, double p,
                        std::span<const double> weights) {
  const std::size_t n = sorted.size();
  const std::size_t k = weights.size();
  detail::require_fraction(n, k, "power_sum");
  const double smallest = sorted.top(k);
  if (!(smallest > 1.0)) {
    throw precondition_error(
        "power_sum: order statistic X_{" + std::to_string(n + 1 - k) + "," +
        std::to_string(n) + "} = " + std::to_string(smallest) +
        " must exceed 1 so that every log in the window is positive");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    sum += weights[i - 1] * detail::integer_aware_pow(std::log(sorted.top(i)), p);
  }
  return sum;
}

inline double power_sum(const SortedSample& sorted, const EstimatorSpec& spec) {
  detail::require_fraction(sorted.size(), spec.k, "power_sum");
  const auto w = top_weights(spec.scheme, sorted.size(), spec.k);
  return power_sum(sorted, spec.p, w);
}

/// alpha_n = (k/(rho+1)) (k/n)^rho (log(n/k))^p.
inline double alpha_n(const EstimatorSpec& spec, std::size_t n) {
  detail::require_fraction(n, spec.k, "alpha_n");
  const double k = static_cast<double>(spec.k);
  const double ratio = static_cast<double>(n) / k;
  return k / (spec.scheme.rho() + 1.0) * spec.scheme.j(1.0 / ratio) *
         std::pow(std::log(ratio), spec.p);
}

/// (S_n(p) / alpha_n)^{1/p}.
inline double gamma_wps(const SortedSample& sorted, const EstimatorSpec& spec) {
  const double s = power_sum(sorted, spec);
  return std::pow(s / alpha_n(spec, sorted.size()), 1.0 / spec.p);
}

namespace detail {

inline double reference_stat(const SortedSample& sorted, std::size_t k,
                             const char* who) {
  require_fraction(sorted.size(), k, who);
  const double ref = sorted.order_stat(sorted.size() - k);
  if (!(ref > 0.0)) {
    throw domain_error(std::string(who) + ": X_{n-k,n} = " +
                       std::to_string(ref) + " must be positive");
  }
  return ref;
}

}  // namespace detail

/// (1/k) sum (log(X_{n+1-i,n} / X_{n-k,n}))^j.
inline double moment_stat(const SortedSample& sorted, std::size_t k, int j) {
  if (j != 1 && j != 2) throw domain_error("moment_stat supports j = 1 or 2");
  const double ref = detail::reference_stat(sorted, k, "moment_stat");
  double sum = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double r = std::log(sorted.top(i) / ref);
    sum += j == 1 ? r : r * r;
  }
  return sum / static_cast<double>(k);
}

inline double hill(const SortedSample& sorted, std::size_t k) {
  detail::reference_stat(sorted, k, "hill");
  return moment_stat(sorted, k, 1);
}

/// Dekkers-Einmahl-de Haan: M1 + 1 - (1/2) (1 - M1^2/M2)^{-1}.
inline double moment_estimator(const SortedSample& sorted, std::size_t k) {
  const double m1 = moment_stat(sorted, k, 1);
  const double m2 = moment_stat(sorted, k, 2);
  if (!(m2 > 0.0)) {
    throw degenerate_sample_error(
        "moment estimator: second log-moment is zero (all top values equal)");
  }
  const double ratio = m1 * m1 / m2;
  if (ratio == 1.0) {
    throw degenerate_sample_error(
        "moment estimator: M1^2 / M2 = 1 makes the estimator undefined");
  }
  return m1 + 1.0 - 0.5 / (1.0 - ratio);
}

/// Pickands: log((X_{n-k+1} - X_{n-2k+1}) / (X_{n-2k+1} - X_{n-4k+1})) / log 2.
inline double pickands(const SortedSample& sorted, std::size_t k) {
  const std::size_t n = sorted.size();
  if (k < 1 || 4 * k > n) {
    throw domain_error("pickands requires 1 <= k and 4k <= n (k = " +
                       std::to_string(k) + ", n = " + std::to_string(n) + ")");
  }
  const double x1 = sorted.order_stat(n - k + 1);
  const double x2 = sorted.order_stat(n - 2 * k + 1);
  const double x4 = sorted.order_stat(n - 4 * k + 1);
  const double upper = x1 - x2;
  const double lower = x2 - x4;
  if (!(upper > 0.0) || !(lower > 0.0)) {
    throw degenerate_sample_error("pickands: order statistic spacings must be "
                                  "strictly positive");
  }
  return std::log(upper / lower) / std::log(2.0);
}

}  // namespace tailweight

#endif  // TAILWEIGHT_ESTIMATORS_HPP
