#ifndef TAILWEIGHT_MODELS_HPP
#define TAILWEIGHT_MODELS_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "tailweight/error.hpp"

namespace tailweight {

namespace detail {

inline void require_open_unit(double s, const char* function) {
  if (!(s > 0.0 && s < 1.0)) {
    throw domain_error(std::string(function) +
                       ": s must lie in (0,1), got " + std::to_string(s));
  }
}

inline void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw validation_error(std::string(name) + " must be finite and > 0, got " +
                           std::to_string(value));
  }
}

}  // namespace detail

// Quantile models are parametrized by the upper tail: upper_quantile(s)
// returns Q(1 - s), the value exceeded with probability s.

/// Q(1-s) = s^{-gamma}.
class StrictParetoModel {
 public:
  explicit StrictParetoModel(double gamma) : gamma_(gamma) {
    detail::require_positive(gamma, "gamma");
  }

  double gamma() const noexcept { return gamma_; }

  double upper_quantile(double s) const {
    detail::require_open_unit(s, "StrictParetoModel::upper_quantile");
    return std::pow(s, -gamma_);
  }

  double log_upper_quantile(double s) const {
    detail::require_open_unit(s, "StrictParetoModel::log_upper_quantile");
    return -gamma_ * std::log(s);
  }

  StrictParetoModel with_gamma(double gamma) const {
    return StrictParetoModel(gamma);
  }

 private:
  double gamma_;
};

/// Second-order Pareto: Q(1-s) = s^{-gamma} D1 (1 + D2 s^beta).
///
/// Construction rejects parameters for which Q(1-s) is non-positive somewhere
/// on (0,1). Monotonicity is not enforced: several standard benchmark
/// settings (e.g. gamma = 0.5, beta = 2, D2 = 1) are only monotone near s = 0,
/// and the formula is applied as is. `monotone_on_unit_interval()` reports it.
class HallModel {
 public:
  static constexpr std::size_t monotonicity_grid_points = 10000;

  HallModel(double gamma, double d1, double d2, double beta)
      : gamma_(gamma), d1_(d1), d2_(d2), beta_(beta) {
    detail::require_positive(gamma, "gamma");
    detail::require_positive(d1, "d1");
    detail::require_positive(beta, "beta");
    if (!std::isfinite(d2) || d2 == 0.0) {
      throw validation_error("d2 must be finite and non-zero, got " +
                             std::to_string(d2));
    }
    // s^beta ranges over (0,1), so 1 + D2 s^beta > 0 on (0,1) iff D2 >= -1.
    if (d2 < -1.0) {
      throw validation_error(
          "hall model requires 1 + d2 * s^beta > 0 on (0,1), i.e. d2 >= -1; got "
          "d2 = " + std::to_string(d2));
    }
    monotone_ = check_monotone();
  }

  double gamma() const noexcept { return gamma_; }
  double d1() const noexcept { return d1_; }
  double d2() const noexcept { return d2_; }
  double beta() const noexcept { return beta_; }
  bool monotone_on_unit_interval() const noexcept { return monotone_; }

  double upper_quantile(double s) const {
    detail::require_open_unit(s, "HallModel::upper_quantile");
    return std::pow(s, -gamma_) * d1_ * (1.0 + d2_ * std::pow(s, beta_));
  }

  double log_upper_quantile(double s) const {
    detail::require_open_unit(s, "HallModel::log_upper_quantile");
    return -gamma_ * std::log(s) + std::log(d1_) +
           std::log1p(d2_ * std::pow(s, beta_));
  }

  HallModel with_gamma(double gamma) const {
    return HallModel(gamma, d1_, d2_, beta_);
  }

 private:
  bool check_monotone() const {
    double previous = 0.0;
    for (std::size_t j = 1; j < monotonicity_grid_points; ++j) {
      const double s = static_cast<double>(j) /
                       static_cast<double>(monotonicity_grid_points);
      const double q = upper_quantile(s);
      if (j > 1 && !(q < previous)) return false;
      previous = q;
    }
    return true;
  }

  double gamma_;
  double d1_;
  double d2_;
  double beta_;
  bool monotone_ = true;
};

/// Frechet with shape 1/gamma: F(x) = exp(-x^{-1/gamma}), x > 0.
class FrechetModel {
 public:
  explicit FrechetModel(double gamma) : gamma_(gamma) {
    detail::require_positive(gamma, "gamma");
  }

  double gamma() const noexcept { return gamma_; }

  double upper_quantile(double s) const {
    detail::require_open_unit(s, "FrechetModel::upper_quantile");
    return std::pow(-std::log1p(-s), -gamma_);
  }

  double log_upper_quantile(double s) const {
    detail::require_open_unit(s, "FrechetModel::log_upper_quantile");
    return -gamma_ * std::log(-std::log1p(-s));
  }

  FrechetModel with_gamma(double gamma) const { return FrechetModel(gamma); }

 private:
  double gamma_;
};

using QuantileModel = std::variant<StrictParetoModel, HallModel, FrechetModel>;

/// Q(1 - s) for 0 < s < 1.
inline double quantile(const QuantileModel& model, double s) {
  return std::visit([s](const auto& m) { return m.upper_quantile(s); }, model);
}

/// log Q(1 - s), evaluated without forming Q(1 - s) itself.
inline double log_quantile(const QuantileModel& model, double s) {
  return std::visit([s](const auto& m) { return m.log_upper_quantile(s); },
                    model);
}

inline double model_gamma(const QuantileModel& model) {
  return std::visit([](const auto& m) { return m.gamma(); }, model);
}

inline QuantileModel with_gamma(const QuantileModel& model, double gamma) {
  return std::visit([gamma](const auto& m) -> QuantileModel {
    return m.with_gamma(gamma);
  }, model);
}

inline std::string model_name(const QuantileModel& model) {
  return std::visit([](const auto& m) -> std::string {
    using T = std::decay_t<decltype(m)>;
    if constexpr (std::is_same_v<T, StrictParetoModel>) return "pareto";
    else if constexpr (std::is_same_v<T, HallModel>) return "hall";
    else return "frechet";
  }, model);
}

/// sqrt(k) log(n/k) max_u |log l(u) / log u| with l(u) = D1 (1 + D2 u^beta),
/// maximized over a log-spaced grid on [(k/n) 1e-12, k/n]. Small values mean
/// the first-order bias condition on the slowly varying part is plausible at
/// this (n, k). The grid stops short of 0, where the ratio tends to 0 for
/// every admissible parameter set.
inline double b1_diagnostic(double d1, double d2, double beta, std::size_t n,
                            std::size_t k, std::size_t grid_points = 1000) {
  detail::require_positive(d1, "d1");
  detail::require_positive(beta, "beta");
  if (k < 1 || k >= n) {
    throw domain_error("b1_diagnostic requires 1 <= k < n");
  }
  if (grid_points < 2) {
    throw domain_error("b1_diagnostic requires at least 2 grid points");
  }
  constexpr double decades = 12.0;
  const double upper = static_cast<double>(k) / static_cast<double>(n);
  const double log_upper = std::log(upper);
  const double log_lower = log_upper - decades * std::log(10.0);
  double sup = 0.0;
  for (std::size_t j = 0; j < grid_points; ++j) {
    const double log_u =
        j + 1 == grid_points
            ? log_upper
            : log_lower + (log_upper - log_lower) * static_cast<double>(j) /
                              static_cast<double>(grid_points - 1);
    const double u = std::exp(log_u);
    const double inner = 1.0 + d2 * std::pow(u, beta);
    if (!(inner > 0.0)) {
      throw domain_error("b1_diagnostic: 1 + d2 * u^beta <= 0 at u = " +
                         std::to_string(u));
    }
    const double ratio = std::abs((std::log(d1) + std::log1p(d2 * std::pow(u, beta))) / log_u);
    if (ratio > sup) sup = ratio;
  }
  return std::sqrt(static_cast<double>(k)) *
         std::log(static_cast<double>(n) / static_cast<double>(k)) * sup;
}

enum class kn_warning { above_log_squared_n, below_ten };

struct KnWarning {
  kn_warning code;
  std::string message;
};

/// Hard check 1 <= k < n; soft warnings for k >= log^2 n (the normal
/// approximation of the studentized statistic degrades) and k < 10.
inline std::vector<KnWarning> validate_kn(std::size_t n, std::size_t k) {
  if (k < 1 || k >= n) {
    throw validation_error("sample fraction k = " + std::to_string(k) +
                           " must satisfy 1 <= k < n = " + std::to_string(n));
  }
  std::vector<KnWarning> warnings;
  const double log_n = std::log(static_cast<double>(n));
  if (static_cast<double>(k) >= log_n * log_n) {
    warnings.push_back({kn_warning::above_log_squared_n,
                        "k_n >= log^2 n (" + std::to_string(log_n * log_n) +
                            "); confidence intervals and Z_n may be unreliable"});
  }
  if (k < 10) {
    warnings.push_back(
        {kn_warning::below_ten, "k_n < 10; asymptotic approximations unreliable"});
  }
  return warnings;
}

}  // namespace tailweight

#endif  // TAILWEIGHT_MODELS_HPP
