#ifndef TAILWEIGHT_ASYMPTOTICS_HPP
#define TAILWEIGHT_ASYMPTOTICS_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "tailweight/error.hpp"
#include "tailweight/models.hpp"
#include "tailweight/quadrature.hpp"
#include "tailweight/special_functions.hpp"
#include "tailweight/weights.hpp"

namespace tailweight {

/// (n, k, rho): everything the normalizations need that does not depend on
/// the power p or on gamma.
class SampleFraction {
 public:
  SampleFraction(std::size_t n, std::size_t k, double rho)
      : n_(n), k_(k), scheme_(rho) {
    if (k < 1 || k >= n) {
      throw validation_error("sample fraction requires 1 <= k < n (k = " +
                             std::to_string(k) + ", n = " + std::to_string(n) +
                             ")");
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  double rho() const noexcept { return scheme_.rho(); }
  const WeightScheme& scheme() const noexcept { return scheme_; }

  double log_ratio() const {
    return std::log(static_cast<double>(n_) / static_cast<double>(k_));
  }
  double fraction() const {
    return static_cast<double>(k_) / static_cast<double>(n_);
  }

 private:
  std::size_t n_;
  std::size_t k_;
  WeightScheme scheme_;
};

struct AsymptoticContext {
  SampleFraction fraction;
  double p;
  double gamma;

  AsymptoticContext(SampleFraction f, double power, double tail_index)
      : fraction(f), p(power), gamma(tail_index) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw validation_error("power p must be finite and > 0");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw validation_error("gamma must be finite and > 0");
    }
  }

  AsymptoticContext(std::size_t n, std::size_t k, double rho, double power,
                    double tail_index)
      : AsymptoticContext(SampleFraction(n, k, rho), power, tail_index) {}
};

/// t_n = (rho + 1) log(n / k).
inline double t_n(const SampleFraction& f) {
  return (f.rho() + 1.0) * f.log_ratio();
}
inline double t_n(const AsymptoticContext& ctx) { return t_n(ctx.fraction); }

namespace detail {

// sqrt((1+2rho)/(1+rho)) sqrt(k) log(n/k) / sqrt(2): the rate shared by the
// normalized power sum, the studentized statistic and the interval.
inline double rate(const SampleFraction& f) {
  const double rho = f.rho();
  return std::sqrt((1.0 + 2.0 * rho) / (1.0 + rho)) *
         std::sqrt(static_cast<double>(f.k())) * f.log_ratio() /
         std::numbers::sqrt2;
}

}  // namespace detail

/// beta_n = rate / (gamma^p p), the normalization of S_n/alpha_n.
inline double beta_n(const AsymptoticContext& ctx) {
  return detail::rate(ctx.fraction) / (std::pow(ctx.gamma, ctx.p) * ctx.p);
}

/// Leading-order sigma(1/n, k/n) with Lbar slowly varying factor
/// `barell_at_fraction` (1 for the implemented weights).
inline double sigma_asymptotic(const AsymptoticContext& ctx,
                               double barell_at_fraction = 1.0) {
  if (!(barell_at_fraction > 0.0)) {
    throw domain_error("sigma_asymptotic: slowly varying factor must be > 0");
  }
  const double rho = ctx.fraction.rho();
  return ctx.p * std::pow(ctx.gamma, ctx.p) *
         std::sqrt(2.0 / ((1.0 + rho) * (1.0 + 2.0 * rho))) *
         std::pow(ctx.fraction.fraction(), rho + 0.5) *
         std::pow(ctx.fraction.log_ratio(), ctx.p - 1.0) * barell_at_fraction;
}

/// Centering mu_n for the strict Pareto model:
/// n gamma^p / (rho+1)^{p+1} * Gamma(p+1, t_n).
inline double mu_n_pareto(const AsymptoticContext& ctx) {
  const double rho = ctx.fraction.rho();
  return static_cast<double>(ctx.fraction.n()) * std::pow(ctx.gamma, ctx.p) /
         std::pow(rho + 1.0, ctx.p + 1.0) *
         upper_incomplete_gamma(ctx.p + 1.0, t_n(ctx));
}

/// Centering by quadrature for any model:
///   mu_n     = n * int_0^{k/n} u^rho (log Q(1-u))^p du
///   mu_bar_n = n * int_{1/n}^{k/n} u^rho (log Q(1-u))^p du
///              + d_{n,n} (log Q(1 - 1/n))^p.
/// The integral is taken in v = -log u, where the integrand
/// e^{-(rho+1) v} (log Q(1 - e^{-v}))^p is bounded and decays exponentially.
/// The model's gamma is used; ctx.gamma is ignored.
inline double mu_n_numeric(const QuantileModel& model,
                           const AsymptoticContext& ctx, bool use_bar,
                           double rel_tol = 1e-9) {
  const auto& f = ctx.fraction;
  const double rho = f.rho();
  const double p = ctx.p;
  const double n = static_cast<double>(f.n());
  const double v_low = f.log_ratio();
  // Truncate once the exponential factor has fallen by e^{-80}; the
  // polynomial growth of log^p Q cannot compete with that.
  const double v_high = use_bar ? std::log(n) : v_low + 80.0 / (rho + 1.0);
  auto integrand = [&](double v) {
    const double u = std::exp(-v);
    const double lq = log_quantile(model, u);
    if (!(lq > 0.0)) {
      throw domain_error("mu_n_numeric: log Q(1-u) = " + std::to_string(lq) +
                         " is not positive at u = " + std::to_string(u));
    }
    return std::exp(-(rho + 1.0) * v) * std::pow(lq, p);
  };
  double integral = 0.0;
  if (v_high > v_low) {
    // Panels of unit length in v keep each Kronrod rule well resolved.
    const auto pieces = static_cast<std::size_t>(std::ceil(v_high - v_low));
    for (std::size_t j = 0; j < pieces; ++j) {
      const double a = v_low + (v_high - v_low) * static_cast<double>(j) / pieces;
      const double b = j + 1 == pieces
                           ? v_high
                           : v_low + (v_high - v_low) * static_cast<double>(j + 1) / pieces;
      integral += integrate_adaptive(integrand, a, b, rel_tol * 1e-2,
                                     0.0, 20000).value;
    }
  }
  double mu = n * integral;
  if (use_bar) {
    const double top = f.scheme().top_weight(1, f.n());
    const double lq = log_quantile(model, 1.0 / n);
    if (!(lq > 0.0)) {
      throw domain_error("mu_n_numeric: log Q(1 - 1/n) is not positive");
    }
    mu += top * std::pow(lq, p);
  }
  return mu;
}

/// Studentized statistic
/// Z_n = rate / gamma_hat * (gamma_hat - gamma (1 + 1/t_n)).
/// Stated for rho > 0; computed for any admissible rho.
inline double z_n(double gamma_hat, double gamma_true, const SampleFraction& f) {
  if (!(gamma_hat > 0.0)) {
    throw domain_error("z_n: gamma_hat must be > 0, got " +
                       std::to_string(gamma_hat));
  }
  return detail::rate(f) / gamma_hat *
         (gamma_hat - gamma_true * (1.0 + 1.0 / t_n(f)));
}

struct ConfidenceInterval {
  double lower;
  double upper;
  double level;
};

/// Inverts Z_n at the two-sided standard normal quantile. The lower end is
/// clipped at 0 since gamma > 0.
inline ConfidenceInterval confidence_interval(double gamma_hat,
                                              const SampleFraction& f,
                                              double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw domain_error("confidence level must lie in (0,1), got " +
                       std::to_string(level));
  }
  if (!(gamma_hat > 0.0)) {
    throw domain_error("confidence_interval: gamma_hat must be > 0");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double c = 1.0 / detail::rate(f);
  const double center = gamma_hat / (1.0 + 1.0 / t_n(f));
  const double lower = center * (1.0 - z * c);
  return {lower > 0.0 ? lower : 0.0, center * (1.0 + z * c), level};
}

}  // namespace tailweight

#endif  // TAILWEIGHT_ASYMPTOTICS_HPP
