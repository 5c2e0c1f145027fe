#ifndef TAILWEIGHT_WEIGHTS_HPP
#define TAILWEIGHT_WEIGHTS_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tailweight/error.hpp"

namespace tailweight {

/// Weights d_{i,n} = n * integral_{(i-1)/n}^{i/n} Lbar(t) dt with
/// Lbar(1 - t) = t^rho, i.e. J(s) = s^rho and a trivial slowly varying part.
class WeightScheme {
 public:
  explicit WeightScheme(double rho) : rho_(rho) {
    if (!(rho > -0.5) || !std::isfinite(rho)) {
      throw validation_error("weight index rho must be finite and > -1/2, got " +
                             std::to_string(rho));
    }
  }

  double rho() const noexcept { return rho_; }

  /// J(s) = s^rho.
  double j(double s) const { return std::pow(s, rho_); }

  /// Weight attached to the i-th largest observation, d_{n+1-i,n}:
  /// (n/(rho+1)) [(i/n)^{rho+1} - ((i-1)/n)^{rho+1}].
  double top_weight(std::size_t i, std::size_t n) const {
    if (i < 1 || i > n) {
      throw domain_error("weight index " + std::to_string(i) +
                         " outside 1.." + std::to_string(n));
    }
    const double c = rho_ + 1.0;
    const double nd = static_cast<double>(n);
    const double id = static_cast<double>(i);
    // a^c - b^c = a^c (1 - (b/a)^c) with b/a = 1 - 1/i; no cancellation.
    const double head = std::pow(id / nd, c);
    const double tail = -std::expm1(c * std::log1p(-1.0 / id));
    return nd / c * head * tail;
  }

  /// d_{i,n}.
  double weight(std::size_t i, std::size_t n) const {
    if (i < 1 || i > n) {
      throw domain_error("weight index " + std::to_string(i) +
                         " outside 1.." + std::to_string(n));
    }
    return top_weight(n + 1 - i, n);
  }

 private:
  double rho_;
};

inline double weight(const WeightScheme& scheme, std::size_t i, std::size_t n) {
  return scheme.weight(i, n);
}

/// Entry i (0-based i-1) is d_{n+1-i,n}, i = 1..k.
inline std::vector<double> top_weights(const WeightScheme& scheme,
                                       std::size_t n, std::size_t k) {
  if (k < 1 || k >= n) {
    throw domain_error("top_weights requires 1 <= k < n (k = " +
                       std::to_string(k) + ", n = " + std::to_string(n) + ")");
  }
  std::vector<double> w(k);
  for (std::size_t i = 1; i <= k; ++i) w[i - 1] = scheme.top_weight(i, n);
  return w;
}

}  // namespace tailweight

#endif  // TAILWEIGHT_WEIGHTS_HPP
