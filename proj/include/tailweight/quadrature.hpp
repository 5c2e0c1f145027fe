#ifndef TAILWEIGHT_QUADRATURE_HPP
#define TAILWEIGHT_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "tailweight/error.hpp"

namespace tailweight {

struct QuadratureResult {
  double value;
  double error_estimate;
  std::size_t intervals;
};

namespace detail {

// 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kronrod_weights[7];
  double gauss = fc * gauss_weights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kronrod_weights[j] * sum;
    if (j % 2 == 1) gauss += gauss_weights[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval. Bisects the
/// panel with the largest error estimate until the total estimate falls under
/// max(abs_tol, rel_tol * |integral|). Throws numerical_error when the panel
/// budget is exhausted.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    double rel_tol = 1e-10,
                                    double abs_tol = 0.0,
                                    std::size_t max_panels = 20000) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw domain_error("integrate_adaptive requires finite limits");
  }
  if (a == b) return {0.0, 0.0, 0};
  std::priority_queue<detail::Panel> panels;
  auto first = detail::gauss_kronrod_15(f, a, b);
  double total = first.value;
  double total_error = first.error;
  panels.push(first);
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (panels.size() >= max_panels) {
      throw numerical_error(
          "adaptive quadrature did not converge on [" + std::to_string(a) +
          ", " + std::to_string(b) + "]: " + std::to_string(panels.size()) +
          " panels, value " + std::to_string(total) + ", error estimate " +
          std::to_string(total_error));
    }
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  double value = 0.0;
  double error = 0.0;
  const std::size_t count = panels.size();
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  return {value, error, count};
}

}  // namespace tailweight

#endif  // TAILWEIGHT_QUADRATURE_HPP
