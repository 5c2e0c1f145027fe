#ifndef TAILWEIGHT_SAMPLING_HPP
#define TAILWEIGHT_SAMPLING_HPP

#include <cstddef>
#include <vector>

#include "tailweight/error.hpp"
#include "tailweight/models.hpp"
#include "tailweight/rng.hpp"

namespace tailweight {

/// Inverse-transform draws X_j = Q(1 - U_j) in stream order (unsorted).
inline std::vector<double> sample_model(const QuantileModel& model,
                                        std::size_t n, RngStream& stream) {
  if (n < 1) throw domain_error("sample_model requires n >= 1");
  std::vector<double> values(n);
  for (auto& x : values) x = quantile(model, stream.uniform01());
  return values;
}

/// Maps a block of uniforms through a model. Used when several models share
/// the same draws (common random numbers).
inline void transform_uniforms(const QuantileModel& model,
                               const std::vector<double>& uniforms,
                               std::vector<double>& out) {
  out.resize(uniforms.size());
  std::visit([&](const auto& m) {
    for (std::size_t j = 0; j < uniforms.size(); ++j) {
      out[j] = m.upper_quantile(uniforms[j]);
    }
  }, model);
}

inline std::vector<double> draw_uniforms(std::size_t n, RngStream& stream) {
  std::vector<double> u(n);
  for (auto& x : u) x = stream.uniform01();
  return u;
}

}  // namespace tailweight

#endif  // TAILWEIGHT_SAMPLING_HPP
