#ifndef TAILWEIGHT_MONTECARLO_HPP
#define TAILWEIGHT_MONTECARLO_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tailweight/asymptotics.hpp"
#include "tailweight/error.hpp"
#include "tailweight/estimators.hpp"
#include "tailweight/models.hpp"
#include "tailweight/normality.hpp"
#include "tailweight/parallel.hpp"
#include "tailweight/rng.hpp"
#include "tailweight/sampling.hpp"

namespace tailweight {

enum class estimator_kind { wps, hill, pickands, moment };

inline std::string estimator_name(estimator_kind kind) {
  switch (kind) {
    case estimator_kind::wps: return "wps";
    case estimator_kind::hill: return "hill";
    case estimator_kind::pickands: return "pickands";
    case estimator_kind::moment: return "moment";
  }
  return "unknown";
}

/// Replications whose estimator raised a sample-dependent error are dropped;
/// a cell losing more than this fraction fails the run.
inline constexpr double max_exclusion_fraction = 0.01;

struct SimulationPlan {
  QuantileModel model;  // its gamma is replaced by each entry of `gammas`
  std::vector<double> gammas;
  std::vector<double> rhos;
  std::vector<double> ps;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t replications = 0;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (gammas.empty()) throw validation_error("plan.gammas must not be empty");
    if (rhos.empty()) throw validation_error("plan.rhos must not be empty");
    if (ps.empty()) throw validation_error("plan.ps must not be empty");
    if (replications < 1) throw validation_error("plan.replications must be >= 1");
    validate_kn(n, k);
    for (double g : gammas) (void)with_gamma(model, g);
    for (double r : rhos) (void)WeightScheme(r);
    for (double p : ps) {
      if (!(p > 0.0)) throw validation_error("plan.ps entries must be > 0");
    }
  }
};

struct SummaryRow {
  estimator_kind estimator;
  double rho;
  double gamma;
  double p;
  double mean;
  double mse;
  std::size_t used;
  std::size_t excluded;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
  bool includes_pickands = true;

  const SummaryRow* find(estimator_kind e, double rho, double gamma, double p) const {
    for (const auto& r : rows) {
      if (r.estimator == e && r.rho == rho && r.gamma == gamma && r.p == p) return &r;
    }
    return nullptr;
  }
};

namespace detail {

inline constexpr double excluded_value = std::numeric_limits<double>::quiet_NaN();

template <class F>
double guarded(F&& f) {
  try {
    return f();
  } catch (const precondition_error&) {
  } catch (const degenerate_sample_error&) {
  } catch (const domain_error&) {
  }
  return excluded_value;
}

struct CellAccumulator {
  double sum = 0.0;
  double sq_err = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;

  void add(double estimate, double truth) {
    if (std::isnan(estimate)) {
      ++excluded;
      return;
    }
    sum += estimate;
    sq_err += (estimate - truth) * (estimate - truth);
    ++used;
  }
};

inline void check_exclusions(const CellAccumulator& acc, std::size_t replications,
                             const std::string& cell) {
  if (static_cast<double>(acc.excluded) >
      max_exclusion_fraction * static_cast<double>(replications)) {
    throw numerical_error("simulation cell " + cell + ": " +
                          std::to_string(acc.excluded) + " of " +
                          std::to_string(replications) +
                          " replications excluded (limit 1%)");
  }
}

}  // namespace detail

/// Mean / MSE table. Replication r draws one block of n uniforms from stream
/// (master_seed, r); every gamma maps the same block through its quantile
/// function and every estimator sees the same sorted sample. Comparison
/// estimators do not depend on (rho, p): they are computed once per
/// (gamma, r) and repeated in each (rho, p) block.
inline SummaryTable run_table(const SimulationPlan& plan,
                              std::size_t threads = default_thread_count()) {
  plan.validate();
  const std::size_t g_count = plan.gammas.size();
  const std::size_t wps_cells = plan.rhos.size() * plan.ps.size();
  constexpr std::size_t comparison_cells = 3;
  const std::size_t per_gamma = wps_cells + comparison_cells;
  const std::size_t stride = g_count * per_gamma;
  const bool with_pickands = 4 * plan.k <= plan.n;

  std::vector<QuantileModel> models;
  for (double g : plan.gammas) models.push_back(with_gamma(plan.model, g));
  std::vector<std::vector<double>> weights;
  for (double rho : plan.rhos) {
    weights.push_back(top_weights(WeightScheme(rho), plan.n, plan.k));
  }
  std::vector<double> alphas;  // indexed [rho][p]
  for (double rho : plan.rhos) {
    for (double p : plan.ps) {
      alphas.push_back(alpha_n(EstimatorSpec(p, plan.k, WeightScheme(rho)), plan.n));
    }
  }

  std::vector<double> estimates(plan.replications * stride);
  parallel_for(plan.replications, threads, [&](std::size_t r) {
    RngStream stream(plan.master_seed, r);
    const auto uniforms = draw_uniforms(plan.n, stream);
    std::vector<double> x;
    double* out = estimates.data() + r * stride;
    for (std::size_t gi = 0; gi < g_count; ++gi) {
      transform_uniforms(models[gi], uniforms, x);
      const SortedSample sorted(x);
      double* cell = out + gi * per_gamma;
      for (std::size_t ri = 0; ri < plan.rhos.size(); ++ri) {
        for (std::size_t pi = 0; pi < plan.ps.size(); ++pi) {
          const double p = plan.ps[pi];
          const double alpha = alphas[ri * plan.ps.size() + pi];
          *cell++ = detail::guarded([&] {
            return std::pow(power_sum(sorted, p, weights[ri]) / alpha, 1.0 / p);
          });
        }
      }
      *cell++ = detail::guarded([&] { return hill(sorted, plan.k); });
      *cell++ = with_pickands
                    ? detail::guarded([&] { return pickands(sorted, plan.k); })
                    : detail::excluded_value;
      *cell++ = detail::guarded([&] { return moment_estimator(sorted, plan.k); });
    }
  });

  // Reduction strictly in replication order.
  std::vector<detail::CellAccumulator> acc(stride);
  for (std::size_t r = 0; r < plan.replications; ++r) {
    for (std::size_t gi = 0; gi < g_count; ++gi) {
      for (std::size_t c = 0; c < per_gamma; ++c) {
        acc[gi * per_gamma + c].add(estimates[r * stride + gi * per_gamma + c],
                                    plan.gammas[gi]);
      }
    }
  }

  SummaryTable table;
  table.includes_pickands = with_pickands;
  auto make_row = [&](estimator_kind e, double rho, double gamma, double p,
                      const detail::CellAccumulator& a) {
    const double used = static_cast<double>(a.used);
    return SummaryRow{e, rho, gamma, p, a.sum / used, a.sq_err / used, a.used,
                      a.excluded};
  };
  for (std::size_t ri = 0; ri < plan.rhos.size(); ++ri) {
    for (std::size_t gi = 0; gi < g_count; ++gi) {
      const double gamma = plan.gammas[gi];
      for (std::size_t pi = 0; pi < plan.ps.size(); ++pi) {
        const double rho = plan.rhos[ri];
        const double p = plan.ps[pi];
        const auto& wa = acc[gi * per_gamma + ri * plan.ps.size() + pi];
        detail::check_exclusions(wa, plan.replications,
                                 "wps(rho=" + std::to_string(rho) + ", gamma=" +
                                     std::to_string(gamma) + ", p=" +
                                     std::to_string(p) + ")");
        table.rows.push_back(make_row(estimator_kind::wps, rho, gamma, p, wa));
        const auto* comparison = &acc[gi * per_gamma + wps_cells];
        const estimator_kind kinds[] = {estimator_kind::hill,
                                        estimator_kind::pickands,
                                        estimator_kind::moment};
        for (std::size_t c = 0; c < comparison_cells; ++c) {
          if (kinds[c] == estimator_kind::pickands && !with_pickands) continue;
          detail::check_exclusions(comparison[c], plan.replications,
                                   estimator_name(kinds[c]) + "(gamma=" +
                                       std::to_string(gamma) + ")");
          table.rows.push_back(make_row(kinds[c], rho, gamma, p, comparison[c]));
        }
      }
    }
  }
  return table;
}

struct ZnStudyPlan {
  QuantileModel model;  // carries the true gamma
  double rho = 1.0;
  double p = 1.0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t replications = 0;
  std::uint64_t master_seed = 0;
  std::size_t histogram_bins = 30;
  std::size_t chi_square_bins = 20;
  double ci_level = 0.95;

  void validate() const {
    if (!(rho > 0.0)) {
      throw validation_error("Z_n study requires rho > 0 (bias-corrected regime), "
                             "got " + std::to_string(rho));
    }
    (void)WeightScheme(rho);
    if (!(p > 0.0)) throw validation_error("Z_n study requires p > 0");
    if (replications < 1) throw validation_error("replications must be >= 1");
    validate_kn(n, k);
    if (histogram_bins < 1) throw validation_error("histogram_bins must be >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
      throw validation_error("ci_level must lie in (0,1)");
    }
  }
};

struct ZnStudyReport {
  std::vector<double> zn_values;
  std::vector<double> gamma_hats;
  double zn_mean = 0.0;
  double zn_sd = 0.0;
  double gamma_hat_mean = 0.0;
  Histogram histogram;
  double chi2_statistic = 0.0;
  double chi2_pvalue = 0.0;
  std::size_t chi2_cells = 0;
  double ci_coverage = 0.0;  // fraction of intervals containing the true gamma
  std::size_t excluded = 0;
};

/// Per replication r: sample n values from stream (master_seed, r), estimate
/// gamma with the weighted power sum, studentize it and check whether the
/// asymptotic interval covers the truth.
inline ZnStudyReport run_zn_study(const ZnStudyPlan& plan,
                                  std::size_t threads = default_thread_count()) {
  plan.validate();
  const double gamma_true = model_gamma(plan.model);
  const SampleFraction fraction(plan.n, plan.k, plan.rho);
  const EstimatorSpec spec(plan.p, plan.k, WeightScheme(plan.rho));
  const auto weights = top_weights(spec.scheme, plan.n, plan.k);
  const double alpha = alpha_n(spec, plan.n);

  std::vector<double> gamma_hats(plan.replications);
  parallel_for(plan.replications, threads, [&](std::size_t r) {
    RngStream stream(plan.master_seed, r);
    const SortedSample sorted(sample_model(plan.model, plan.n, stream));
    gamma_hats[r] = detail::guarded([&] {
      return std::pow(power_sum(sorted, plan.p, weights) / alpha, 1.0 / plan.p);
    });
  });

  ZnStudyReport report;
  std::size_t covered = 0;
  for (double g : gamma_hats) {
    if (std::isnan(g)) {
      ++report.excluded;
      continue;
    }
    report.gamma_hats.push_back(g);
    report.zn_values.push_back(z_n(g, gamma_true, fraction));
    const auto ci = confidence_interval(g, fraction, plan.ci_level);
    if (ci.lower <= gamma_true && gamma_true <= ci.upper) ++covered;
  }
  if (static_cast<double>(report.excluded) >
      max_exclusion_fraction * static_cast<double>(plan.replications)) {
    throw numerical_error("Z_n study: " + std::to_string(report.excluded) + " of " +
                          std::to_string(plan.replications) +
                          " replications excluded (limit 1%)");
  }
  if (report.zn_values.empty()) {
    throw numerical_error("Z_n study: every replication was excluded");
  }
  const auto zfit = mean_sd(report.zn_values);
  report.zn_mean = zfit.mean;
  report.zn_sd = zfit.sd;
  report.gamma_hat_mean = mean_sd(report.gamma_hats).mean;
  report.histogram = histogram(report.zn_values, plan.histogram_bins);
  if (report.zn_values.size() >= 50) {
    const auto chi = chi_square_normality_test(report.zn_values, plan.chi_square_bins);
    report.chi2_statistic = chi.statistic;
    report.chi2_pvalue = chi.p_value;
    report.chi2_cells = chi.cells;
  } else {
    report.chi2_pvalue = std::numeric_limits<double>::quiet_NaN();
  }
  report.ci_coverage = static_cast<double>(covered) /
                       static_cast<double>(report.zn_values.size());
  return report;
}

}  // namespace tailweight

#endif  // TAILWEIGHT_MONTECARLO_HPP
