#ifndef TAILWEIGHT_CONFIG_HPP
#define TAILWEIGHT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailweight/error.hpp"
#include "tailweight/io.hpp"
#include "tailweight/models.hpp"
#include "tailweight/montecarlo.hpp"

// JSON plan files. Keys:
//   model: "pareto" | "hall" | "frechet"; gamma; d1, d2, beta (hall only)
//   table plans:    gammas, rhos, ps, n, k, replications, seed
//   Z_n plans:      rho, p, n, k, replications, seed,
//                   histogram_bins, chi_square_bins, ci_level (optional)

namespace tailweight::config {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw validation_error(std::string("plan field '") + name + "' is missing");
  }
  return j.at(name);
}

inline double real_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number()) {
    throw validation_error(std::string("plan field '") + name +
                           "' must be a number");
  }
  return v.get<double>();
}

inline std::uint64_t count_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw validation_error(std::string("plan field '") + name +
                         "' must be a non-negative integer");
}

inline std::vector<double> real_list(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_array() || v.empty()) {
    throw validation_error(std::string("plan field '") + name +
                           "' must be a non-empty array of numbers");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) {
      throw validation_error(std::string("plan field '") + name +
                             "' must contain only numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

template <class F>
auto with_field_context(const char* what, F&& f) {
  try {
    return f();
  } catch (const validation_error& e) {
    throw validation_error(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

/// Builds a model from "model" and its parameters. `gamma_fallback` is used
/// when the object has no "gamma" key (table plans carry a list instead).
inline QuantileModel model_from_json(const json& j, double gamma_fallback = 0.0) {
  const auto& kind_field = detail::field(j, "model");
  if (!kind_field.is_string()) {
    throw validation_error("plan field 'model' must be a string");
  }
  const std::string kind = kind_field.get<std::string>();
  const double gamma = j.contains("gamma") ? detail::real_field(j, "gamma") : gamma_fallback;
  return detail::with_field_context("model", [&]() -> QuantileModel {
    if (kind == "pareto") return StrictParetoModel(gamma);
    if (kind == "frechet") return FrechetModel(gamma);
    if (kind == "hall") {
      return HallModel(gamma, detail::real_field(j, "d1"), detail::real_field(j, "d2"),
                       detail::real_field(j, "beta"));
    }
    throw validation_error("plan field 'model' must be one of pareto, hall, "
                           "frechet; got '" + kind + "'");
  });
}

inline json model_to_json(const QuantileModel& model) {
  json j;
  j["model"] = model_name(model);
  j["gamma"] = model_gamma(model);
  if (const auto* hall = std::get_if<HallModel>(&model)) {
    j["d1"] = hall->d1();
    j["d2"] = hall->d2();
    j["beta"] = hall->beta();
  }
  return j;
}

inline SimulationPlan table_plan_from_json(const json& j) {
  SimulationPlan plan{
      model_from_json(j, detail::real_list(j, "gammas").front()),
      detail::real_list(j, "gammas"),
      detail::real_list(j, "rhos"),
      detail::real_list(j, "ps"),
      detail::count_field(j, "n"),
      detail::count_field(j, "k"),
      detail::count_field(j, "replications"),
      detail::count_field(j, "seed")};
  plan.validate();
  return plan;
}

inline ZnStudyPlan zn_plan_from_json(const json& j) {
  ZnStudyPlan plan{model_from_json(j)};
  plan.rho = detail::real_field(j, "rho");
  plan.p = detail::real_field(j, "p");
  plan.n = detail::count_field(j, "n");
  plan.k = detail::count_field(j, "k");
  plan.replications = detail::count_field(j, "replications");
  plan.master_seed = detail::count_field(j, "seed");
  if (j.contains("histogram_bins")) plan.histogram_bins = detail::count_field(j, "histogram_bins");
  if (j.contains("chi_square_bins")) plan.chi_square_bins = detail::count_field(j, "chi_square_bins");
  if (j.contains("ci_level")) plan.ci_level = detail::real_field(j, "ci_level");
  plan.validate();
  return plan;
}

inline json parse_json_file(const std::string& path) {
  const std::string text = io::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Fingerprint of a plan: FNV-1a over its compact, key-sorted dump.
inline std::string plan_hash(const json& plan) {
  return io::hex64(io::fnv1a64(plan.dump()));
}

inline std::string table_to_csv(const SummaryTable& table) {
  std::string out = "estimator,rho,gamma,p,mean,mse\n";
  for (const auto& row : table.rows) {
    out += estimator_name(row.estimator);
    for (double v : {row.rho, row.gamma, row.p, row.mean, row.mse}) {
      out += ',';
      out += io::format_double(v);
    }
    out += '\n';
  }
  return out;
}

inline std::string histogram_to_csv(const Histogram& h) {
  std::string out = "bin_left,bin_right,count,fitted_density_at_midpoint\n";
  for (std::size_t j = 0; j < h.counts.size(); ++j) {
    out += io::format_double(h.edges[j]) + ',' + io::format_double(h.edges[j + 1]) +
           ',' + std::to_string(h.counts[j]) + ',' +
           io::format_double(h.fitted_density[j]) + '\n';
  }
  return out;
}

inline json zn_summary_to_json(const ZnStudyReport& report) {
  json j;
  j["zn_mean"] = report.zn_mean;
  j["zn_sd"] = report.zn_sd;
  j["gamma_hat_mean"] = report.gamma_hat_mean;
  j["chi2_pvalue"] = report.chi2_pvalue;
  j["chi2_statistic"] = report.chi2_statistic;
  j["chi2_cells"] = report.chi2_cells;
  j["ci_coverage"] = report.ci_coverage;
  j["replications_used"] = report.zn_values.size();
  j["replications_excluded"] = report.excluded;
  return j;
}

}  // namespace tailweight::config

#endif  // TAILWEIGHT_CONFIG_HPP
