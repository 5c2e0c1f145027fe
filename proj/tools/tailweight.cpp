// Command-line front end: sample, estimate, table, zn-study, diagnose-b1.
//
// Exit codes: 0 success, 2 validation error, 3 I/O error, 4 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailweight/config.hpp"
#include "tailweight/io.hpp"
#include "tailweight/tailweight.hpp"

namespace tw = tailweight;
using json = nlohmann::json;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_io = 3;
constexpr int exit_numerical = 4;

int exit_code_for(tw::error_category category) {
  switch (category) {
    case tw::error_category::io: return exit_io;
    case tw::error_category::numerical: return exit_numerical;
    default: return exit_validation;
  }
}

struct ModelFlags {
  std::optional<std::string> model;
  std::optional<double> gamma;
  std::optional<double> d1;
  std::optional<double> d2;
  std::optional<double> beta;

  void add_to(CLI::App* app) {
    app->add_option("--model", model, "pareto | hall | frechet")
        ->check(CLI::IsMember({"pareto", "hall", "frechet"}));
    app->add_option("--gamma", gamma, "tail index (> 0)");
    app->add_option("--d1", d1, "Hall scale D1 (> 0)");
    app->add_option("--d2", d2, "Hall second-order coefficient D2 (!= 0)");
    app->add_option("--beta", beta, "Hall second-order index (> 0)");
  }

  // Flags override keys of a plan object.
  void merge_into(json& j) const {
    if (model) j["model"] = *model;
    if (gamma) j["gamma"] = *gamma;
    if (d1) j["d1"] = *d1;
    if (d2) j["d2"] = *d2;
    if (beta) j["beta"] = *beta;
  }
};

json provenance(const std::string& command, const json& plan) {
  json meta;
  meta["tool"] = "tailweight";
  meta["version"] = TAILWEIGHT_VERSION;
  meta["command"] = command;
  if (plan.contains("seed")) meta["seed"] = plan["seed"];
  meta["plan"] = plan;
  meta["plan_hash"] = tw::config::plan_hash(plan);
  return meta;
}

void write_artifact(const std::string& path, const std::string& content,
                    const json& meta) {
  tw::io::write_file(path, content);
  tw::io::write_file(path + ".meta.json", meta.dump(2) + "\n");
}

void emit(const std::optional<std::string>& out, const std::string& content,
          const json& meta) {
  if (out) {
    write_artifact(*out, content, meta);
  } else {
    std::cout << content;
  }
}

json warnings_json(const std::vector<tw::KnWarning>& warnings) {
  json w = json::array();
  for (const auto& x : warnings) w.push_back(x.message);
  return w;
}

void print_warnings(const std::vector<tw::KnWarning>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w.message << "\n";
}

void report_model_warnings(const tw::QuantileModel& model) {
  if (const auto* hall = std::get_if<tw::HallModel>(&model)) {
    if (!hall->monotone_on_unit_interval()) {
      std::cerr << "warning: hall quantile Q(1-s) is not monotone on (0,1) for "
                   "these parameters; samples follow the formula as given\n";
    }
  }
}

// ---------------------------------------------------------------- sample

struct SampleCommand {
  ModelFlags model;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool header = false;
  std::optional<std::string> out;

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand("sample", "draw a sample from a quantile model");
    model.add_to(app);
    app->add_option("--n", n, "sample size")->required();
    app->add_option("--seed", seed, "master seed")->required();
    app->add_option("--stream", stream, "stream index (default 0)");
    app->add_flag("--header", header, "write a header row 'x'");
    app->add_option("--out", out, "output CSV path (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    json plan;
    model.merge_into(plan);
    const auto m = tw::config::model_from_json(plan);
    report_model_warnings(m);
    if (n < 1) throw tw::validation_error("--n must be >= 1");
    auto rng = tw::make_stream(seed, stream);
    const auto values = tw::sample_model(m, n, rng);
    json meta_plan = tw::config::model_to_json(m);
    meta_plan["n"] = n;
    meta_plan["seed"] = seed;
    meta_plan["stream"] = stream;
    emit(out, tw::io::sample_to_csv(values, header), provenance("sample", meta_plan));
  }
};

// ---------------------------------------------------------------- estimate

struct EstimateCommand {
  std::string input;
  std::string method = "all";
  std::size_t k = 0;
  double p = 1.0;
  double rho = 0.0;
  double level = 0.95;
  std::string format = "json";
  std::optional<std::string> out;

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand("estimate", "estimate the tail index of a data file");
    app->add_option("--input", input, "CSV file, one positive real per line")->required();
    app->add_option("--method", method, "wps | hill | pickands | moment | all")
        ->check(CLI::IsMember({"wps", "hill", "pickands", "moment", "all"}));
    app->add_option("--k", k, "number of upper order statistics")->required();
    app->add_option("--p", p, "power of the log-sum (wps)");
    app->add_option("--rho", rho, "weight index rho > -1/2 (wps)");
    app->add_option("--level", level, "confidence level for the wps interval");
    app->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--out", out, "output path (default stdout)");
    app->callback([this] { run(); });
  }

  json estimate_one(const std::string& which, const tw::SortedSample& sorted) const {
    json r;
    if (which == "hill") {
      r["value"] = tw::hill(sorted, k);
    } else if (which == "moment") {
      r["value"] = tw::moment_estimator(sorted, k);
    } else if (which == "pickands") {
      r["value"] = tw::pickands(sorted, k);
    } else {
      const tw::EstimatorSpec spec(p, k, tw::WeightScheme(rho));
      const double g = tw::gamma_wps(sorted, spec);
      const tw::SampleFraction fraction(sorted.size(), k, rho);
      const auto ci = tw::confidence_interval(g, fraction, level);
      r["value"] = g;
      r["p"] = p;
      r["rho"] = rho;
      r["t_n"] = tw::t_n(fraction);
      r["ci"] = {{"level", ci.level}, {"lower", ci.lower}, {"upper", ci.upper}};
    }
    return r;
  }

  void run() const {
    const tw::SortedSample sorted(tw::io::read_sample_csv(input));
    const auto warnings = tw::validate_kn(sorted.size(), k);
    print_warnings(warnings);

    const std::vector<std::string> methods =
        method == "all" ? std::vector<std::string>{"wps", "hill", "pickands", "moment"}
                        : std::vector<std::string>{method};
    json report;
    report["n"] = sorted.size();
    report["k"] = k;
    report["warnings"] = warnings_json(warnings);
    report["estimates"] = json::object();
    for (const auto& m : methods) {
      try {
        report["estimates"][m] = estimate_one(m, sorted);
      } catch (const tw::error& e) {
        if (methods.size() == 1 || e.category() == tw::error_category::io) {
          throw tw::error(e.category(), m + ": " + e.what());
        }
        report["estimates"][m] = {{"error", e.what()}};
      }
    }

    std::string content;
    if (format == "json") {
      content = report.dump(2) + "\n";
    } else {
      content = "estimator,value,t_n,ci_lower,ci_upper,ci_level\n";
      for (const auto& m : methods) {
        const auto& r = report["estimates"][m];
        content += m + ",";
        if (r.contains("value")) content += tw::io::format_double(r["value"].get<double>());
        if (r.contains("ci")) {
          content += "," + tw::io::format_double(r["t_n"].get<double>()) + "," +
                     tw::io::format_double(r["ci"]["lower"].get<double>()) + "," +
                     tw::io::format_double(r["ci"]["upper"].get<double>()) + "," +
                     tw::io::format_double(r["ci"]["level"].get<double>());
        } else {
          content += ",,,,";
        }
        content += "\n";
      }
    }
    json meta_plan{{"input", input}, {"method", method}, {"k", k},
                   {"p", p},         {"rho", rho},       {"level", level}};
    emit(out, content, provenance("estimate", meta_plan));
  }
};

// ---------------------------------------------------------------- table

struct TableCommand {
  std::string plan_path;
  ModelFlags model;
  std::optional<std::size_t> n, k, replications;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t* threads;

  explicit TableCommand(std::size_t* thread_count) : threads(thread_count) {}

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand("table", "Monte Carlo mean/MSE table from a plan");
    app->add_option("--plan", plan_path, "JSON plan file")->required();
    model.add_to(app);
    app->add_option("--n", n, "override plan sample size");
    app->add_option("--k", k, "override plan sample fraction");
    app->add_option("--replications", replications, "override plan replications");
    app->add_option("--seed", seed, "override plan seed");
    app->add_option("--out", out, "output CSV path")->required();
    app->callback([this] { run(); });
  }

  void run() const {
    json plan_json = tw::config::parse_json_file(plan_path);
    model.merge_into(plan_json);
    if (n) plan_json["n"] = *n;
    if (k) plan_json["k"] = *k;
    if (replications) plan_json["replications"] = *replications;
    if (seed) plan_json["seed"] = *seed;
    const auto plan = tw::config::table_plan_from_json(plan_json);
    print_warnings(tw::validate_kn(plan.n, plan.k));
    for (double g : plan.gammas) report_model_warnings(tw::with_gamma(plan.model, g));
    const auto table = tw::run_table(plan, *threads);
    json meta = provenance("table", plan_json);
    std::size_t excluded = 0;
    for (const auto& row : table.rows) excluded += row.excluded;
    meta["excluded_estimates"] = excluded;
    write_artifact(out, tw::config::table_to_csv(table), meta);
  }
};

// ---------------------------------------------------------------- zn-study

struct ZnStudyCommand {
  std::optional<std::string> plan_path;
  ModelFlags model;
  std::optional<double> rho, p, level;
  std::optional<std::size_t> n, k, replications, bins, chi_bins;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::string> values_out;
  std::size_t* threads;

  explicit ZnStudyCommand(std::size_t* thread_count) : threads(thread_count) {}

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand("zn-study", "distribution of the studentized estimator");
    app->add_option("--plan", plan_path, "JSON plan file (flags override)");
    model.add_to(app);
    app->add_option("--rho", rho, "weight index (> 0)");
    app->add_option("--p", p, "power");
    app->add_option("--n", n, "sample size");
    app->add_option("--k", k, "sample fraction");
    app->add_option("--replications", replications, "number of replications");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--bins", bins, "histogram bins (default 30)");
    app->add_option("--chi-square-bins", chi_bins, "equiprobable chi-square cells (default 20)");
    app->add_option("--level", level, "confidence level for the coverage count");
    app->add_option("--out", out,
                    "output prefix: writes PREFIX.summary.json and PREFIX.histogram.csv")
        ->required();
    app->add_option("--values-out", values_out, "also write every Z_n value to this CSV");
    app->callback([this] { run(); });
  }

  void run() const {
    json plan_json = plan_path ? tw::config::parse_json_file(*plan_path) : json::object();
    model.merge_into(plan_json);
    if (rho) plan_json["rho"] = *rho;
    if (p) plan_json["p"] = *p;
    if (n) plan_json["n"] = *n;
    if (k) plan_json["k"] = *k;
    if (replications) plan_json["replications"] = *replications;
    if (seed) plan_json["seed"] = *seed;
    if (bins) plan_json["histogram_bins"] = *bins;
    if (chi_bins) plan_json["chi_square_bins"] = *chi_bins;
    if (level) plan_json["ci_level"] = *level;
    const auto plan = tw::config::zn_plan_from_json(plan_json);
    print_warnings(tw::validate_kn(plan.n, plan.k));
    report_model_warnings(plan.model);
    const auto report = tw::run_zn_study(plan, *threads);

    const json meta = provenance("zn-study", plan_json);
    json summary = tw::config::zn_summary_to_json(report);
    summary["provenance"] = meta;
    tw::io::write_file(out + ".summary.json", summary.dump(2) + "\n");
    write_artifact(out + ".histogram.csv", tw::config::histogram_to_csv(report.histogram),
                   meta);
    if (values_out) {
      std::string csv = "zn,gamma_hat\n";
      for (std::size_t i = 0; i < report.zn_values.size(); ++i) {
        csv += tw::io::format_double(report.zn_values[i]) + "," +
               tw::io::format_double(report.gamma_hats[i]) + "\n";
      }
      write_artifact(*values_out, csv, meta);
    }
    std::cout << summary.dump(2) << "\n";
  }
};

// ---------------------------------------------------------------- diagnose-b1

struct DiagnoseCommand {
  double d1 = 1.0;
  double d2 = 0.0;
  double beta = 1.0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t grid = 1000;

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand(
        "diagnose-b1", "first-order bias diagnostic for l(u) = D1 (1 + D2 u^beta)");
    app->add_option("--d1", d1, "D1 (> 0)");
    app->add_option("--d2", d2, "D2");
    app->add_option("--beta", beta, "beta (> 0)");
    app->add_option("--n", n, "sample size")->required();
    app->add_option("--k", k, "sample fraction")->required();
    app->add_option("--grid", grid, "log-spaced grid points (default 1000)");
    app->callback([this] { run(); });
  }

  void run() const {
    const auto warnings = tw::validate_kn(n, k);
    const double value = tw::b1_diagnostic(d1, d2, beta, n, k, grid);
    json r{{"d1", d1},     {"d2", d2}, {"beta", beta}, {"n", n},
           {"k", k},       {"grid_points", grid}, {"b1", value},
           {"warnings", warnings_json(warnings)}};
    std::cout << r.dump(2) << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tailweight: tail index estimation with weighted power sums of "
               "extreme order statistics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", TAILWEIGHT_VERSION);
  std::size_t threads = tw::default_thread_count();
  app.add_option("--threads", threads,
                 "worker threads (default TAILWEIGHT_THREADS or hardware); "
                 "results do not depend on it")
      ->check(CLI::PositiveNumber);

  SampleCommand sample;
  EstimateCommand estimate;
  TableCommand table(&threads);
  ZnStudyCommand zn(&threads);
  DiagnoseCommand diagnose;
  sample.add_to(app);
  estimate.add_to(app);
  table.add_to(app);
  zn.add_to(app);
  diagnose.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_validation;
  } catch (const tw::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
  return 0;
}
