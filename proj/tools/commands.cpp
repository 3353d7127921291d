#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pbreg/baselines.hpp"
#include "pbreg/cdfbeta.hpp"
#include "pbreg/dataset.hpp"
#include "pbreg/errors.hpp"
#include "pbreg/metrics.hpp"
#include "pbreg/parallel.hpp"
#include "pbreg/resample.hpp"
#include "pbreg/simlab.hpp"
#include "pbreg/specialfn.hpp"

namespace pbreg::cli {
namespace {

class FitFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::string join(const std::vector<int>& items) {
  std::vector<std::string> text;
  for (const int v : items) text.push_back(std::to_string(v));
  return join(text);
}

std::string_view extension(OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Markdown: return "md";
    case OutputFormat::Json: return "json";
  }
  return "csv";
}

std::vector<std::string> header_notes(const RunConfig& c) {
  std::ostringstream echo;
  echo << "config: command=" << c.command;
  if (!c.input.empty()) echo << " input=" << c.input;
  if (!c.response.empty()) echo << " response=" << c.response;
  if (!c.mean_cols.empty()) echo << " mean-cols=" << join(c.mean_cols);
  if (!c.precision_cols.empty()) echo << " precision-cols=" << join(c.precision_cols);
  echo << " alpha=" << format_number(c.alpha);
  if (c.command == "bootstrap") echo << " B=" << c.B;
  if (c.command == "simulate") echo << " R=" << c.R << " n=" << join(c.n) << " scenarios=" << join(c.scenarios);
  return {
      std::string("pbreg ") + PBREG_VERSION,
      "seed: " + (c.seed ? std::to_string(*c.seed) : std::string("none")),
      echo.str(),
  };
}

std::string num(double v) { return format_number(v, 6); }

Dataset load(const RunConfig& c) {
  if (c.input.empty()) throw InputError("--input is required");
  if (c.response.empty()) throw InputError("--response is required");
  if (c.mean_cols.empty()) throw InputError("--mean-cols is required");
  const CsvFrame frame = read_csv_file(c.input);
  Dataset data = make_dataset(frame, c.response, c.mean_cols, c.precision_cols);
  data.spec.validate();
  if (data.spec.rows() < 3) throw InputError("need at least 3 rows");
  return data;
}

// Runs a model-fitting step, reporting any failure other than a bootstrap
// failure as a fit failure.
template <typename Fn>
auto fitting(Fn&& fn) {
  try {
    return fn();
  } catch (const BootstrapError&) {
    throw;
  } catch (const std::exception& e) {
    throw FitFailure(e.what());
  }
}

CdfBetaModel fit_model(const Dataset& data) {
  return fitting([&] {
    CdfBetaModel model = fit_cdf_beta(data.y, data.spec);
    if (!model.fit.converged) {
      throw FitFailure("beta regression did not converge in " + std::to_string(model.fit.iterations) +
                       " iterations");
    }
    return model;
  });
}

double two_sided_normal_p(double z) { return 2.0 * normal_cdf(-std::abs(z)); }

}  // namespace

std::vector<Report> cmd_fit(const RunConfig& config) {
  const Dataset data = load(config);
  const CdfBetaModel model = fit_model(data);
  const BetaFit& fit = model.fit;

  Table t;
  t.notes = header_notes(config);
  t.header = {"component", "term", "estimate", "std.error", "statistic", "p.value"};
  auto add = [&](const char* component, const std::string& term, double est, double se) {
    const double z = est / se;
    t.add_row({component, term, num(est), num(se), num(z), num(two_sided_normal_p(z))});
  };
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) add("mean", data.spec.mean_names[j], fit.beta(j), fit.se_beta(j));
  for (Eigen::Index j = 0; j < fit.gamma.size(); ++j) {
    add("precision", data.spec.precision_names[j], fit.gamma(j), fit.se_gamma(j));
  }
  t.add_row({"model", "pseudo.R2", num(fit.pseudo_r2), "-", "-", "-"});
  t.add_row({"model", "loglik", num(fit.loglik), "-", "-", "-"});
  return {{"fit", std::move(t)}};
}

std::vector<Report> cmd_compare(const RunConfig& config) {
  const Dataset data = load(config);
  const Eigen::VectorXd& y = data.y;
  const Eigen::MatrixXd& x = data.spec.X;

  Table t;
  t.notes = header_notes(config);
  t.notes.push_back(
      "WLS is two-step feasible WLS with an ln(e^2) variance model; variance-power weighting is the GLS method");
  t.header = {"method", "RMSE", "Cov80", "Cov95"};
  auto linear = [&](const std::string& label, const LinearFit& fit) {
    const Eigen::VectorXd y_hat = predict(fit, x);
    const IntervalPrediction p80 = predict_interval(fit, x, 0.20);
    const IntervalPrediction p95 = predict_interval(fit, x, 0.05);
    t.add_row({label, num(rmse(y, y_hat)), num(coverage(y, p80.lower, p80.upper)),
               num(coverage(y, p95.lower, p95.upper))});
  };
  fitting([&] {
    linear("OLS", fit_ols(y, x));
    linear("Log-OLS(Duan)", fit_log_ols(y, x));
    linear("WLS", fit_wls(y, x));
    return 0;
  });
  const CdfBetaModel model = fit_model(data);
  fitting([&] {
    const Eigen::VectorXd y_hat = predict_y(model, x, data.spec.Z);
    const PredictionInterval p80 = prediction_interval(model, x, data.spec.Z, 0.20);
    const PredictionInterval p95 = prediction_interval(model, x, data.spec.Z, 0.05);
    t.add_row({"CDF-beta", num(rmse(y, y_hat)), num(coverage(y, p80.lower, p80.upper)),
               num(coverage(y, p95.lower, p95.upper))});
    return 0;
  });
  return {{"compare", std::move(t)}};
}

std::vector<Report> cmd_bootstrap(const RunConfig& config) {
  if (!config.seed) throw InputError("--seed is required for bootstrap");
  if (config.B < 2) throw InputError("--B must be at least 2");
  const Dataset data = load(config);
  BootstrapOptions options;
  options.replicates = config.B;
  options.alpha = config.alpha;
  options.seed = *config.seed;
  options.workers = config.workers;

  const Eigen::MatrixXd x_new = config.bands ? data.spec.X : Eigen::MatrixXd(0, data.spec.X.cols());
  const Eigen::MatrixXd z_new = config.bands ? data.spec.Z : Eigen::MatrixXd(0, data.spec.Z.cols());
  const BootstrapResult r = fitting([&] { return bootstrap(data.y, data.spec, x_new, z_new, options); });

  std::vector<Report> reports;
  Table t;
  t.notes = header_notes(config);
  t.notes.push_back("replicates: " + std::to_string(r.replicates) + " failed: " + std::to_string(r.n_failed));
  t.header = {"component", "term", "estimate", "boot.se", "ci.lower", "ci.upper"};
  const Eigen::Index p = data.spec.mean_size();
  for (Eigen::Index j = 0; j < r.theta_hat.size(); ++j) {
    const bool mean = j < p;
    const std::string& term = mean ? data.spec.mean_names[j] : data.spec.precision_names[j - p];
    t.add_row({mean ? "mean" : "precision", term, num(r.theta_hat(j)), num(r.se_theta(j)), num(r.ci_lower(j)),
               num(r.ci_upper(j))});
  }
  reports.push_back({"bootstrap", std::move(t)});

  if (config.bands) {
    Table b;
    b.notes = header_notes(config);
    b.header = {"row", "lower.median", "lower.p025", "lower.p975", "upper.median", "upper.p025", "upper.p975"};
    const PredictionBands& s = r.bands;
    for (Eigen::Index i = 0; i < s.lower_median.size(); ++i) {
      b.add_row({std::to_string(i + 1), num(s.lower_median(i)), num(s.lower_p025(i)), num(s.lower_p975(i)),
                 num(s.upper_median(i)), num(s.upper_p025(i)), num(s.upper_p975(i))});
    }
    reports.push_back({"bootstrap_bands", std::move(b)});
  }
  return reports;
}

std::vector<Report> cmd_simulate(const RunConfig& config) {
  if (!config.seed) throw InputError("--seed is required for simulate");
  if (config.R < 1) throw InputError("--R must be at least 1");
  if (config.n.empty()) throw InputError("--n must list at least one sample size");
  std::vector<ScenarioId> ids;
  for (const std::string& s : config.scenarios) ids.push_back(parse_scenario(s));
  for (const int n : config.n) {
    if (n < 10) throw InputError("--n values must be at least 10");
  }
  std::vector<Report> reports;
  for (const ScenarioId id : ids) {
    const SimTable sim = monte_carlo(id, config.n, config.R, *config.seed, config.workers);
    Table t = sim.to_table();
    t.notes = header_notes(config);
    t.notes.push_back("scenario: " + std::string(scenario_name(id)));
    reports.push_back({"simulate_" + std::string(scenario_name(id)), std::move(t)});
  }
  return reports;
}

std::vector<Report> cmd_diagnose(const RunConfig& config) {
  const Dataset data = load(config);
  Table t;
  t.notes = header_notes(config);
  t.header = {"diagnostic", "term", "statistic", "p.value"};
  fitting([&] {
    const BreuschPagan bp = breusch_pagan(data.y, data.spec.X);
    t.add_row({"breusch_pagan", "df=" + std::to_string(bp.df), num(bp.statistic), num(bp.p_value)});
    const Eigen::VectorXd v = vif(data.spec.X);
    Eigen::Index k = 0;
    for (std::size_t j = 0; j < data.spec.mean_names.size(); ++j) {
      if (data.spec.mean_names[j] == kInterceptName) continue;
      t.add_row({"vif", data.spec.mean_names[j], num(v(k++)), "-"});
    }
    return 0;
  });
  const CdfBetaModel model = fit_model(data);
  const PitResult pit = fitting([&] { return pit_residuals(model); });
  t.add_row({"pit_ks", "-", num(pit.ks_statistic), num(pit.p_value)});
  return {{"diagnose", std::move(t)}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"CDF-based beta regression toolkit"};
  app.set_version_flag("--version", std::string(PBREG_VERSION));
  app.require_subcommand(1);

  std::string format = "csv";
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--alpha", config.alpha, "Interval miscoverage level")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--out", config.out, "Output directory (default: print to stdout)");
    sub->add_option("--format", format, "csv, markdown or json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}));
    sub->add_option("--workers", config.workers, "Worker threads (0 = all cores)");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "CSV file with a header row")->required();
    sub->add_option("--response", config.response, "Response column")->required();
    sub->add_option("--mean-cols", config.mean_cols, "Mean-model columns (comma list)")
        ->delimiter(',')
        ->required();
    sub->add_option("--precision-cols", config.precision_cols, "Precision-model columns (comma list)")
        ->delimiter(',');
  };

  CLI::App* fit = app.add_subcommand("fit", "Fit CDF-beta regression and print coefficients");
  CLI::App* compare = app.add_subcommand("compare", "Compare OLS, Log-OLS, WLS and CDF-beta in-sample");
  CLI::App* boot = app.add_subcommand("bootstrap", "Case-resampling bootstrap of the CDF-beta fit");
  CLI::App* diagnose = app.add_subcommand("diagnose", "Breusch-Pagan, VIF and PIT residual checks");
  CLI::App* simulate = app.add_subcommand("simulate", "Run the Monte Carlo study");
  for (CLI::App* sub : {fit, compare, boot, diagnose, simulate}) add_common(sub);
  for (CLI::App* sub : {fit, compare, boot, diagnose}) add_data(sub);
  CLI::Option* boot_seed = boot->add_option("--seed", seed, "Random seed")->required();
  boot->add_option("--B", config.B, "Bootstrap replicates");
  boot->add_flag("--bands", config.bands, "Also report per-row prediction interval bands");
  CLI::Option* sim_seed = simulate->add_option("--seed", seed, "Random seed")->required();
  simulate->add_option("--R", config.R, "Monte Carlo replications");
  config.n = {25, 50, 75, 100};
  config.scenarios = {"S1", "S2", "S3"};
  simulate->add_option("--n", config.n, "Sample sizes (comma list)")->delimiter(',');
  simulate->add_option("--scenarios", config.scenarios, "Scenarios (comma list of S1, S2, S3)")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  if (format == "markdown") config.format = OutputFormat::Markdown;
  if (format == "json") config.format = OutputFormat::Json;
  if (boot_seed->count() > 0 || sim_seed->count() > 0) config.seed = seed;

  try {
    std::vector<Report> reports;
    if (fit->parsed()) {
      config.command = "fit";
      reports = cmd_fit(config);
    } else if (compare->parsed()) {
      config.command = "compare";
      reports = cmd_compare(config);
    } else if (boot->parsed()) {
      config.command = "bootstrap";
      reports = cmd_bootstrap(config);
    } else if (diagnose->parsed()) {
      config.command = "diagnose";
      reports = cmd_diagnose(config);
    } else {
      config.command = "simulate";
      reports = cmd_simulate(config);
    }

    auto render = [](const Table& t, OutputFormat f, std::ostream& os) {
      switch (f) {
        case OutputFormat::Csv: t.write_csv(os); break;
        case OutputFormat::Markdown: t.write_markdown(os); break;
        case OutputFormat::Json: t.write_json(os); break;
      }
    };
    if (config.out.empty()) {
      for (const Report& r : reports) render(r.table, config.format, out);
      return kOk;
    }
    std::filesystem::create_directories(config.out);
    std::vector<OutputFormat> formats = {config.format};
    if (config.command == "simulate") {
      formats = {OutputFormat::Csv, OutputFormat::Markdown};
      if (config.format == OutputFormat::Json) formats.push_back(OutputFormat::Json);
    }
    for (const Report& r : reports) {
      for (const OutputFormat f : formats) {
        const std::filesystem::path path =
            std::filesystem::path(config.out) / (r.name + "." + std::string(extension(f)));
        std::ofstream file(path, std::ios::binary);
        if (!file) throw InputError("cannot write " + path.string());
        render(r.table, f, file);
        if (!file) throw InputError("failed writing " + path.string());
        out << path.string() << '\n';
      }
    }
    return kOk;
  } catch (const BootstrapError& e) {
    err << "error: " << e.what() << '\n';
    return kBootstrapError;
  } catch (const FitFailure& e) {
    err << "fit failed: " << e.what() << '\n';
    return kFitError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace pbreg::cli
