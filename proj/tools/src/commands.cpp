#include "advinterp/cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "advinterp/phase.hpp"
#include "advinterp/theory.hpp"

namespace advinterp::cli {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const RunConfig& config, const std::string& name, const std::string& body) {
  const fs::path dir = config.get_string("out", ".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = dir / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << body;
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

std::size_t workers_of(const RunConfig& config) {
  const auto w = config.get_int("workers", 1);
  if (w < 1) throw ConfigError("workers", "workers must be >= 1");
  return static_cast<std::size_t>(w);
}

std::uint64_t seed_of(const RunConfig& config) {
  return static_cast<std::uint64_t>(config.get_int("seed", 1));
}

std::size_t positive(const RunConfig& config, const std::string& key, std::int64_t fallback) {
  const auto v = config.get_int(key, fallback);
  if (v < 1) throw ConfigError(key, "'" + key + "' must be >= 1");
  return static_cast<std::size_t>(v);
}

template <typename Fn>
auto as_config_error(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidArgument& e) {
    throw ConfigError(key, "invalid value for key '" + key + "': " + e.what());
  }
}

std::string pass_flag(bool pass) { return pass ? "pass" : "fail"; }

}  // namespace

std::string records_csv(std::span<const bench::ReplicationRecord> records) {
  std::string out = std::string(kRecordsHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.case_id) + "," + std::to_string(r.n) + "," + format_double(r.r) + "," +
           bench::to_string(r.method) + "," + std::to_string(r.rep) + "," +
           format_double(r.adv_loss) + "," + format_double(r.std_loss) + "," +
           format_double(r.train_mse) + "," + format_double(r.max_resid) + "," +
           format_double(r.bandwidth) + "\n";
  }
  return out;
}

std::string summary_csv(std::span<const bench::SummaryRow> rows) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.case_id) + "," + std::to_string(r.n) + "," + format_double(r.r) + "," +
           bench::to_string(r.method) + "," + format_double(r.median) + "," +
           format_double(r.se) + "\n";
  }
  return out;
}

bench::ExperimentPlan plan_from_config(const RunConfig& config) {
  bench::ExperimentPlan plan;
  plan.seed = seed_of(config);
  if (config.has("cases")) {
    plan.cases.clear();
    for (auto c : config.get_ints("cases", {})) plan.cases.push_back(static_cast<int>(c));
  }
  if (config.has("n_train")) {
    plan.n_train.clear();
    for (auto n : config.get_ints("n_train", {})) {
      if (n < 1) throw ConfigError("n_train", "'n_train' entries must be >= 1");
      plan.n_train.push_back(static_cast<std::size_t>(n));
    }
  }
  plan.radii = config.get_doubles("radii", plan.radii);
  if (config.has("methods")) {
    plan.methods.clear();
    for (const auto& m : config.get_strings("methods", {}))
      plan.methods.push_back(as_config_error("methods", [&] { return bench::parse_method(m); }));
  }
  plan.replications = positive(config, "replications", static_cast<std::int64_t>(plan.replications));
  plan.n_vali = positive(config, "n_vali", static_cast<std::int64_t>(plan.n_vali));
  plan.n_test = positive(config, "n_test", static_cast<std::int64_t>(plan.n_test));
  plan.noise_param = config.get_double("noise", plan.noise_param);
  plan.noise_convention = as_config_error("noise_convention", [&] {
    return bench::parse_noise_convention(config.get_string("noise_convention", "variance"));
  });
  const auto degree = config.get_int("degree", static_cast<std::int64_t>(plan.degree));
  if (degree < 0) throw ConfigError("degree", "'degree' must be >= 0");
  plan.degree = static_cast<std::size_t>(degree);
  plan.bandwidth_min = config.get_double("bandwidth_min", plan.bandwidth_min);
  plan.bandwidth_max = config.get_double("bandwidth_max", plan.bandwidth_max);
  plan.bandwidth_count =
      positive(config, "bandwidth_count", static_cast<std::int64_t>(plan.bandwidth_count));
  plan.singular_exponent = config.get_double("singular_exponent", plan.singular_exponent);
  plan.ip1_scale = config.get_double("ip1_scale", plan.ip1_scale);
  plan.ip2_delta = config.get_double("ip2_delta", plan.ip2_delta);
  plan.grid_resolution =
      positive(config, "grid_resolution", static_cast<std::int64_t>(plan.grid_resolution));
  as_config_error("plan", [&] {
    plan.validate();
    return 0;
  });
  return plan;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  const auto plan = plan_from_config(config);
  const auto records = bench::run_plan(plan, workers_of(config));
  std::vector<bench::ReplicationRecord> ok;
  std::size_t failures = 0;
  for (const auto& r : records) {
    if (r.failed) {
      ++failures;
    } else {
      ok.push_back(r);
    }
  }
  const auto summary = bench::aggregate(ok);
  write_file(config, "records.csv", records_csv(records));
  write_file(config, "summary.csv", summary_csv(summary));
  log << "simulate: " << records.size() << " records, " << summary.size() << " summary rows\n";
  if (failures > 0) {
    log << "simulate: " << failures << " records from failed replications\n";
    return kRuntimeFailure;
  }
  return kSuccess;
}

int cmd_phase_diagram(const RunConfig& config, std::ostream& log) {
  using namespace theory;
  const auto regime = as_config_error(
      "regime", [&] { return parse_phase_regime(config.get_string("regime", "low")); });
  const auto beta = as_config_error(
      "beta", [&] { return parse_rational(config.get_string("beta", "1")); });
  if (beta <= theory::Rational(0)) throw ConfigError("beta", "'beta' must be > 0");
  const auto d = config.get_int("d", 1);
  if (d < 1) throw ConfigError("d", "'d' must be >= 1");

  std::vector<Rational> grid;
  if (config.has("r_exponents")) {
    for (const auto& s : config.get_strings("r_exponents", {}))
      grid.push_back(as_config_error("r_exponents", [&] { return parse_rational(s); }));
    if (grid.empty()) throw ConfigError("r_exponents", "'r_exponents' must not be empty");
  } else {
    for (int k = 1; k <= 30; ++k) grid.emplace_back(k, 20);
  }
  const auto cells = phase_diagram(beta, static_cast<int>(d), regime, grid);
  std::string body = std::string(kPhaseHeader) + "\n";
  for (const auto& c : cells) {
    body += theory::to_string(c.r_exponent) + "," + to_string(c.regime) + "," +
            to_string(c.dominant) + "," + (c.boundary ? "1" : "0") + "\n";
  }
  write_file(config, "phase.csv", body);
  log << "phase-diagram: " << cells.size() << " rows\n";
  return kSuccess;
}

int cmd_theory_check(const RunConfig& config, std::ostream& log) {
  using namespace theory;
  const double sigma = config.get_double("sigma", 1.0);
  if (!(sigma > 0.0)) throw ConfigError("sigma", "'sigma' must be > 0");
  const auto deltas = config.get_doubles("deltas", {0.0, 0.3, 0.5, 1.0, 2.0, 4.0});
  const auto n_mc = positive(config, "n_mc", 1'000'000);
  const auto ks = config.get_ints("ks", {1, 10, 100, 1000});
  const auto k_mc = positive(config, "k_mc", 20'000);
  const auto cost_n = config.get_doubles("cost_n", {1e3, 1e4, 1e5});
  const double cost_nrd = config.get_double("cost_nrd", 0.01);
  const auto designs = positive(config, "cost_designs", 200);
  const auto resolution = positive(config, "cost_resolution", 10'000);
  const bool corrupt = config.get_int("corrupt_closed_form", 0) != 0;
  const SeededRng root(seed_of(config), 0);
  const std::size_t workers = workers_of(config);
  for (double delta : deltas) {
    if (!(delta >= 0.0)) throw ConfigError("deltas", "'deltas' entries must be >= 0");
  }
  for (auto k : ks) {
    if (k < 1) throw ConfigError("ks", "'ks' entries must be >= 1");
  }

  std::string body = std::string(kTheoryHeader) + "\n";
  bool all_pass = true;
  auto row = [&](const std::string& check, const std::string& param, double closed, double mc,
                 double se, bool pass) {
    all_pass = all_pass && pass;
    body += check + "," + param + "," + format_double(closed) + "," + format_double(mc) + "," +
            format_double(se) + "," + pass_flag(pass) + "\n";
  };

  const std::string sig = " sigma=" + format_double(sigma);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double delta = deltas[i];
    double closed = soft_threshold_second_moment(delta, sigma);
    if (corrupt) closed *= 1.1;
    SeededRng rng = root.derive(100 + i);
    const auto mc = soft_threshold_moment_mc(delta, sigma, rng, n_mc);
    const std::string param = "delta=" + format_double(delta) + sig;
    row("soft_moment", param, closed, mc.estimate, mc.std_error,
        std::abs(mc.estimate - closed) <= 3.0 * mc.std_error + 1e-12);
    const double stein = stein_lower_bound(delta, sigma);
    row("stein_bound", param, stein, mc.estimate, mc.std_error,
        stein <= mc.estimate + 3.0 * mc.std_error);
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto k = static_cast<std::size_t>(ks[i]);
    SeededRng rng = root.derive(200 + i);
    const auto em = expected_max_soft_threshold(k, 0.0, sigma, rng, k_mc);
    row("emax_bound", "k=" + std::to_string(k) + " delta=0" + sig, em.analytic_bound, em.estimate,
        em.std_error, em.estimate <= em.analytic_bound + 3.0 * em.std_error);
  }
  for (std::size_t i = 0; i < cost_n.size(); ++i) {
    RateParams params;
    params.n = cost_n[i];
    params.d = 1;
    params.delta = 0.0;
    params.sigma = sigma;
    params.r = cost_nrd / cost_n[i];
    const auto mc = mc_interpolation_cost(params, designs, resolution, root.derive(300 + i), workers);
    const double exact = interpolation_cost_1d(params.n, params.r, 0.0, sigma, resolution);
    row("cost_scaling",
        "n=" + format_double(params.n) + " nrd=" + format_double(cost_nrd) + sig, exact,
        mc.estimate, mc.std_error, std::abs(mc.estimate - exact) <= 3.0 * mc.std_error + 1e-12);
  }
  write_file(config, "theory.csv", body);
  log << "theory-check: " << (all_pass ? "all checks pass" : "some checks FAIL") << "\n";
  return kSuccess;
}

int cmd_curse(const RunConfig& config, std::ostream& log) {
  RunConfig plan_config("simulate");
  for (const auto& [k, v] : config.values()) {
    if (allowed_keys("simulate").count(k) > 0) plan_config.set(k, v);
  }
  auto plan = plan_from_config(plan_config);
  const auto case_id = config.get_int("case", 2);
  if (case_id < 1 || case_id > 3) throw ConfigError("case", "'case' must be 1, 2 or 3");
  std::vector<bench::Method> methods;
  for (const auto& m : config.get_strings("method", {"SI"}))
    methods.push_back(as_config_error("method", [&] { return bench::parse_method(m); }));
  const auto rule = as_config_error(
      "r_rule", [&] { return bench::parse_radius_rule(config.get_string("r_rule", "fixed")); });
  const double r = config.get_double("r", 0.1);
  if (!(r >= 0.0)) throw ConfigError("r", "'r' must be >= 0");
  std::vector<std::size_t> n_list;
  for (auto n : config.get_ints("n_list", {80, 150, 300})) {
    if (n < 3) throw ConfigError("n_list", "'n_list' entries must be >= 3");
    n_list.push_back(static_cast<std::size_t>(n));
  }
  if (n_list.empty()) throw ConfigError("n_list", "'n_list' must not be empty");

  std::string body = std::string(kCurseHeader) + "\n";
  for (auto method : methods) {
    const auto rows = bench::curse_experiment(plan, static_cast<int>(case_id), method, rule, r,
                                              n_list, workers_of(config));
    for (const auto& row : rows) {
      body += std::to_string(row.n) + "," + format_double(row.r) + "," +
              bench::to_string(row.method) + "," + format_double(row.median) + "," +
              format_double(row.se) + "," + format_double(row.log_log_n) + "\n";
    }
  }
  write_file(config, "curse.csv", body);
  log << "curse: " << methods.size() * n_list.size() << " rows\n";
  return kSuccess;
}

int cmd_rate_report(const RunConfig& config, std::ostream& log) {
  using namespace theory;
  RateParams params;
  params.n = config.get_double("n", 1e4);
  params.r = config.get_double("r", 0.0);
  params.beta = config.get_double("beta", 1.0);
  params.d = static_cast<int>(config.get_int("d", 1));
  params.delta = config.get_double("delta", 0.0);
  params.sigma = config.get_double("sigma", 1.0);
  as_config_error("rate", [&] {
    params.validate();
    return 0;
  });
  RegimeConstants constants;
  constants.c3 = config.get_double("c3", constants.c3);
  constants.c_low = config.get_double("c_low", constants.c_low);
  constants.c4 = config.get_double("c4", constants.c4);
  const auto report = rate_report(params, constants);
  std::string body = std::string(kRateHeader) + "\n";
  body += format_double(params.n) + "," + format_double(params.r) + "," +
          format_double(params.beta) + "," + std::to_string(params.d) + "," +
          format_double(params.delta) + "," + format_double(params.sigma) + "," +
          to_string(report.regime) + "," + format_double(report.attack_term) + "," +
          format_double(report.estimation_term) + "," +
          format_double(report.interpolation_term) + "," + to_string(report.dominant) + "\n";
  write_file(config, "rate.csv", body);
  log << "rate-report: regime " << to_string(report.regime) << ", dominant "
      << to_string(report.dominant) << "\n";
  return kSuccess;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial risk of interpolating regression estimators"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::optional<std::int64_t> seed;
    std::optional<std::int64_t> workers;
    std::optional<std::string> out;
  };
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> subs{
      {"simulate", "Replicated synthetic experiments; writes records.csv and summary.csv"},
      {"phase-diagram", "Dominant rate term over an r-exponent grid; writes phase.csv"},
      {"theory-check", "Closed forms against Monte-Carlo oracles; writes theory.csv"},
      {"curse", "Adversarial loss of one method across sample sizes; writes curse.csv"},
      {"rate-report", "Rate decomposition for one parameter set; writes rate.csv"},
  };
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "key=value configuration file");
    sub->add_option("--seed", flags.seed, "Base random seed");
    sub->add_option("--workers", flags.workers, "Maximum parallel workers");
    sub->add_option("--out", flags.out, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    RunConfig config = flags.config.empty() ? RunConfig(name) : RunConfig::load(name, flags.config);
    if (flags.seed) config.set("seed", std::to_string(*flags.seed));
    if (flags.workers) config.set("workers", std::to_string(*flags.workers));
    if (flags.out) config.set("out", *flags.out);

    if (name == "simulate") return cmd_simulate(config, out);
    if (name == "phase-diagram") return cmd_phase_diagram(config, out);
    if (name == "theory-check") return cmd_theory_check(config, out);
    if (name == "curse") return cmd_curse(config, out);
    return cmd_rate_report(config, out);
  } catch (const ConfigError& e) {
    err << "config error";
    if (!e.key().empty()) err << " [" << e.key() << "]";
    err << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace advinterp::cli
