#include "advinterp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <thread>
#include <tuple>

#include "advinterp/estimators.hpp"
#include "advinterp/interpolators.hpp"

namespace advinterp::bench {

NoiseConvention parse_noise_convention(std::string_view text) {
  if (text == "variance") return NoiseConvention::Variance;
  if (text == "stddev") return NoiseConvention::StdDev;
  throw InvalidArgument("unknown noise convention '" + std::string(text) +
                        "' (expected variance or stddev)");
}

std::string to_string(NoiseConvention convention) {
  return convention == NoiseConvention::Variance ? "variance" : "stddev";
}

SyntheticCase::SyntheticCase(int id, double noise_param, NoiseConvention convention)
    : id_(id) {
  if (id < 1 || id > 3) throw InvalidArgument("SyntheticCase: case id must be 1, 2 or 3");
  if (!(noise_param > 0.0)) throw InvalidArgument("SyntheticCase: noise parameter must be > 0");
  sigma_ = convention == NoiseConvention::Variance ? std::sqrt(noise_param) : noise_param;
}

double SyntheticCase::truth(double x) const {
  switch (id_) {
    case 1: return x * x * x - x;
    case 2: return x + std::cos(3.0 * x);
    default: return std::exp(-x * x) * std::sin(5.0 * x);
  }
}

TruthFunction SyntheticCase::truth_function() const {
  return [c = *this](PointView x) { return c.truth(x[0]); };
}

PointSet generate_inputs(std::size_t n, SeededRng& rng) {
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.uniform(-2.0, 2.0);
  return PointSet(1, std::move(xs));
}

Dataset generate_case(const SyntheticCase& c, std::size_t n, SeededRng& rng) {
  if (n < 1) throw InvalidArgument("generate_case: n must be >= 1");
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.uniform(-2.0, 2.0);
    ys[i] = c.truth(xs[i]) + rng.normal(0.0, c.sigma());
  }
  return Dataset(SyntheticCase::domain(), PointSet(1, std::move(xs)), std::move(ys));
}

Method parse_method(std::string_view text) {
  if (text == "LP") return Method::LP;
  if (text == "IP1") return Method::IP1;
  if (text == "IP2") return Method::IP2;
  if (text == "IP0") return Method::IP0;
  if (text == "SI") return Method::SI;
  if (text == "1N") return Method::OneNN;
  if (text == "ZERO") return Method::Zero;
  throw InvalidArgument("unknown method '" + std::string(text) + "'");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::LP: return "LP";
    case Method::IP1: return "IP1";
    case Method::IP2: return "IP2";
    case Method::IP0: return "IP0";
    case Method::SI: return "SI";
    case Method::OneNN: return "1N";
    case Method::Zero: return "ZERO";
  }
  return "?";
}

bool is_interpolating(Method method) {
  return method == Method::IP1 || method == Method::IP2 || method == Method::IP0 ||
         method == Method::SI || method == Method::OneNN;
}

void ExperimentPlan::validate() const {
  if (cases.empty() || n_train.empty() || radii.empty() || methods.empty())
    throw InvalidArgument("ExperimentPlan: cases, n_train, radii and methods must be nonempty");
  for (int c : cases) {
    if (c < 1 || c > 3) throw InvalidArgument("ExperimentPlan: case ids must be 1, 2 or 3");
  }
  for (std::size_t n : n_train) {
    if (n < 1) throw InvalidArgument("ExperimentPlan: training sizes must be >= 1");
  }
  if (n_vali < 1 || n_test < 1 || replications < 1)
    throw InvalidArgument("ExperimentPlan: n_vali, n_test and replications must be >= 1");
  for (double r : radii) {
    if (!(r >= 0.0)) throw InvalidArgument("ExperimentPlan: radii must be >= 0");
  }
  if (!(noise_param > 0.0)) throw InvalidArgument("ExperimentPlan: noise must be > 0");
  if (!(bandwidth_min > 0.0) || !(bandwidth_max >= bandwidth_min) || bandwidth_count < 1)
    throw InvalidArgument("ExperimentPlan: invalid bandwidth grid");
  if (!(ip2_delta >= 0.0) || !(ip1_scale >= 0.0))
    throw InvalidArgument("ExperimentPlan: interpolation degrees must be >= 0");
  if (grid_resolution < 2) throw InvalidArgument("ExperimentPlan: grid_resolution must be >= 2");
  KernelSpec::singular(singular_exponent).validate();
}

namespace {

struct Unit {
  int case_id;
  std::size_t n;
  std::size_t rep;
};

struct FittedMethod {
  Method method;
  std::optional<Estimator> estimator;
  double bandwidth = std::numeric_limits<double>::quiet_NaN();
};

bool needs_lp(Method m) {
  return m == Method::LP || m == Method::IP1 || m == Method::IP2 || m == Method::IP0;
}

std::vector<ReplicationRecord> run_unit(const ExperimentPlan& plan, const Unit& unit,
                                        std::span<const double> sorted_radii) {
  const SyntheticCase c(unit.case_id, plan.noise_param, plan.noise_convention);
  const SeededRng unit_rng = SeededRng(plan.seed, static_cast<std::uint64_t>(unit.case_id))
                                 .derive(unit.n)
                                 .derive(unit.rep);
  SeededRng train_rng = unit_rng.derive(0);
  SeededRng vali_rng = unit_rng.derive(1);
  SeededRng test_rng = unit_rng.derive(2);
  const SeededRng attack_rng = unit_rng.derive(3);

  std::vector<ReplicationRecord> records;
  auto base_record = [&](Method m, double r) {
    ReplicationRecord rec;
    rec.case_id = unit.case_id;
    rec.n = unit.n;
    rec.r = r;
    rec.method = m;
    rec.rep = unit.rep;
    return rec;
  };

  try {
    const Dataset train = generate_case(c, unit.n, train_rng);
    const Dataset vali = generate_case(c, plan.n_vali, vali_rng);
    const PointSet test = generate_inputs(plan.n_test, test_rng);
    const auto truth = c.truth_function();
    const BoxDomain domain = SyntheticCase::domain();
    const auto h_grid = geometric_grid(plan.bandwidth_min, plan.bandwidth_max, plan.bandwidth_count);

    std::optional<Estimator> lp;
    double lp_h = std::numeric_limits<double>::quiet_NaN();
    const bool want_lp = std::any_of(plan.methods.begin(), plan.methods.end(), needs_lp);
    if (want_lp) {
      LocalPolyConfig cfg;
      cfg.degree = plan.degree;
      cfg.kernel = KernelSpec::rectangular();
      cfg.bandwidth = select_bandwidth(train, vali, cfg, h_grid).bandwidth;
      lp_h = cfg.bandwidth;
      lp = fit_local_polynomial(train, cfg);
    }

    std::vector<FittedMethod> fitted;
    for (Method m : plan.methods) {
      FittedMethod f{m, std::nullopt};
      switch (m) {
        case Method::LP:
          f.estimator = *lp;
          f.bandwidth = lp_h;
          break;
        case Method::IP1:
        case Method::IP2:
        case Method::IP0: {
          InterpolationConfig ic;
          ic.tau = 0.0;
          ic.delta = m == Method::IP1   ? moderate_delta(unit.n, plan.ip1_scale)
                     : m == Method::IP2 ? plan.ip2_delta
                                        : 0.0;
          f.estimator = wrap_interpolator(*lp, train, ic).as_estimator(to_string(m));
          f.bandwidth = lp_h;
          break;
        }
        case Method::SI: {
          LocalPolyConfig cfg;
          cfg.degree = plan.degree;
          cfg.kernel = KernelSpec::singular(plan.singular_exponent);
          cfg.bandwidth = select_bandwidth(train, vali, cfg, h_grid).bandwidth;
          f.estimator = fit_local_polynomial(train, cfg);
          f.bandwidth = cfg.bandwidth;
          break;
        }
        case Method::OneNN:
          f.estimator = fit_knn(train, 1);
          break;
        case Method::Zero:
          f.estimator = fit_zero();
          break;
      }
      fitted.push_back(std::move(f));
    }

    AttackSpec spec;
    spec.p = Norm::LInf;
    spec.resolution = plan.grid_resolution;
    for (const auto& f : fitted) {
      const Estimator& est = *f.estimator;
      const auto sweep = adversarial_risk_sweep(est, test, truth, sorted_radii, spec, domain,
                                                attack_rng);
      const double std_loss = standard_risk(est, test, truth, domain).value;
      const TrainingError te = training_error(est, train);
      for (double r : plan.radii) {
        const auto k = static_cast<std::size_t>(
            std::lower_bound(sorted_radii.begin(), sorted_radii.end(), r) - sorted_radii.begin());
        ReplicationRecord rec = base_record(f.method, r);
        rec.adv_loss = sweep[k].value;
        rec.std_loss = std_loss;
        rec.train_mse = te.mse;
        rec.max_resid = te.max_abs_residual;
        rec.bandwidth = f.bandwidth;
        records.push_back(std::move(rec));
      }
    }
  } catch (const std::exception& e) {
    records.clear();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (Method m : plan.methods) {
      for (double r : plan.radii) {
        ReplicationRecord rec = base_record(m, r);
        rec.adv_loss = rec.std_loss = rec.train_mse = rec.max_resid = rec.bandwidth = nan;
        rec.failed = true;
        rec.error = e.what();
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

}  // namespace

std::vector<ReplicationRecord> run_plan(const ExperimentPlan& plan, std::size_t workers) {
  plan.validate();
  std::vector<double> sorted_radii = plan.radii;
  std::sort(sorted_radii.begin(), sorted_radii.end());
  sorted_radii.erase(std::unique(sorted_radii.begin(), sorted_radii.end()), sorted_radii.end());

  std::vector<Unit> units;
  for (int c : plan.cases)
    for (std::size_t n : plan.n_train)
      for (std::size_t rep = 0; rep < plan.replications; ++rep) units.push_back({c, n, rep});

  std::vector<std::vector<ReplicationRecord>> results(units.size());
  workers = std::clamp<std::size_t>(workers, 1, units.size());
  if (workers == 1) {
    for (std::size_t u = 0; u < units.size(); ++u)
      results[u] = run_unit(plan, units[u], sorted_radii);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t u = next++; u < units.size(); u = next++)
          results[u] = run_unit(plan, units[u], sorted_radii);
      });
    }
  }

  std::vector<ReplicationRecord> out;
  for (auto& chunk : results)
    out.insert(out.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  return out;
}

MedianSE median_with_se(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median_with_se: empty group");
  std::sort(values.begin(), values.end());
  const std::size_t count = values.size();
  const double median = count % 2 == 1
                            ? values[count / 2]
                            : 0.5 * (values[count / 2 - 1] + values[count / 2]);
  const double half = static_cast<double>(count) / 2.0;
  const double spread = std::sqrt(static_cast<double>(count)) / 2.0;
  const double upper_limit = static_cast<double>(count);
  const auto lo = static_cast<std::size_t>(std::clamp(std::floor(half - spread), 1.0, upper_limit));
  const auto hi = static_cast<std::size_t>(std::clamp(std::ceil(half + spread), 1.0, upper_limit));
  return {median, 0.5 * (values[hi - 1] - values[lo - 1])};
}

std::vector<SummaryRow> aggregate(std::span<const ReplicationRecord> records) {
  using Key = std::tuple<int, std::size_t, double, int>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& rec : records) {
    auto& bucket = groups[{rec.case_id, rec.n, rec.r, static_cast<int>(rec.method)}];
    if (!rec.failed) bucket.push_back(rec.adv_loss);
  }
  std::vector<SummaryRow> out;
  for (auto& [key, losses] : groups) {
    const auto& [case_id, n, r, method] = key;
    if (losses.empty())
      throw InvalidArgument("aggregate: group (case " + std::to_string(case_id) + ", n " +
                            std::to_string(n) + ") has no successful replications");
    const std::size_t count = losses.size();
    const MedianSE m = median_with_se(std::move(losses));
    out.push_back({case_id, n, r, static_cast<Method>(method), m.median, m.se, count});
  }
  return out;
}

RadiusRule parse_radius_rule(std::string_view text) {
  if (text == "fixed") return RadiusRule::Fixed;
  if (text == "n_log_n") return RadiusRule::NOverLogN;
  throw InvalidArgument("unknown radius rule '" + std::string(text) +
                        "' (expected fixed or n_log_n)");
}

std::vector<CurseRow> curse_experiment(const ExperimentPlan& base, int case_id, Method method,
                                       RadiusRule rule, double fixed_r,
                                       std::span<const std::size_t> n_list,
                                       std::size_t workers) {
  if (n_list.empty()) throw InvalidArgument("curse_experiment: empty n list");
  std::vector<CurseRow> out;
  for (std::size_t n : n_list) {
    ExperimentPlan plan = base;
    plan.cases = {case_id};
    plan.n_train = {n};
    plan.methods = {method};
    const double nn = static_cast<double>(n);
    const double r = rule == RadiusRule::Fixed ? fixed_r : 4.0 * std::log(nn) / nn;
    plan.radii = {r};
    const auto records = run_plan(plan, workers);
    const auto summary = aggregate(records);
    out.push_back({n, r, method, summary.front().median, summary.front().se,
                   std::log(std::log(nn))});
  }
  return out;
}

}  // namespace advinterp::bench
