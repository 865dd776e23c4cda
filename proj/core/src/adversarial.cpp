#include "advinterp/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace advinterp {

namespace {

double squared(double t) { return t * t; }

void clamp_into(std::vector<double>& z, const BoxDomain& domain) {
  for (std::size_t j = 0; j < z.size(); ++j)
    z[j] = std::clamp(z[j], domain.lower(j), domain.upper(j));
}

// Uniform draw from B_p(x, r); clamping into the domain keeps it in the
// ball because every coordinate moves toward x.
void draw_in_ball(PointView x, double r, Norm p, SeededRng& rng, std::vector<double>& z) {
  const std::size_t d = x.size();
  auto& eng = rng.engine();
  switch (p) {
    case Norm::LInf: {
      boost::random::uniform_real_distribution<double> u(-r, r);
      for (std::size_t j = 0; j < d; ++j) z[j] = x[j] + u(eng);
      break;
    }
    case Norm::L2: {
      boost::random::normal_distribution<double> g;
      double norm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        z[j] = g(eng);
        norm += z[j] * z[j];
      }
      norm = std::sqrt(norm);
      boost::random::uniform_real_distribution<double> u(0.0, 1.0);
      const double radius = r * std::pow(u(eng), 1.0 / static_cast<double>(d));
      for (std::size_t j = 0; j < d; ++j)
        z[j] = x[j] + (norm > 0.0 ? radius * z[j] / norm : 0.0);
      break;
    }
    case Norm::L1: {
      boost::random::exponential_distribution<double> e;
      boost::random::uniform_real_distribution<double> u(0.0, 1.0);
      double total = e(eng);
      for (std::size_t j = 0; j < d; ++j) {
        z[j] = e(eng);
        total += z[j];
      }
      for (std::size_t j = 0; j < d; ++j) {
        const double sign = u(eng) < 0.5 ? -1.0 : 1.0;
        z[j] = x[j] + sign * r * z[j] / total;
      }
      break;
    }
  }
}

class LossSearch {
 public:
  LossSearch(const Estimator& est, PointView x, double target, const BoxDomain& domain)
      : est_(est), x_(x), target_(target), domain_(domain) {}

  double loss(PointView z) const { return squared(target_ - est_.predict(z)); }

  double grid(const AttackSpec& spec) const {
    const PointSet cands = clipped_ball_grid(x_, spec, domain_);
    double best = 0.0;
    for (std::size_t i = 0; i < cands.size(); ++i) best = std::max(best, loss(cands[i]));
    return best;
  }

  double random(const AttackSpec& spec, SeededRng& rng, const SearchOptions& opt) const {
    const std::size_t d = x_.size();
    std::vector<double> best_point(x_.begin(), x_.end());
    double best = loss(x_);
    std::vector<double> z(d);
    for (std::size_t k = 0; k < opt.random_draws; ++k) {
      draw_in_ball(x_, spec.r, spec.p, rng, z);
      clamp_into(z, domain_);
      const double l = loss(z);
      if (l > best) {
        best = l;
        best_point = z;
      }
    }
    double step = spec.r / 4.0;
    for (std::size_t s = 0; s < opt.refine_steps; ++s) {
      bool improved = false;
      for (std::size_t j = 0; j < d; ++j) {
        for (double sign : {-1.0, 1.0}) {
          z = best_point;
          z[j] += sign * step;
          clamp_into(z, domain_);
          if (distance(z, x_, spec.p) > spec.r) continue;
          const double l = loss(z);
          if (l > best) {
            best = l;
            best_point = z;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return best;
  }

  double training_points(double r, Norm p) const {
    const Dataset* data = est_.training();
    if (data == nullptr || data->dim() != x_.size()) return 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < data->size(); ++i) {
      const PointView xi = data->x(i);
      if (distance(xi, x_, p) <= r && domain_.contains(xi)) best = std::max(best, loss(xi));
    }
    return best;
  }

 private:
  const Estimator& est_;
  PointView x_;
  double target_;
  const BoxDomain& domain_;
};

}  // namespace

double adversarial_loss_point(const Estimator& est, PointView x, double target,
                              const AttackSpec& spec, const BoxDomain& domain,
                              SeededRng& rng, const SearchOptions& options) {
  spec.validate();
  if (x.size() != domain.dim() || !domain.contains(x))
    throw InvalidArgument("adversarial_loss_point: x must lie inside the domain");
  LossSearch search(est, x, target, domain);
  if (spec.r == 0.0) {
    double best = search.loss(x);
    if (options.include_training_points) best = std::max(best, search.training_points(0.0, spec.p));
    return best;
  }
  bool use_grid = options.mode == SearchMode::Grid ||
                  (options.mode == SearchMode::Auto && domain.dim() <= 3);
  double best = 0.0;
  if (use_grid) {
    try {
      best = search.grid(spec);
    } catch (const GridTooLarge&) {
      if (options.mode == SearchMode::Grid) throw;
      use_grid = false;
    }
  }
  if (!use_grid) best = search.random(spec, rng, options);
  if (options.include_training_points)
    best = std::max(best, search.training_points(spec.r, spec.p));
  return best;
}

std::vector<double> adversarial_loss_sweep(const Estimator& est, PointView x, double target,
                                           std::span<const double> radii,
                                           const AttackSpec& spec, const BoxDomain& domain,
                                           SeededRng& rng, const SearchOptions& options) {
  if (!std::is_sorted(radii.begin(), radii.end()))
    throw InvalidArgument("adversarial_loss_sweep: radii must be ascending");
  std::vector<double> out;
  out.reserve(radii.size());
  double running = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    AttackSpec s = spec;
    s.r = radii[k];
    SeededRng child = rng.derive(k);
    running = std::max(running, adversarial_loss_point(est, x, target, s, domain, child, options));
    out.push_back(running);
  }
  return out;
}

namespace {

RiskEstimate summarize(std::vector<double> losses) {
  RiskEstimate out;
  out.n_points = losses.size();
  double sum = 0.0;
  for (double l : losses) sum += l;
  out.value = sum / static_cast<double>(losses.size());
  out.losses = std::move(losses);
  return out;
}

}  // namespace

RiskEstimate adversarial_risk(const Estimator& est, const PointSet& test_xs,
                              const TruthFunction& truth, const AttackSpec& spec,
                              const BoxDomain& domain, const SeededRng& rng,
                              const SearchOptions& options) {
  if (test_xs.empty()) throw InvalidArgument("adversarial_risk: no test points");
  std::vector<double> losses(test_xs.size());
  for (std::size_t i = 0; i < test_xs.size(); ++i) {
    SeededRng child = rng.derive(i);
    losses[i] = adversarial_loss_point(est, test_xs[i], truth(test_xs[i]), spec, domain, child,
                                       options);
  }
  return summarize(std::move(losses));
}

RiskEstimate adversarial_risk(const Estimator& est, const Dataset& test,
                              const AttackSpec& spec, const SeededRng& rng,
                              const SearchOptions& options) {
  std::vector<double> losses(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    SeededRng child = rng.derive(i);
    losses[i] = adversarial_loss_point(est, test.x(i), test.y(i), spec, test.domain(), child,
                                       options);
  }
  return summarize(std::move(losses));
}

std::vector<RiskEstimate> adversarial_risk_sweep(const Estimator& est, const PointSet& test_xs,
                                                 const TruthFunction& truth,
                                                 std::span<const double> radii,
                                                 const AttackSpec& spec,
                                                 const BoxDomain& domain,
                                                 const SeededRng& rng,
                                                 const SearchOptions& options) {
  if (test_xs.empty()) throw InvalidArgument("adversarial_risk_sweep: no test points");
  std::vector<std::vector<double>> per_radius(radii.size(),
                                              std::vector<double>(test_xs.size()));
  for (std::size_t i = 0; i < test_xs.size(); ++i) {
    SeededRng child = rng.derive(i);
    const auto losses =
        adversarial_loss_sweep(est, test_xs[i], truth(test_xs[i]), radii, spec, domain, child,
                               options);
    for (std::size_t k = 0; k < radii.size(); ++k) per_radius[k][i] = losses[k];
  }
  std::vector<RiskEstimate> out;
  out.reserve(radii.size());
  for (auto& losses : per_radius) out.push_back(summarize(std::move(losses)));
  return out;
}

RiskEstimate standard_risk(const Estimator& est, const PointSet& test_xs,
                           const TruthFunction& truth, const BoxDomain& domain) {
  AttackSpec spec;
  spec.r = 0.0;
  return adversarial_risk(est, test_xs, truth, spec, domain, SeededRng(0, 0));
}

TrainingError training_error(const Estimator& est, const Dataset& data) {
  TrainingError out{0.0, 0.0};
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double e = std::abs(data.y(i) - est.predict(data.x(i)));
    out.mse += e * e;
    out.max_abs_residual = std::max(out.max_abs_residual, e);
  }
  out.mse /= static_cast<double>(data.size());
  return out;
}

}  // namespace advinterp
