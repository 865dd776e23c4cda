#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "advinterp/core_types.hpp"
#include "advinterp/estimators.hpp"

namespace advinterp {

using TruthFunction = std::function<double(PointView)>;

struct RiskEstimate {
  double value = 0.0;
  std::size_t n_points = 0;
  std::vector<double> losses;
};

enum class SearchMode {
  Auto,    // exhaustive grid for d <= 3, randomized search otherwise
  Grid,
  Random,
};

struct SearchOptions {
  SearchMode mode = SearchMode::Auto;
  std::size_t random_draws = 1000;
  std::size_t refine_steps = 20;
  //! Training points inside the ball are always evaluated.
  bool include_training_points = true;
};

//! max over x' in B_p(x, r) intersected with the domain of (target - f(x'))^2.
double adversarial_loss_point(const Estimator& est, PointView x, double target,
                              const AttackSpec& spec, const BoxDomain& domain,
                              SeededRng& rng, const SearchOptions& options = {});

//! Losses for every radius of an ascending sweep. The candidate set of
//! radius k contains those of all smaller radii, so the result is
//! nondecreasing along the sweep.
std::vector<double> adversarial_loss_sweep(const Estimator& est, PointView x, double target,
                                           std::span<const double> radii,
                                           const AttackSpec& spec, const BoxDomain& domain,
                                           SeededRng& rng, const SearchOptions& options = {});

//! Mean adversarial loss over test points, target f*(x). Point i uses the
//! child stream rng.derive(i), so the result does not depend on evaluation
//! order.
RiskEstimate adversarial_risk(const Estimator& est, const PointSet& test_xs,
                              const TruthFunction& truth, const AttackSpec& spec,
                              const BoxDomain& domain, const SeededRng& rng,
                              const SearchOptions& options = {});

//! Same, with the observed responses of `test` as targets.
RiskEstimate adversarial_risk(const Estimator& est, const Dataset& test,
                              const AttackSpec& spec, const SeededRng& rng,
                              const SearchOptions& options = {});

//! One RiskEstimate per radius of an ascending sweep (nested candidates).
std::vector<RiskEstimate> adversarial_risk_sweep(const Estimator& est, const PointSet& test_xs,
                                                 const TruthFunction& truth,
                                                 std::span<const double> radii,
                                                 const AttackSpec& spec,
                                                 const BoxDomain& domain,
                                                 const SeededRng& rng,
                                                 const SearchOptions& options = {});

//! adversarial_risk with r = 0.
RiskEstimate standard_risk(const Estimator& est, const PointSet& test_xs,
                           const TruthFunction& truth, const BoxDomain& domain);

struct TrainingError {
  double mse;
  double max_abs_residual;
};

TrainingError training_error(const Estimator& est, const Dataset& data);

}  // namespace advinterp
