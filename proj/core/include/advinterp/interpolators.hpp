#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "advinterp/core_types.hpp"
#include "advinterp/estimators.hpp"

namespace advinterp {

//! psi_delta(t) = sgn(t) (|t| - delta)_+
double soft_threshold(double t, double delta);

struct InterpolationConfig {
  //! Interpolation degree: training residuals are shrunk to at most delta.
  double delta = 0.0;
  //! Radius of the neighbourhoods on which the connector blends corrections.
  double tau = 0.0;
  Norm p = Norm::LInf;

  void validate() const;
};

//! Base estimator forced into the delta-interpolation class.
//!
//! predict(x) is
//!   base(X_i) + psi_delta(Y_i - base(X_i))       when x coincides with X_i,
//!   base(x) + clamp(w(x) * psi(residual_i*))     inside some B_p(X_i, tau),
//!   base(x)                                      elsewhere,
//! where i* is the nearest training point within tau (ties to the lowest
//! index), w(x) = (1 - ||x - X_i*||_p / tau)_+ and the clamp bounds the
//! correction by max over B_p(x, tau) of (|residual_i| - delta)_+.
class WrappedEstimator {
 public:
  WrappedEstimator(Estimator base, Dataset data, InterpolationConfig config);

  double predict(PointView x) const;
  double predict(double x) const { return predict(PointView(&x, 1)); }

  const Estimator& base() const { return base_; }
  const InterpolationConfig& config() const { return config_; }
  const Dataset& data() const { return data_; }
  //! Y_i - base(X_i).
  const std::vector<double>& residuals() const { return residuals_; }
  //! Points closer than this (in the wrapper's norm) count as X_i itself.
  double coincidence_tolerance() const { return coincidence_tol_; }

  //! Method-tagged handle usable wherever an Estimator is expected.
  Estimator as_estimator(std::string method = "IP") const;

 private:
  Estimator base_;
  Dataset data_;
  InterpolationConfig config_;
  std::vector<double> residuals_;
  std::vector<double> shrunk_;  // psi_delta(residual_i)
  double coincidence_tol_;
};

WrappedEstimator wrap_interpolator(const Estimator& base, const Dataset& data,
                                   const InterpolationConfig& config);

struct MembershipResult {
  bool member;
  std::size_t worst_index;
  double worst_residual;
};

//! max_i |predict(X_i) - Y_i| <= delta + 1e-10.
MembershipResult verify_membership(const Estimator& est, const Dataset& data, double delta);
MembershipResult verify_membership(const WrappedEstimator& est, const Dataset& data,
                                   double delta);

//! Largest neighbourhood radius for which the shrinking-neighbourhood
//! interpolator keeps the minimax rate:
//! n^-max(beta / ((2 beta + d)(1 ^ beta)), (4 beta + d) / (d (2 beta + d))).
double max_admissible_tau(double n, double beta, int d);

//! delta = scale * sqrt(log log n); the moderately interpolating IP1 rule.
double moderate_delta(std::size_t n, double scale = 0.75);

}  // namespace advinterp
