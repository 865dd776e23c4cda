#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advinterp/core_types.hpp"

namespace advinterp {

//! Prediction procedure behind an Estimator handle.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual double predict(PointView x) const = 0;
  virtual std::string_view method() const = 0;
  //! Training data, or nullptr for data-free predictors.
  virtual const Dataset* training() const { return nullptr; }
};

//! Immutable, cheaply copyable handle to a fitted prediction function.
class Estimator {
 public:
  explicit Estimator(std::shared_ptr<const Predictor> impl);

  double predict(PointView x) const { return impl_->predict(x); }
  double predict(double x) const { return impl_->predict(PointView(&x, 1)); }
  std::string_view method() const { return impl_->method(); }
  const Dataset* training() const { return impl_->training(); }
  const Predictor& predictor() const { return *impl_; }

 private:
  std::shared_ptr<const Predictor> impl_;
};

enum class KernelKind { Rectangular, Singular };

struct KernelSpec {
  KernelKind kind = KernelKind::Rectangular;
  //! a in K(u) = |u|^-a (1 - |u|)_+^2; singular kernel only.
  double singular_exponent = 0.2;

  static KernelSpec rectangular() { return {}; }
  static KernelSpec singular(double a = 0.2) {
    return {KernelKind::Singular, a};
  }
  void validate() const;
  //! Kernel weight at scaled distance u >= 0 (u = 0 is not special-cased).
  double weight(double u) const;
};

struct LocalPolyConfig {
  std::size_t degree = 7;
  double bandwidth = 1.0;
  KernelSpec kernel;
  //! Ridge added to the local normal equations, relative to their trace.
  double ridge_eps = 1e-10;

  void validate() const;
};

//! Number of monomials of total degree <= degree in dim variables.
std::size_t polynomial_basis_size(std::size_t degree, std::size_t dim);

//! Local polynomial regression; predict(x) is the fitted intercept of the
//! kernel-weighted least-squares fit centred at x.
//!
//! Windows with fewer distinct points than basis functions drop to the
//! largest feasible degree; empty windows double the bandwidth until a
//! point is captured. With the singular kernel, a query that coincides
//! exactly with training points returns their mean response.
Estimator fit_local_polynomial(const Dataset& data, const LocalPolyConfig& config);

//! k-nearest-neighbour mean in Euclidean distance, ties to the lowest index.
Estimator fit_knn(const Dataset& data, std::size_t k);

//! f(x) = 0.
Estimator fit_zero();

//! Wraps an arbitrary callable as an estimator (used for truth functions).
Estimator make_function_estimator(std::string method,
                                  std::function<double(PointView)> fn);

//! Mean squared error of `est` on `data`.
double mean_squared_error(const Estimator& est, const Dataset& data);

//! Geometric grid of `count` bandwidths from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

struct BandwidthSelection {
  double bandwidth;
  //! Validation MSE per grid entry, in grid order (NaN when the fit failed).
  std::vector<double> validation_mse;
};

//! Picks the grid bandwidth minimising validation MSE; ties go to the
//! larger bandwidth.
BandwidthSelection select_bandwidth(const Dataset& train, const Dataset& validation,
                                    const LocalPolyConfig& config_template,
                                    std::span<const double> h_grid);

}  // namespace advinterp
