#include "advinterp/interpolators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace advinterp {

double soft_threshold(double t, double delta) {
  const double mag = std::abs(t) - delta;
  if (!(mag > 0.0)) return 0.0;
  return t > 0.0 ? mag : -mag;
}

void InterpolationConfig::validate() const {
  if (!(delta >= 0.0)) throw InvalidArgument("InterpolationConfig: delta must be >= 0");
  if (!(tau >= 0.0)) throw InvalidArgument("InterpolationConfig: tau must be >= 0");
}

WrappedEstimator::WrappedEstimator(Estimator base, Dataset data, InterpolationConfig config)
    : base_(std::move(base)),
      data_(std::move(data)),
      config_(config),
      coincidence_tol_(1e-12 * data_.domain().width()) {
  config_.validate();
  residuals_.reserve(data_.size());
  shrunk_.reserve(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double r = data_.y(i) - base_.predict(data_.x(i));
    residuals_.push_back(r);
    shrunk_.push_back(soft_threshold(r, config_.delta));
  }
}

double WrappedEstimator::predict(PointView x) const {
  const std::size_t n = data_.size();
  const double reach = std::max(config_.tau, coincidence_tol_);
  std::size_t nearest = n;
  double nearest_dist = std::numeric_limits<double>::infinity();
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dist = distance(data_.x(i), x, config_.p);
    if (dist > reach) continue;
    if (dist < nearest_dist) {
      nearest_dist = dist;
      nearest = i;
    }
    if (dist <= config_.tau) bound = std::max(bound, std::abs(shrunk_[i]));
  }
  if (nearest == n) return base_.predict(x);

  if (nearest_dist <= coincidence_tol_)
    return base_.predict(data_.x(nearest)) + shrunk_[nearest];

  const double base = base_.predict(x);
  const double weight = std::max(0.0, 1.0 - nearest_dist / config_.tau);
  const double correction = std::clamp(weight * shrunk_[nearest], -bound, bound);
  return base + correction;
}

namespace {

class WrappedPredictor final : public Predictor {
 public:
  WrappedPredictor(WrappedEstimator est, std::string method)
      : est_(std::move(est)), method_(std::move(method)) {}
  double predict(PointView x) const override { return est_.predict(x); }
  std::string_view method() const override { return method_; }
  const Dataset* training() const override { return &est_.data(); }

 private:
  WrappedEstimator est_;
  std::string method_;
};

MembershipResult check_membership(const Dataset& data, double delta, auto&& predict) {
  MembershipResult out{true, 0, 0.0};
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double err = std::abs(predict(data.x(i)) - data.y(i));
    if (i == 0 || err > out.worst_residual) {
      out.worst_residual = err;
      out.worst_index = i;
    }
  }
  out.member = out.worst_residual <= delta + 1e-10;
  return out;
}

}  // namespace

Estimator WrappedEstimator::as_estimator(std::string method) const {
  return Estimator(std::make_shared<const WrappedPredictor>(*this, std::move(method)));
}

WrappedEstimator wrap_interpolator(const Estimator& base, const Dataset& data,
                                   const InterpolationConfig& config) {
  return WrappedEstimator(base, data, config);
}

MembershipResult verify_membership(const Estimator& est, const Dataset& data, double delta) {
  return check_membership(data, delta, [&](PointView x) { return est.predict(x); });
}

MembershipResult verify_membership(const WrappedEstimator& est, const Dataset& data,
                                   double delta) {
  return check_membership(data, delta, [&](PointView x) { return est.predict(x); });
}

double max_admissible_tau(double n, double beta, int d) {
  if (!(n >= 1.0) || !(beta > 0.0) || d < 1)
    throw InvalidArgument("max_admissible_tau: need n >= 1, beta > 0, d >= 1");
  const double dd = static_cast<double>(d);
  const double first = beta / ((2.0 * beta + dd) * std::min(1.0, beta));
  const double second = (4.0 * beta + dd) / (dd * (2.0 * beta + dd));
  return std::pow(n, -std::max(first, second));
}

double moderate_delta(std::size_t n, double scale) {
  const double ll = std::log(std::log(static_cast<double>(n)));
  return scale * std::sqrt(std::max(ll, 0.0));
}

}  // namespace advinterp
