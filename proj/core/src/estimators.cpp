#include "advinterp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace advinterp {

Estimator::Estimator(std::shared_ptr<const Predictor> impl) : impl_(std::move(impl)) {
  if (!impl_) throw InvalidArgument("Estimator: null predictor");
}

void KernelSpec::validate() const {
  if (kind == KernelKind::Singular &&
      !(singular_exponent > 0.0 && singular_exponent < 1.0))
    throw InvalidArgument("KernelSpec: singular exponent must lie in (0, 1)");
}

double KernelSpec::weight(double u) const {
  if (kind == KernelKind::Rectangular) return u <= 1.0 ? 1.0 : 0.0;
  if (u >= 1.0) return 0.0;
  const double clamped = std::max(u, 1e-12);
  const double tail = 1.0 - u;
  return std::pow(clamped, -singular_exponent) * tail * tail;
}

void LocalPolyConfig::validate() const {
  kernel.validate();
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw InvalidArgument("LocalPolyConfig: bandwidth must be a positive finite number");
  if (!(ridge_eps >= 0.0)) throw InvalidArgument("LocalPolyConfig: ridge_eps must be >= 0");
}

std::size_t polynomial_basis_size(std::size_t degree, std::size_t dim) {
  // C(degree + dim, dim)
  std::size_t result = 1;
  for (std::size_t k = 1; k <= dim; ++k) result = result * (degree + k) / k;
  return result;
}

namespace {

// Multi-indices of total degree <= degree, graded order.
std::vector<std::vector<std::size_t>> multi_indices(std::size_t degree, std::size_t dim) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> alpha(dim, 0);
  auto rec = [&](auto&& self, std::size_t j, std::size_t remaining) -> void {
    if (j + 1 == dim) {
      for (std::size_t a = 0; a <= remaining; ++a) {
        alpha[j] = a;
        out.push_back(alpha);
      }
      return;
    }
    for (std::size_t a = 0; a <= remaining; ++a) {
      alpha[j] = a;
      self(self, j + 1, remaining - a);
    }
  };
  rec(rec, 0, degree);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.begin(), a.end(), std::size_t{0}) <
           std::accumulate(b.begin(), b.end(), std::size_t{0});
  });
  return out;
}

// P_0..P_degree at t.
void legendre(double t, std::size_t degree, double* out) {
  out[0] = 1.0;
  if (degree == 0) return;
  out[1] = t;
  for (std::size_t k = 2; k <= degree; ++k) {
    out[k] = ((2.0 * k - 1.0) * t * out[k - 1] - (k - 1.0) * out[k - 2]) / k;
  }
}

class ZeroPredictor final : public Predictor {
 public:
  double predict(PointView) const override { return 0.0; }
  std::string_view method() const override { return "ZERO"; }
};

class FunctionPredictor final : public Predictor {
 public:
  FunctionPredictor(std::string method, std::function<double(PointView)> fn)
      : method_(std::move(method)), fn_(std::move(fn)) {}
  double predict(PointView x) const override { return fn_(x); }
  std::string_view method() const override { return method_; }

 private:
  std::string method_;
  std::function<double(PointView)> fn_;
};

class KnnPredictor final : public Predictor {
 public:
  KnnPredictor(Dataset data, std::size_t k) : data_(std::move(data)), k_(k) {}

  double predict(PointView x) const override {
    const std::size_t n = data_.size();
    if (k_ == 1) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double d = distance(data_.x(i), x, Norm::L2);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      return data_.y(best);
    }
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = {distance(data_.x(i), x, Norm::L2), i};
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_ - 1),
                     order.end());
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_));
    double sum = 0.0;
    for (std::size_t j = 0; j < k_; ++j) sum += data_.y(order[j].second);
    return sum / static_cast<double>(k_);
  }
  std::string_view method() const override { return k_ == 1 ? "1N" : "KNN"; }
  const Dataset* training() const override { return &data_; }

 private:
  Dataset data_;
  std::size_t k_;
};

class LocalPolynomialPredictor final : public Predictor {
 public:
  LocalPolynomialPredictor(Dataset data, LocalPolyConfig config)
      : data_(std::move(data)), config_(config) {
    const std::size_t d = data_.dim();
    for (std::size_t deg = 0; deg <= config_.degree; ++deg)
      bases_.push_back(multi_indices(deg, d));
  }

  std::string_view method() const override {
    return config_.kernel.kind == KernelKind::Singular ? "SI" : "LP";
  }
  const Dataset* training() const override { return &data_; }
  const LocalPolyConfig& config() const { return config_; }

  double predict(PointView x) const override {
    const std::size_t n = data_.size();
    const std::size_t d = data_.dim();
    const bool singular = config_.kernel.kind == KernelKind::Singular;

    std::vector<double> dist(n);
    double coincident_sum = 0.0;
    std::size_t coincident = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = distance(data_.x(i), x, Norm::L2);
      if (dist[i] == 0.0) {
        coincident_sum += data_.y(i);
        ++coincident;
      }
    }
    if (singular && coincident > 0) return coincident_sum / static_cast<double>(coincident);

    double h = config_.bandwidth;
    std::vector<std::size_t> window;
    for (int attempt = 0; attempt < 2100; ++attempt) {
      window.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (config_.kernel.weight(dist[i] / h) > 0.0) window.push_back(i);
      }
      if (!window.empty()) break;
      h *= 2.0;
    }
    if (window.empty())
      throw NumericalError("local polynomial: no training point reachable from query");

    const std::size_t distinct = count_distinct(window);
    std::size_t degree = config_.degree;
    while (degree > 0 && polynomial_basis_size(degree, d) > distinct) --degree;

    const auto& basis = bases_[degree];
    const std::size_t m = basis.size();
    const std::size_t k = window.size();

    // Legendre basis on the bounding box of the window; a one-sided window
    // at the domain edge would otherwise be badly conditioned.
    std::vector<double> centre(d);
    std::vector<double> half(d);
    for (std::size_t j = 0; j < d; ++j) {
      double lo = INFINITY;
      double hi = -INFINITY;
      for (std::size_t i : window) {
        lo = std::min(lo, data_.x(i)[j]);
        hi = std::max(hi, data_.x(i)[j]);
      }
      centre[j] = 0.5 * (lo + hi);
      half[j] = hi > lo ? 0.5 * (hi - lo) : h;
    }
    std::vector<double> leg(d * (degree + 1));
    auto basis_row = [&](PointView p, double* row_out) {
      for (std::size_t j = 0; j < d; ++j)
        legendre((p[j] - centre[j]) / half[j], degree, leg.data() + j * (degree + 1));
      for (std::size_t col = 0; col < m; ++col) {
        double v = 1.0;
        for (std::size_t j = 0; j < d; ++j) v *= leg[j * (degree + 1) + basis[col][j]];
        row_out[col] = v;
      }
    };

    Eigen::MatrixXd design(k, m);
    Eigen::VectorXd w(k);
    Eigen::VectorXd y(k);
    std::vector<double> row_buf(m);
    for (std::size_t row = 0; row < k; ++row) {
      const std::size_t i = window[row];
      basis_row(data_.x(i), row_buf.data());
      for (std::size_t col = 0; col < m; ++col)
        design(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = row_buf[col];
      w(static_cast<Eigen::Index>(row)) = config_.kernel.weight(dist[i] / h);
      y(static_cast<Eigen::Index>(row)) = data_.y(i);
    }
    if (!w.allFinite()) throw NumericalError("local polynomial: non-finite kernel weights");

    const Eigen::MatrixXd weighted = design.transpose() * w.asDiagonal();
    const Eigen::MatrixXd gram = weighted * design;
    const Eigen::VectorXd rhs = weighted * y;
    const double lambda = config_.ridge_eps * gram.trace() / static_cast<double>(m);
    Eigen::MatrixXd regularized = gram;
    regularized.diagonal().array() += lambda;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(regularized);
    if (ldlt.info() != Eigen::Success)
      throw NumericalError("local polynomial: singular local system");
    Eigen::VectorXd coef = ldlt.solve(rhs);
    // Iterated Tikhonov refinement removes the ridge bias on well-posed systems.
    if (lambda > 0.0) {
      for (int step = 0; step < 3; ++step) coef += ldlt.solve(rhs - gram * coef);
    }
    basis_row(x, row_buf.data());
    double value = 0.0;
    for (std::size_t col = 0; col < m; ++col)
      value += coef(static_cast<Eigen::Index>(col)) * row_buf[col];
    if (!std::isfinite(value)) throw NumericalError("local polynomial: non-finite prediction");
    return value;
  }

 private:
  std::size_t count_distinct(const std::vector<std::size_t>& window) const {
    const std::size_t d = data_.dim();
    if (d == 1) {
      std::vector<double> v;
      v.reserve(window.size());
      for (std::size_t i : window) v.push_back(data_.x(i)[0]);
      std::sort(v.begin(), v.end());
      return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
    }
    std::vector<std::vector<double>> pts;
    pts.reserve(window.size());
    for (std::size_t i : window) {
      const auto p = data_.x(i);
      pts.emplace_back(p.begin(), p.end());
    }
    std::sort(pts.begin(), pts.end());
    return static_cast<std::size_t>(std::unique(pts.begin(), pts.end()) - pts.begin());
  }

  Dataset data_;
  LocalPolyConfig config_;
  std::vector<std::vector<std::vector<std::size_t>>> bases_;
};

}  // namespace

Estimator fit_local_polynomial(const Dataset& data, const LocalPolyConfig& config) {
  config.validate();
  return Estimator(std::make_shared<const LocalPolynomialPredictor>(data, config));
}

Estimator fit_knn(const Dataset& data, std::size_t k) {
  if (k < 1 || k > data.size())
    throw InvalidArgument("fit_knn: k must satisfy 1 <= k <= n");
  return Estimator(std::make_shared<const KnnPredictor>(data, k));
}

Estimator fit_zero() { return Estimator(std::make_shared<const ZeroPredictor>()); }

Estimator make_function_estimator(std::string method, std::function<double(PointView)> fn) {
  return Estimator(std::make_shared<const FunctionPredictor>(std::move(method), std::move(fn)));
}

double mean_squared_error(const Estimator& est, const Dataset& data) {
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double e = data.y(i) - est.predict(data.x(i));
    acc += e * e;
  }
  return acc / static_cast<double>(data.size());
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0)
    throw InvalidArgument("geometric_grid: need 0 < lo <= hi and count >= 1");
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(ratio * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

BandwidthSelection select_bandwidth(const Dataset& train, const Dataset& validation,
                                    const LocalPolyConfig& config_template,
                                    std::span<const double> h_grid) {
  if (h_grid.empty()) throw InvalidArgument("select_bandwidth: empty bandwidth grid");
  BandwidthSelection out{std::numeric_limits<double>::quiet_NaN(), {}};
  double best = std::numeric_limits<double>::infinity();
  for (double h : h_grid) {
    LocalPolyConfig cfg = config_template;
    cfg.bandwidth = h;
    double mse = std::numeric_limits<double>::quiet_NaN();
    try {
      mse = mean_squared_error(fit_local_polynomial(train, cfg), validation);
    } catch (const NumericalError&) {
    }
    out.validation_mse.push_back(mse);
    if (!std::isfinite(mse)) continue;
    const double tol = 1e-12 * std::max(mse, best == INFINITY ? 0.0 : best) + 1e-24;
    const bool tie = std::isfinite(best) && std::abs(mse - best) <= tol;
    if ((!tie && mse < best) || (tie && h > out.bandwidth)) {
      best = std::min(best, mse);
      out.bandwidth = h;
    }
  }
  if (!std::isfinite(best))
    throw NumericalError("select_bandwidth: every grid value gave a non-finite validation error");
  return out;
}

}  // namespace advinterp
