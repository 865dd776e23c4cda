#include "advinterp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "advinterp/gaussian.hpp"

namespace advinterp::theory {

double soft_threshold_second_moment(double delta, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("soft_threshold_second_moment: sigma must be > 0");
  if (!(delta >= 0.0)) throw InvalidArgument("soft_threshold_second_moment: delta must be >= 0");
  const double z = delta / sigma;
  return 2.0 * (sigma * sigma + delta * delta) * gaussian::tail(z) -
         2.0 * sigma * delta * gaussian::pdf(z);
}

double stein_lower_bound(double delta, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("stein_lower_bound: sigma must be > 0");
  return sigma * sigma * (4.0 * gaussian::tail(delta / sigma) - 1.0);
}

double expected_max_upper_bound(std::size_t k, double delta, double sigma) {
  const double lead =
      std::max(0.0, std::sqrt(2.0 * sigma * sigma * std::log(2.0 * static_cast<double>(k))) - delta);
  return lead * lead + sigma * sigma;
}

namespace {

double shrunk_square(double xi, double delta) {
  const double t = std::abs(xi) - delta;
  return t > 0.0 ? t * t : 0.0;
}

MonteCarloEstimate mean_and_se(double sum, double sum_sq, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  if (n < 2) return {mean, 0.0};
  const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
  return {mean, std::sqrt(var / nn)};
}

}  // namespace

ExpectedMaxEstimate expected_max_soft_threshold(std::size_t k, double delta, double sigma,
                                                SeededRng& rng, std::size_t n_mc) {
  if (k < 1 || n_mc < 1) throw InvalidArgument("expected_max_soft_threshold: need k, n_mc >= 1");
  if (!(sigma > 0.0)) throw InvalidArgument("expected_max_soft_threshold: sigma must be > 0");
  boost::random::normal_distribution<double> noise(0.0, sigma);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t rep = 0; rep < n_mc; ++rep) {
    double best = 0.0;
    for (std::size_t i = 0; i < k; ++i) best = std::max(best, shrunk_square(noise(rng.engine()), delta));
    sum += best;
    sum_sq += best * best;
  }
  const auto mc = mean_and_se(sum, sum_sq, n_mc);
  return {mc.estimate, mc.std_error, expected_max_upper_bound(k, delta, sigma)};
}

MonteCarloEstimate soft_threshold_moment_mc(double delta, double sigma, SeededRng& rng,
                                            std::size_t n) {
  if (n < 1) throw InvalidArgument("soft_threshold_moment_mc: n must be >= 1");
  boost::random::normal_distribution<double> noise(0.0, sigma);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = shrunk_square(noise(rng.engine()), delta);
    sum += v;
    sum_sq += v * v;
  }
  return mean_and_se(sum, sum_sq, n);
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Low: return "low";
    case Regime::Moderate: return "moderate";
    case Regime::High: return "high";
  }
  return "?";
}

std::string to_string(Term term) {
  switch (term) {
    case Term::Attack: return "attack";
    case Term::Estimation: return "estimation";
    case Term::Interpolation: return "interpolation";
  }
  return "?";
}

void RateParams::validate() const {
  if (!(n >= 1.0)) throw InvalidArgument("RateParams: n must be >= 1");
  if (d < 1) throw InvalidArgument("RateParams: d must be >= 1");
  if (!(r >= 0.0)) throw InvalidArgument("RateParams: r must be >= 0");
  if (!(beta > 0.0)) throw InvalidArgument("RateParams: beta must be > 0");
  if (!(delta >= 0.0)) throw InvalidArgument("RateParams: delta must be >= 0");
  if (!(sigma > 0.0)) throw InvalidArgument("RateParams: sigma must be > 0");
}

RegimeConstants::RegimeConstants() : c3(gaussian::tail_inverse(3.0 / 8.0)) {}

Regime classify_regime(const RateParams& params, const RegimeConstants& constants) {
  params.validate();
  if (params.delta <= constants.c3 * params.sigma) return Regime::High;
  const double log_n = std::log(params.n);
  if (params.delta >= constants.c_low * params.sigma * std::sqrt(std::max(log_n, 0.0)))
    return Regime::Low;
  return Regime::Moderate;
}

Term dominant_term(const std::array<double, 3>& terms) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i] > terms[best]) best = i;
  }
  return static_cast<Term>(best);
}

RateReport rate_report(const RateParams& params, const RegimeConstants& constants) {
  params.validate();
  RateReport out;
  const double d = static_cast<double>(params.d);
  out.attack_term = std::pow(params.r, 2.0 * std::min(1.0, params.beta));
  out.estimation_term = std::pow(params.n, -2.0 * params.beta / (2.0 * params.beta + d));
  out.regime = classify_regime(params, constants);
  const double nrd = params.n * std::pow(params.r, d);
  switch (out.regime) {
    case Regime::Low:
      out.interpolation_term = 0.0;
      break;
    case Regime::Moderate:
      out.interpolation_term =
          std::min(nrd, 1.0) *
          std::exp(-params.delta * params.delta / (2.0 * params.sigma * params.sigma));
      break;
    case Regime::High:
      if (nrd < 1.0) {
        out.interpolation_term = nrd;
      } else if (nrd <= constants.c4 * std::log(params.n)) {
        out.interpolation_term = 1.0;
      } else {
        out.interpolation_term = std::log(nrd);
      }
      break;
  }
  out.dominant = dominant_term({out.attack_term, out.estimation_term, out.interpolation_term});
  return out;
}

namespace {

// Points of one design bucketed into a uniform cell grid of side >= r.
class CellIndex {
 public:
  CellIndex(const std::vector<double>& coords, std::size_t dim, double r, std::size_t n)
      : coords_(coords), dim_(dim) {
    double per_axis = r > 0.0 ? std::floor(1.0 / r) : 1e18;
    const double cap = std::pow(std::max(4.0 * static_cast<double>(n), 1.0),
                                1.0 / static_cast<double>(dim));
    per_axis = std::clamp(per_axis, 1.0, std::max(1.0, std::floor(cap)));
    cells_ = static_cast<std::size_t>(per_axis);
    std::size_t total = 1;
    for (std::size_t j = 0; j < dim_; ++j) total *= cells_;
    start_.assign(total + 1, 0);
    const std::size_t count = coords_.size() / dim_;
    std::vector<std::size_t> cell_of(count);
    for (std::size_t i = 0; i < count; ++i) {
      cell_of[i] = flat_cell(&coords_[i * dim_]);
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < total; ++c) start_[c + 1] += start_[c];
    order_.resize(count);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < count; ++i) order_[fill[cell_of[i]]++] = i;
  }

  template <typename Visit>
  void for_each_near(const double* x, Visit&& visit) const {
    std::vector<std::ptrdiff_t> base(dim_);
    for (std::size_t j = 0; j < dim_; ++j) base[j] = static_cast<std::ptrdiff_t>(axis_cell(x[j]));
    std::vector<int> offset(dim_, -1);
    while (true) {
      std::size_t flat = 0;
      bool inside = true;
      for (std::size_t j = dim_; j-- > 0;) {
        const std::ptrdiff_t c = base[j] + offset[j];
        if (c < 0 || c >= static_cast<std::ptrdiff_t>(cells_)) {
          inside = false;
          break;
        }
        flat = flat * cells_ + static_cast<std::size_t>(c);
      }
      if (inside) {
        for (std::size_t s = start_[flat]; s < start_[flat + 1]; ++s) visit(order_[s]);
      }
      std::size_t j = 0;
      for (; j < dim_; ++j) {
        if (++offset[j] <= 1) break;
        offset[j] = -1;
      }
      if (j == dim_) break;
    }
  }

 private:
  std::size_t axis_cell(double t) const {
    const auto c = static_cast<std::ptrdiff_t>(std::floor(t * static_cast<double>(cells_)));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(c, 0, static_cast<std::ptrdiff_t>(cells_) - 1));
  }
  std::size_t flat_cell(const double* x) const {
    std::size_t flat = 0;
    for (std::size_t j = dim_; j-- > 0;) flat = flat * cells_ + axis_cell(x[j]);
    return flat;
  }

  const std::vector<double>& coords_;
  std::size_t dim_;
  std::size_t cells_ = 1;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> order_;
};

double one_design_cost(const RateParams& params, std::size_t resolution, SeededRng rng) {
  const std::size_t d = static_cast<std::size_t>(params.d);
  const auto n = static_cast<std::size_t>(params.n);
  boost::random::uniform_real_distribution<double> unif(0.0, 1.0);
  boost::random::normal_distribution<double> noise(0.0, params.sigma);
  std::vector<double> all(n * d);
  std::vector<double> value(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) all[i * d + j] = unif(rng.engine());
    value[i] = shrunk_square(noise(rng.engine()), params.delta);
  }
  // Points with zero shrunk noise never raise the maximum.
  std::vector<double> coords;
  std::vector<double> vals;
  for (std::size_t i = 0; i < n; ++i) {
    if (value[i] > 0.0) {
      coords.insert(coords.end(), all.begin() + static_cast<std::ptrdiff_t>(i * d),
                    all.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
      vals.push_back(value[i]);
    }
  }
  if (vals.empty()) return 0.0;
  const CellIndex index(coords, d, params.r, vals.size());

  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= resolution;
  std::vector<std::size_t> counter(d, 0);
  std::vector<double> x(d);
  double sum = 0.0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t j = 0; j < d; ++j)
      x[j] = (static_cast<double>(counter[j]) + 0.5) / static_cast<double>(resolution);
    double best = 0.0;
    index.for_each_near(x.data(), [&](std::size_t i) {
      if (vals[i] > best &&
          distance(PointView(&coords[i * d], d), PointView(x.data(), d), params.p) <= params.r)
        best = vals[i];
    });
    sum += best;
    for (std::size_t j = 0; j < d; ++j) {
      if (++counter[j] < resolution) break;
      counter[j] = 0;
    }
  }
  return sum / static_cast<double>(total);
}

}  // namespace

MonteCarloEstimate mc_interpolation_cost(const RateParams& params, std::size_t n_designs,
                                         std::size_t resolution, const SeededRng& rng,
                                         std::size_t workers, std::size_t max_grid_points) {
  params.validate();
  if (n_designs < 1 || resolution < 1)
    throw InvalidArgument("mc_interpolation_cost: need n_designs, resolution >= 1");
  if (static_cast<double>(params.d) * std::log(static_cast<double>(resolution)) >
      std::log(static_cast<double>(max_grid_points)))
    throw GridTooLarge("mc_interpolation_cost: resolution^d exceeds the grid cap");

  std::vector<double> per_design(n_designs);
  workers = std::clamp<std::size_t>(workers, 1, n_designs);
  if (workers == 1) {
    for (std::size_t k = 0; k < n_designs; ++k)
      per_design[k] = one_design_cost(params, resolution, rng.derive(k));
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < n_designs; k += workers)
          per_design[k] = one_design_cost(params, resolution, rng.derive(k));
      });
    }
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : per_design) {
    sum += v;
    sum_sq += v * v;
  }
  return mean_and_se(sum, sum_sq, n_designs);
}

double interpolation_cost_1d(double n, double r, double delta, double sigma,
                             std::size_t resolution) {
  if (!(n >= 1.0) || !(r >= 0.0) || !(sigma > 0.0) || resolution < 1)
    throw InvalidArgument("interpolation_cost_1d: invalid parameters");
  std::map<std::size_t, double> max_moment;
  auto expected_max = [&](std::size_t k) {
    auto it = max_moment.find(k);
    if (it != max_moment.end()) return it->second;
    const double kk = static_cast<double>(k);
    auto integrand = [&](double t) {
      const double p = 2.0 * gaussian::tail((delta + t) / sigma);
      // 1 - (1 - p)^k
      return 2.0 * t * -std::expm1(kk * std::log1p(-p));
    };
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
    max_moment.emplace(k, v);
    return v;
  };
  std::map<double, double> by_length;
  double sum = 0.0;
  for (std::size_t g = 0; g < resolution; ++g) {
    const double x = (static_cast<double>(g) + 0.5) / static_cast<double>(resolution);
    const double q = std::min(x + r, 1.0) - std::max(x - r, 0.0);
    auto it = by_length.find(q);
    if (it == by_length.end()) {
      double acc = 0.0;
      if (q > 0.0) {
        const boost::math::binomial_distribution<double> counts(n, std::min(q, 1.0));
        double mass = boost::math::cdf(counts, 0.0);
        for (std::size_t k = 1; k <= static_cast<std::size_t>(n) && mass < 1.0 - 1e-15; ++k) {
          const double pk = boost::math::pdf(counts, static_cast<double>(k));
          acc += pk * expected_max(k);
          mass += pk;
          if (pk == 0.0 && static_cast<double>(k) > n * q) break;
        }
      }
      it = by_length.emplace(q, acc).first;
    }
    sum += it->second;
  }
  return sum / static_cast<double>(resolution);
}

std::vector<CurseRow> curse_of_sample_size_curve(int d, double delta, double sigma,
                                                 std::span<const double> n_list,
                                                 const SeededRng& rng, std::size_t n_designs,
                                                 std::size_t resolution, std::size_t workers) {
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw InvalidArgument("curse_of_sample_size_curve: n_list must be increasing");
  std::vector<CurseRow> out;
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    const double n = n_list[k];
    if (!(n > std::exp(1.0)))
      throw InvalidArgument("curse_of_sample_size_curve: need n > e so that log log n > 0");
    RateParams params;
    params.n = n;
    params.d = d;
    params.delta = delta;
    params.sigma = sigma;
    params.r = std::pow(n / std::log(n), -1.0 / static_cast<double>(d));
    CurseRow row;
    row.n = n;
    row.r = params.r;
    row.cost = mc_interpolation_cost(params, n_designs, resolution, rng.derive(k), workers);
    row.log_log_n = std::log(std::log(n));
    out.push_back(row);
  }
  return out;
}

}  // namespace advinterp::theory
