#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advinterp/core_types.hpp"

namespace advinterp::theory {

//! E (|xi| - delta)_+^2 for xi ~ N(0, sigma^2):
//! 2 (sigma^2 + delta^2) tail(delta / sigma) - 2 sigma delta pdf(delta / sigma).
double soft_threshold_second_moment(double delta, double sigma);

//! Stein-identity lower bound sigma^2 (4 tail(delta / sigma) - 1) on the
//! second moment above. May be negative.
double stein_lower_bound(double delta, double sigma);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

struct ExpectedMaxEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  //! (sqrt(2 sigma^2 log(2k)) - delta)_+^2 + sigma^2
  double analytic_bound = 0.0;
};

//! (sqrt(2 sigma^2 log(2k)) - delta)_+^2 + sigma^2
double expected_max_upper_bound(std::size_t k, double delta, double sigma);

//! Monte-Carlo E max_{i <= k} (|xi_i| - delta)_+^2 with n_mc replicates.
ExpectedMaxEstimate expected_max_soft_threshold(std::size_t k, double delta, double sigma,
                                                SeededRng& rng, std::size_t n_mc);

//! Sample mean and standard error of (|xi| - delta)_+^2 over n draws.
MonteCarloEstimate soft_threshold_moment_mc(double delta, double sigma, SeededRng& rng,
                                            std::size_t n);

enum class Regime { Low, Moderate, High };
std::string to_string(Regime regime);

enum class Term { Attack, Estimation, Interpolation };
std::string to_string(Term term);

struct RateParams {
  double n = 1;
  double r = 0.0;
  double beta = 1.0;
  int d = 1;
  double delta = 0.0;
  double sigma = 1.0;
  Norm p = Norm::LInf;

  void validate() const;
};

//! Unspecified constants of the regime theorems, exposed as configuration.
struct RegimeConstants {
  //! High regime when delta <= c3 * sigma. Default tail_inverse(3/8).
  double c3;
  //! Low regime when delta >= c_low * sigma * sqrt(log n).
  double c_low = 2.0;
  //! High regime switches to log(n r^d) above c4 * log n.
  double c4 = 1.0;

  RegimeConstants();
};

Regime classify_regime(const RateParams& params, const RegimeConstants& constants = {});

//! Three rate terms with the regime and the dominant term.
//!
//! The interpolation term is 0 in the low regime, the lower-bound shape
//! min(n r^d, 1) exp(-delta^2 / (2 sigma^2)) in the moderate regime (only a
//! lower bound is known there), and in the high regime n r^d below 1, then 1 up
//! to n r^d = c4 log n, then log(n r^d).
struct RateReport {
  double attack_term = 0.0;
  double estimation_term = 0.0;
  double interpolation_term = 0.0;
  Regime regime = Regime::Low;
  Term dominant = Term::Estimation;
};

RateReport rate_report(const RateParams& params, const RegimeConstants& constants = {});

//! argmax of (attack, estimation, interpolation); ties go to the earlier term.
Term dominant_term(const std::array<double, 3>& terms);

//! Monte-Carlo estimate of the interpolation cost
//!   int_[0,1]^d E max_{i : ||X_i - x||_p <= r} (|xi_i| - delta)_+^2 dx
//! with uniform designs. Each of n_designs replicates draws fresh (X, xi)
//! from rng.derive(replicate) and averages over a midpoint grid with
//! `resolution` points per axis; empty neighbourhoods contribute 0. The
//! result does not depend on `workers`.
MonteCarloEstimate mc_interpolation_cost(const RateParams& params, std::size_t n_designs,
                                         std::size_t resolution, const SeededRng& rng,
                                         std::size_t workers = 1,
                                         std::size_t max_grid_points = 20'000'000);

//! Exact expectation of the same grid average for d = 1, by summing the
//! binomial count distribution against E max_k computed by quadrature.
double interpolation_cost_1d(double n, double r, double delta, double sigma,
                             std::size_t resolution);

struct CurseRow {
  double n = 0;
  double r = 0;
  MonteCarloEstimate cost;
  //! log(n r^d) = log log n at r = (n / log n)^(-1/d).
  double log_log_n = 0;
};

//! Interpolation cost along r_n = (n / log n)^(-1/d).
std::vector<CurseRow> curse_of_sample_size_curve(int d, double delta, double sigma,
                                                 std::span<const double> n_list,
                                                 const SeededRng& rng, std::size_t n_designs,
                                                 std::size_t resolution,
                                                 std::size_t workers = 1);

}  // namespace advinterp::theory
