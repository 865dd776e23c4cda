#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advinterp/adversarial.hpp"
#include "advinterp/core_types.hpp"

namespace advinterp::bench {

//! How the "0.5" in N(0, 0.5) is read.
enum class NoiseConvention { Variance, StdDev };
NoiseConvention parse_noise_convention(std::string_view text);
std::string to_string(NoiseConvention convention);

//! One of the three univariate synthetic regression problems on [-2, 2]:
//! 1: x^3 - x, 2: x + cos(3x), 3: exp(-x^2) sin(5x).
class SyntheticCase {
 public:
  explicit SyntheticCase(int id, double noise_param = 0.5,
                         NoiseConvention convention = NoiseConvention::Variance);

  int id() const { return id_; }
  double sigma() const { return sigma_; }
  double truth(double x) const;
  TruthFunction truth_function() const;
  static BoxDomain domain() { return BoxDomain::cube(1, -2.0, 2.0); }

 private:
  int id_;
  double sigma_;
};

//! n i.i.d. pairs with X ~ U[-2, 2] and Y = f*(X) + N(0, sigma^2).
Dataset generate_case(const SyntheticCase& c, std::size_t n, SeededRng& rng);

//! Test inputs only, X ~ U[-2, 2].
PointSet generate_inputs(std::size_t n, SeededRng& rng);

enum class Method { LP, IP1, IP2, IP0, SI, OneNN, Zero };
Method parse_method(std::string_view text);
std::string to_string(Method method);
//! Methods whose fitted function matches training responses (up to delta).
bool is_interpolating(Method method);

struct ExperimentPlan {
  std::vector<int> cases{1, 2, 3};
  std::vector<std::size_t> n_train{80, 150, 300};
  std::size_t n_vali = 100;
  std::size_t n_test = 100;
  std::vector<double> radii{0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
  std::vector<Method> methods{Method::LP,  Method::IP1,   Method::IP2,
                              Method::SI,  Method::OneNN, Method::Zero};
  std::size_t replications = 100;
  std::uint64_t seed = 1;

  double noise_param = 0.5;
  NoiseConvention noise_convention = NoiseConvention::Variance;
  std::size_t degree = 7;
  double bandwidth_min = 0.05;
  double bandwidth_max = 2.0;
  std::size_t bandwidth_count = 20;
  double singular_exponent = 0.2;
  //! IP1 uses delta = ip1_scale * sqrt(log log n).
  double ip1_scale = 0.75;
  double ip2_delta = 0.3;
  std::size_t grid_resolution = 101;

  void validate() const;
};

struct ReplicationRecord {
  int case_id = 0;
  std::size_t n = 0;
  double r = 0.0;
  Method method = Method::LP;
  std::size_t rep = 0;
  double adv_loss = 0.0;
  double std_loss = 0.0;
  double train_mse = 0.0;
  double max_resid = 0.0;
  //! Selected bandwidth; NaN for methods without one.
  double bandwidth = 0.0;
  bool failed = false;
  std::string error;
};

//! Runs every (case, n, replication) unit of the plan. Unit (c, n, k) draws
//! its data from a stream derived from (seed, c, n, k), so the record list
//! is identical for any worker count. A unit whose fit throws is recorded
//! with failed = true and NaN losses; the run continues.
std::vector<ReplicationRecord> run_plan(const ExperimentPlan& plan, std::size_t workers = 1);

struct MedianSE {
  double median;
  double se;
};

//! Median with the rank-based standard error: for R sorted values, half the
//! spread between the order statistics at 1-based ranks
//! floor(R/2 - sqrt(R)/2) and ceil(R/2 + sqrt(R)/2), clamped to [1, R].
MedianSE median_with_se(std::vector<double> values);

struct SummaryRow {
  int case_id;
  std::size_t n;
  double r;
  Method method;
  double median;
  double se;
  std::size_t count;
};

//! Groups by (case, n, r, method), skipping failed records.
std::vector<SummaryRow> aggregate(std::span<const ReplicationRecord> records);

enum class RadiusRule { Fixed, NOverLogN };
RadiusRule parse_radius_rule(std::string_view text);

struct CurseRow {
  std::size_t n;
  double r;
  Method method;
  double median;
  double se;
  double log_log_n;
};

//! Median adversarial loss of one method across n_list. With NOverLogN the
//! radius is 4 (n / log n)^-1, the unit-interval rule scaled to [-2, 2].
std::vector<CurseRow> curse_experiment(const ExperimentPlan& base, int case_id, Method method,
                                       RadiusRule rule, double fixed_r,
                                       std::span<const std::size_t> n_list,
                                       std::size_t workers = 1);

}  // namespace advinterp::bench
