#include <gtest/gtest.h>

#include <cmath>

#include "advinterp/bench.hpp"
#include "advinterp/estimators.hpp"
#include "helpers.hpp"

using namespace advinterp;
using testing_helpers::line_data;
using testing_helpers::random_data;

namespace {

LocalPolyConfig rect(std::size_t degree, double h) {
  LocalPolyConfig c;
  c.degree = degree;
  c.bandwidth = h;
  return c;
}

}  // namespace

TEST(PolynomialBasis, Sizes) {
  EXPECT_EQ(polynomial_basis_size(7, 1), 8u);
  EXPECT_EQ(polynomial_basis_size(2, 2), 6u);
  EXPECT_EQ(polynomial_basis_size(3, 3), 20u);
  EXPECT_EQ(polynomial_basis_size(0, 5), 1u);
}

TEST(KernelSpec, Weights) {
  const auto r = KernelSpec::rectangular();
  EXPECT_EQ(r.weight(0.3), 1.0);
  EXPECT_EQ(r.weight(1.0), 1.0);
  EXPECT_EQ(r.weight(1.01), 0.0);
  const auto s = KernelSpec::singular(0.2);
  EXPECT_NEAR(s.weight(0.5), std::pow(0.5, -0.2) * 0.25, 1e-15);
  EXPECT_EQ(s.weight(1.0), 0.0);
  EXPECT_GT(s.weight(1e-6), s.weight(1e-3));
  EXPECT_THROW(KernelSpec::singular(1.0).validate(), InvalidArgument);
}

TEST(LocalPolynomial, ConstantData) {
  const auto data = line_data({0.0, 1.0}, {1.0, 1.0}, 0.0, 1.0);
  const auto est = fit_local_polynomial(data, rect(0, 2.0));
  EXPECT_NEAR(est.predict(0.5), 1.0, 1e-12);
  EXPECT_EQ(est.method(), "LP");
}

TEST(LocalPolynomial, AffineReproduction) {
  const auto data = line_data({0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 0.5, 1.0, 1.5, 2.0}, 0.0, 1.0);
  const auto est = fit_local_polynomial(data, rect(1, 50.0));
  for (double x : {0.0, 0.1, 0.33, 0.5, 0.9, 1.0}) EXPECT_NEAR(est.predict(x), 2.0 * x, 1e-10);
}

TEST(LocalPolynomial, ReproducesDegreeSevenPolynomial) {
  auto poly = [](PointView x) {
    const double t = x[0];
    return 0.3 - t + 0.5 * t * t + t * t * t - 0.2 * std::pow(t, 5) + 0.05 * std::pow(t, 7);
  };
  SeededRng rng(11, 0);
  const auto data = random_data(BoxDomain::cube(1, -2.0, 2.0), 400, poly, 0.0, rng);
  const auto est = fit_local_polynomial(data, rect(7, 1.0));
  for (int k = 0; k <= 40; ++k) {
    const double x = -2.0 + 0.1 * k;
    EXPECT_NEAR(est.predict(x), poly(PointView(&x, 1)), 1e-8) << "x = " << x;
  }
}

TEST(LocalPolynomial, ReproducesQuadraticInTwoDimensions) {
  auto poly = [](PointView x) { return 1.0 + x[0] - 2.0 * x[1] + x[0] * x[1] + 0.5 * x[1] * x[1]; };
  SeededRng rng(12, 0);
  const auto data = random_data(BoxDomain::unit_cube(2), 500, poly, 0.0, rng);
  const auto est = fit_local_polynomial(data, rect(2, 0.3));
  for (double a : {0.1, 0.5, 0.9}) {
    for (double b : {0.05, 0.5, 0.95}) {
      const std::vector<double> x{a, b};
      EXPECT_NEAR(est.predict(x), poly(x), 1e-8);
    }
  }
}

TEST(LocalPolynomial, SingularKernelInterpolates) {
  SeededRng rng(13, 0);
  const bench::SyntheticCase c(1);
  const auto data = bench::generate_case(c, 80, rng);
  LocalPolyConfig cfg = rect(7, 0.5);
  cfg.kernel = KernelSpec::singular(0.2);
  const auto est = fit_local_polynomial(data, cfg);
  EXPECT_EQ(est.method(), "SI");
  for (std::size_t i = 0; i < data.size(); ++i) EXPECT_EQ(est.predict(data.x(i)), data.y(i));
}

TEST(LocalPolynomial, SingularKernelAveragesCoincidentPoints) {
  const auto data = line_data({0.5, 0.5, 0.1, 0.9}, {1.0, 3.0, 0.0, 0.0}, 0.0, 1.0);
  LocalPolyConfig cfg = rect(1, 1.0);
  cfg.kernel = KernelSpec::singular();
  const auto est = fit_local_polynomial(data, cfg);
  EXPECT_EQ(est.predict(0.5), 2.0);
}

TEST(LocalPolynomial, EmptyWindowStaysFinite) {
  const auto data = line_data({0.0, 0.05}, {1.0, 2.0}, 0.0, 1.0);
  const auto est = fit_local_polynomial(data, rect(7, 0.01));
  const double v = est.predict(0.9);
  EXPECT_TRUE(std::isfinite(v));
}

TEST(LocalPolynomial, PredictionIsPure) {
  SeededRng rng(14, 0);
  const auto data = bench::generate_case(bench::SyntheticCase(2), 100, rng);
  const auto est = fit_local_polynomial(data, rect(7, 0.6));
  for (double x : {-1.7, 0.0, 0.42, 1.99}) EXPECT_EQ(est.predict(x), est.predict(x));
}

TEST(LocalPolynomial, RejectsBadConfig) {
  const auto data = line_data({0.0}, {1.0}, 0.0, 1.0);
  EXPECT_THROW(fit_local_polynomial(data, rect(1, 0.0)), InvalidArgument);
}

TEST(Knn, NearestPoint) {
  const auto data = line_data({0.0, 1.0}, {3.0, 5.0}, 0.0, 1.0);
  const auto est = fit_knn(data, 1);
  EXPECT_EQ(est.predict(0.4), 3.0);
  EXPECT_EQ(est.predict(0.6), 5.0);
  EXPECT_EQ(est.predict(0.5), 3.0);
  EXPECT_EQ(est.method(), "1N");
}

TEST(Knn, AllNeighboursGiveMean) {
  const auto data = line_data({0.0, 0.3, 1.0}, {1.0, 2.0, 6.0}, 0.0, 1.0);
  const auto est = fit_knn(data, 3);
  for (double x : {0.0, 0.5, 1.0}) EXPECT_DOUBLE_EQ(est.predict(x), 3.0);
}

TEST(Knn, OneNeighbourInterpolates) {
  SeededRng rng(15, 0);
  const auto data = bench::generate_case(bench::SyntheticCase(3), 60, rng);
  const auto est = fit_knn(data, 1);
  for (std::size_t i = 0; i < data.size(); ++i) EXPECT_EQ(est.predict(data.x(i)), data.y(i));
}

TEST(Knn, PiecewiseConstant) {
  const auto data = line_data({0.0, 0.4, 1.0}, {1.0, 2.0, 4.0}, 0.0, 1.0);
  const auto est = fit_knn(data, 2);
  EXPECT_EQ(est.predict(0.1), est.predict(0.15));
  EXPECT_EQ(est.predict(0.8), est.predict(0.95));
}

TEST(Knn, RejectsTooManyNeighbours) {
  const auto data = line_data({0.0, 1.0}, {3.0, 5.0}, 0.0, 1.0);
  EXPECT_THROW(fit_knn(data, 3), InvalidArgument);
  EXPECT_THROW(fit_knn(data, 0), InvalidArgument);
}

TEST(Zero, AlwaysZero) {
  const auto est = fit_zero();
  EXPECT_EQ(est.predict(0.3), 0.0);
  EXPECT_EQ(est.training(), nullptr);
}

TEST(BandwidthSelection, SingleElementGrid) {
  SeededRng rng(16, 0);
  const bench::SyntheticCase c(1);
  const auto train = bench::generate_case(c, 50, rng);
  const auto vali = bench::generate_case(c, 50, rng);
  const std::vector<double> grid{0.7};
  EXPECT_EQ(select_bandwidth(train, vali, rect(3, 1.0), grid).bandwidth, 0.7);
}

TEST(BandwidthSelection, TiesGoToLargerBandwidth) {
  const auto train = line_data({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, std::vector<double>(6, 2.5), 0.0, 1.0);
  const auto vali = line_data({0.1, 0.5, 0.9}, std::vector<double>(3, 2.5), 0.0, 1.0);
  const std::vector<double> grid{0.1, 1.0};
  const auto sel = select_bandwidth(train, vali, rect(0, 1.0), grid);
  EXPECT_EQ(sel.bandwidth, 1.0);
  EXPECT_NEAR(sel.validation_mse[0], 0.0, 1e-24);
}

TEST(BandwidthSelection, MatchesExhaustiveEvaluation) {
  SeededRng rng(17, 0);
  const bench::SyntheticCase c(2);
  const auto train = bench::generate_case(c, 150, rng);
  const auto vali = bench::generate_case(c, 100, rng);
  const auto grid = geometric_grid(0.05, 2.0, 20);
  const auto sel = select_bandwidth(train, vali, rect(7, 1.0), grid);
  double best = INFINITY;
  for (double h : grid) {
    const double mse = mean_squared_error(fit_local_polynomial(train, rect(7, h)), vali);
    best = std::min(best, mse);
  }
  const double chosen = mean_squared_error(fit_local_polynomial(train, rect(7, sel.bandwidth)), vali);
  EXPECT_EQ(chosen, best);
}

TEST(BandwidthSelection, RejectsEmptyGrid) {
  const auto data = line_data({0.0, 1.0}, {3.0, 5.0}, 0.0, 1.0);
  EXPECT_THROW(select_bandwidth(data, data, rect(0, 1.0), {}), InvalidArgument);
}

TEST(GeometricGrid, Endpoints) {
  const auto g = geometric_grid(0.05, 2.0, 20);
  ASSERT_EQ(g.size(), 20u);
  EXPECT_DOUBLE_EQ(g.front(), 0.05);
  EXPECT_DOUBLE_EQ(g.back(), 2.0);
  EXPECT_NEAR(g[1] / g[0], g[19] / g[18], 1e-12);
}
