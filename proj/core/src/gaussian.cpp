#include "advinterp/gaussian.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "advinterp/core_types.hpp"

namespace advinterp::gaussian {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684759;

// Mills ratio R(x) = tail(x) / pdf(x) by Lentz evaluation of
// 1 / (x + 1 / (x + 2 / (x + 3 / (x + ...)))).
double mills_ratio(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = x + k * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + k / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

}  // namespace

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double tail(double x) {
  if (x > 8.0) return pdf(x) * mills_ratio(x);
  if (x < -8.0) return 1.0 - pdf(-x) * mills_ratio(-x);
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double cdf(double x) { return tail(-x); }

double tail_inverse(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw InvalidArgument("gaussian::tail_inverse: q must lie in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

}  // namespace advinterp::gaussian
