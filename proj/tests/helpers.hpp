#pragma once

#include <functional>
#include <vector>

#include "advinterp/core_types.hpp"

namespace testing_helpers {

inline advinterp::Dataset line_data(const std::vector<double>& xs, const std::vector<double>& ys,
                                    double lo, double hi) {
  return advinterp::Dataset(advinterp::BoxDomain::cube(1, lo, hi), advinterp::PointSet(1, xs), ys);
}

//! n uniform points on the domain with responses fn(x) + noise_sd * N(0, 1).
inline advinterp::Dataset random_data(const advinterp::BoxDomain& domain, std::size_t n,
                                      const std::function<double(advinterp::PointView)>& fn,
                                      double noise_sd, advinterp::SeededRng& rng) {
  advinterp::PointSet xs(domain.dim());
  std::vector<double> ys;
  std::vector<double> p(domain.dim());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = rng.uniform(domain.lower(j), domain.upper(j));
    xs.push_back(p);
    ys.push_back(fn(p) + (noise_sd > 0.0 ? rng.normal(0.0, noise_sd) : 0.0));
  }
  return advinterp::Dataset(domain, std::move(xs), std::move(ys));
}

}  // namespace testing_helpers
