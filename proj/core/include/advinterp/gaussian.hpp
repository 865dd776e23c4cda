#pragma once

namespace advinterp::gaussian {

//! Standard normal density.
double pdf(double x);

//! Standard normal CDF.
double cdf(double x);

//! Right tail 1 - cdf(x), accurate deep into the tail.
//!
//! Uses erfc on [-8, 8] and a Mills-ratio continued fraction beyond 8.
double tail(double x);

//! Inverse of tail(): returns x with tail(x) = q, for q in (0, 1).
double tail_inverse(double q);

}  // namespace advinterp::gaussian
