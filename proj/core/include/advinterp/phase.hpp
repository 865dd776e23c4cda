#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace advinterp::theory {

using Rational = boost::rational<std::int64_t>;

//! Parses "0.125", "-3", "2/3" exactly.
Rational parse_rational(std::string_view text);
double to_double(const Rational& q);
std::string to_string(const Rational& q);

enum class PhaseRegime { Low, High };
PhaseRegime parse_phase_regime(std::string_view text);
std::string to_string(PhaseRegime regime);

enum class PhaseLabel { Attack, Estimation, Interpolation, InterpolationNonconverging };
std::string to_string(PhaseLabel label);

struct PhaseCell {
  Rational r_exponent;
  PhaseRegime regime;
  PhaseLabel dominant;
  //! The exponent sits exactly on a transition between labels.
  bool boundary;
};

//! beta / ((2 beta + d) min(1, beta)): attack and estimation rates equalize.
Rational low_regime_boundary(const Rational& beta, int d);

//! (4 beta + d) / (d (2 beta + d)): n r^d and estimation rates equalize.
Rational high_regime_boundary(const Rational& beta, int d);

//! Dominant rate term for r = n^-a as n -> infinity, comparing decay
//! exponents exactly: attack 2a min(1, beta), estimation 2 beta / (2 beta + d),
//! and in the high regime interpolation a d - 1 (non-converging for a <= 1/d).
PhaseCell classify_phase(const Rational& beta, int d, PhaseRegime regime, const Rational& a);

std::vector<PhaseCell> phase_diagram(const Rational& beta, int d, PhaseRegime regime,
                                     std::span<const Rational> r_exponents);

}  // namespace advinterp::theory
