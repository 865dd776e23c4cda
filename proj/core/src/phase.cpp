#include "advinterp/phase.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "advinterp/core_types.hpp"

namespace advinterp::theory {

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidArgument("not an integer: '" + std::string(text) + "'");
  return v;
}

Rational min1(const Rational& beta) { return std::min(Rational(1), beta); }

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty rational");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (frac.size() > 15) throw InvalidArgument("too many decimals in '" + std::string(text) + "'");
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
  const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
  if (w < 0 || f < 0) throw InvalidArgument("malformed number '" + std::string(text) + "'");
  Rational q(w * scale + f, scale);
  return negative ? -q : q;
}

double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

std::string to_string(const Rational& q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", to_double(q));
  return buf;
}

PhaseRegime parse_phase_regime(std::string_view text) {
  if (text == "low") return PhaseRegime::Low;
  if (text == "high") return PhaseRegime::High;
  throw InvalidArgument("unknown regime '" + std::string(text) + "' (expected low or high)");
}

std::string to_string(PhaseRegime regime) {
  return regime == PhaseRegime::Low ? "low" : "high";
}

std::string to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::Attack: return "attack";
    case PhaseLabel::Estimation: return "estimation";
    case PhaseLabel::Interpolation: return "interpolation";
    case PhaseLabel::InterpolationNonconverging: return "interpolation-nonconverging";
  }
  return "?";
}

Rational low_regime_boundary(const Rational& beta, int d) {
  return beta / ((2 * beta + d) * min1(beta));
}

Rational high_regime_boundary(const Rational& beta, int d) {
  return (4 * beta + d) / (Rational(d) * (2 * beta + d));
}

PhaseCell classify_phase(const Rational& beta, int d, PhaseRegime regime, const Rational& a) {
  if (beta <= Rational(0) || d < 1) throw InvalidArgument("classify_phase: need beta > 0 and d >= 1");
  PhaseCell cell{a, regime, PhaseLabel::Estimation, false};
  const Rational attack = 2 * a * min1(beta);
  const Rational estimation = 2 * beta / (2 * beta + d);

  if (regime == PhaseRegime::High) {
    const Rational interpolation = a * d - 1;
    if (interpolation <= Rational(0)) {
      cell.dominant = PhaseLabel::InterpolationNonconverging;
      cell.boundary = interpolation == Rational(0);
      return cell;
    }
    // Slowest decay dominates; ties go to attack, then estimation.
    const Rational slowest = std::min({attack, estimation, interpolation});
    if (attack == slowest) {
      cell.dominant = PhaseLabel::Attack;
    } else if (estimation == slowest) {
      cell.dominant = PhaseLabel::Estimation;
    } else {
      cell.dominant = PhaseLabel::Interpolation;
    }
    const int ties = (attack == slowest) + (estimation == slowest) + (interpolation == slowest);
    cell.boundary = ties > 1;
    return cell;
  }

  cell.dominant = attack <= estimation ? PhaseLabel::Attack : PhaseLabel::Estimation;
  cell.boundary = attack == estimation;
  return cell;
}

std::vector<PhaseCell> phase_diagram(const Rational& beta, int d, PhaseRegime regime,
                                     std::span<const Rational> r_exponents) {
  if (r_exponents.empty()) throw InvalidArgument("phase_diagram: empty exponent grid");
  std::vector<PhaseCell> out;
  out.reserve(r_exponents.size());
  for (const auto& a : r_exponents) out.push_back(classify_phase(beta, d, regime, a));
  return out;
}

}  // namespace advinterp::theory
