#include "advinterp/core_types.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace advinterp {

Norm parse_norm(std::string_view text) {
  if (text == "1") return Norm::L1;
  if (text == "2") return Norm::L2;
  if (text == "inf" || text == "Inf" || text == "infinity") return Norm::LInf;
  throw InvalidArgument("unknown norm '" + std::string(text) +
                        "' (expected 1, 2 or inf)");
}

std::string to_string(Norm norm) {
  switch (norm) {
    case Norm::L1: return "1";
    case Norm::L2: return "2";
    case Norm::LInf: return "inf";
  }
  return "?";
}

double distance(PointView a, PointView b, Norm norm) {
  double acc = 0.0;
  switch (norm) {
    case Norm::L1:
      for (std::size_t j = 0; j < a.size(); ++j) acc += std::abs(a[j] - b[j]);
      return acc;
    case Norm::L2:
      if (a.size() == 1) return std::abs(a[0] - b[0]);
      for (std::size_t j = 0; j < a.size(); ++j) {
        const double t = a[j] - b[j];
        acc += t * t;
      }
      return std::sqrt(acc);
    case Norm::LInf:
      for (std::size_t j = 0; j < a.size(); ++j)
        acc = std::max(acc, std::abs(a[j] - b[j]));
      return acc;
  }
  return acc;
}

BoxDomain::BoxDomain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InvalidArgument("BoxDomain: dimension must be >= 1");
  if (lower_.size() != upper_.size())
    throw InvalidArgument("BoxDomain: lower/upper dimension mismatch");
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] < upper_[j]))
      throw InvalidArgument("BoxDomain: lower must be < upper on every axis");
  }
}

BoxDomain BoxDomain::unit_cube(std::size_t dim) { return cube(dim, 0.0, 1.0); }

BoxDomain BoxDomain::cube(std::size_t dim, double lo, double hi) {
  return BoxDomain(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

double BoxDomain::width() const {
  double w = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) w = std::max(w, upper_[j] - lower_[j]);
  return w;
}

bool BoxDomain::contains(PointView x) const {
  if (x.size() != dim()) return false;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (x[j] < lower_[j] || x[j] > upper_[j]) return false;
  }
  return true;
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InvalidArgument("PointSet: dimension must be >= 1");
  if (coords_.size() % dim_ != 0)
    throw InvalidArgument("PointSet: coordinate count not a multiple of dim");
}

void PointSet::push_back(PointView x) {
  if (x.size() != dim_) throw InvalidArgument("PointSet: dimension mismatch");
  coords_.insert(coords_.end(), x.begin(), x.end());
}

Dataset::Dataset(BoxDomain domain, PointSet xs, std::vector<double> ys)
    : domain_(std::move(domain)), xs_(std::move(xs)), ys_(std::move(ys)) {
  if (ys_.empty()) throw InvalidArgument("Dataset: n must be >= 1");
  if (xs_.size() != ys_.size())
    throw InvalidArgument("Dataset: xs and ys differ in length");
  if (xs_.dim() != domain_.dim())
    throw InvalidArgument("Dataset: point dimension differs from domain");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!domain_.contains(xs_[i]))
      throw InvalidArgument("Dataset: point " + std::to_string(i) +
                            " lies outside the domain");
  }
}

NoiseModel::NoiseModel(double s) : sigma(s) {
  if (!(sigma > 0.0)) throw InvalidArgument("NoiseModel: sigma must be > 0");
}

void AttackSpec::validate() const {
  if (!(r >= 0.0)) throw InvalidArgument("AttackSpec: r must be >= 0");
  if (resolution < 2) throw InvalidArgument("AttackSpec: resolution must be >= 2");
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t base, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base),
                    static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t base_seed, std::uint64_t stream_index)
    : base_seed_(base_seed),
      stream_index_(stream_index),
      engine_(seeded_engine(base_seed, stream_index)) {}

SeededRng SeededRng::derive(std::uint64_t key) const {
  return SeededRng(mix64(base_seed_ ^ mix64(stream_index_)), key);
}

double SeededRng::uniform(double lo, double hi) {
  return boost::random::uniform_real_distribution<double>(lo, hi)(engine_);
}

double SeededRng::normal(double mean, double sd) {
  return boost::random::normal_distribution<double>(mean, sd)(engine_);
}

std::vector<std::size_t> neighbor_indices(const PointSet& xs, PointView x,
                                          double radius, Norm norm) {
  if (!(radius >= 0.0)) throw InvalidArgument("neighbor_indices: radius < 0");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (distance(xs[i], x, norm) <= radius) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> neighbor_indices(const PointSet& xs, PointView x,
                                          double radius, Norm norm,
                                          const BoxDomain& domain) {
  auto idx = neighbor_indices(xs, x, radius, norm);
  std::erase_if(idx, [&](std::size_t i) { return !domain.contains(xs[i]); });
  return idx;
}

PointSet clipped_ball_grid(PointView x, const AttackSpec& spec,
                           const BoxDomain& domain) {
  spec.validate();
  const std::size_t d = domain.dim();
  if (x.size() != d) throw InvalidArgument("clipped_ball_grid: dimension mismatch");
  if (!domain.contains(x))
    throw InvalidArgument("clipped_ball_grid: centre lies outside the domain");

  PointSet out(d);
  if (spec.r == 0.0) {
    out.push_back(x);
    return out;
  }
  const double log_size = static_cast<double>(d) *
                          std::log(static_cast<double>(spec.resolution));
  if (log_size > std::log(static_cast<double>(spec.max_grid_points)))
    throw GridTooLarge("clipped_ball_grid: resolution^d exceeds the grid cap");

  const std::size_t m = spec.resolution;
  std::vector<std::vector<double>> axes(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double lo = std::max(domain.lower(j), x[j] - spec.r);
    const double hi = std::min(domain.upper(j), x[j] + spec.r);
    axes[j].resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(m - 1);
      axes[j][k] = k + 1 == m ? hi : lo + (hi - lo) * t;
    }
  }

  std::vector<std::size_t> counter(d, 0);
  std::vector<double> point(d);
  bool centre_seen = false;
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= m;
  out.reserve(total + 1);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t j = 0; j < d; ++j) point[j] = axes[j][counter[j]];
    if (spec.p == Norm::LInf || distance(point, x, spec.p) <= spec.r) {
      out.push_back(point);
      if (std::equal(point.begin(), point.end(), x.begin())) centre_seen = true;
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (++counter[j] < m) break;
      counter[j] = 0;
    }
  }
  if (!centre_seen) out.push_back(x);
  return out;
}

}  // namespace advinterp
