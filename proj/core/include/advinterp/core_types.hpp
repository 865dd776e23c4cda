#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace advinterp {

//! Error raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//! Error raised by numerical routines that cannot produce a finite answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Exhaustive candidate grid would exceed the configured size cap.
class GridTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PointView = std::span<const double>;

//! Norm index of an l_p ball. Only 1, 2 and infinity are supported.
enum class Norm { L1, L2, LInf };

Norm parse_norm(std::string_view text);
std::string to_string(Norm norm);

//! ||a - b||_p
double distance(PointView a, PointView b, Norm norm);

//! Axis-aligned box [lower_j, upper_j] in d dimensions.
class BoxDomain {
 public:
  BoxDomain(std::vector<double> lower, std::vector<double> upper);

  static BoxDomain unit_cube(std::size_t dim);
  //! [lo, hi]^dim
  static BoxDomain cube(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return lower_.size(); }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }
  //! Largest side length.
  double width() const;
  bool contains(PointView x) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

//! Flat, row-major list of points of a common dimension.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }
  PointView operator[](std::size_t i) const {
    return PointView(coords_.data() + i * dim_, dim_);
  }
  void push_back(PointView x);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

//! Paired design points and responses over a box domain.
class Dataset {
 public:
  Dataset(BoxDomain domain, PointSet xs, std::vector<double> ys);

  const BoxDomain& domain() const { return domain_; }
  const PointSet& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  std::size_t size() const { return ys_.size(); }
  std::size_t dim() const { return xs_.dim(); }
  PointView x(std::size_t i) const { return xs_[i]; }
  double y(std::size_t i) const { return ys_[i]; }

 private:
  BoxDomain domain_;
  PointSet xs_;
  std::vector<double> ys_;
};

//! Gaussian noise xi ~ N(0, sigma^2).
struct NoiseModel {
  explicit NoiseModel(double sigma);
  double sigma;
};

//! Clipped l_p perturbation ball used by future-X attacks.
struct AttackSpec {
  double r = 0.0;
  Norm p = Norm::LInf;
  //! Grid points per axis inside the ball.
  std::size_t resolution = 101;
  //! Maximum number of points an exhaustive grid may hold.
  std::size_t max_grid_points = 2'000'000;

  void validate() const;
};

//! Reproducible random stream identified by (base_seed, stream_index).
//!
//! Child streams for parallel work are derived with derive(); two streams
//! with different indices are seeded through std::seed_seq from distinct
//! keys and do not share state.
class SeededRng {
 public:
  using engine_type = std::mt19937_64;

  SeededRng(std::uint64_t base_seed, std::uint64_t stream_index);

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  //! Independent child stream keyed by this stream and `key`.
  SeededRng derive(std::uint64_t key) const;

  double uniform(double lo, double hi);
  double normal(double mean, double sd);
  std::uint64_t next() { return engine_(); }

  engine_type& engine() { return engine_; }

 private:
  std::uint64_t base_seed_;
  std::uint64_t stream_index_;
  engine_type engine_;
};

//! splitmix64 finalizer, used to combine stream keys.
std::uint64_t mix64(std::uint64_t x);

//! { i : ||xs[i] - x||_p <= radius }, ascending.
std::vector<std::size_t> neighbor_indices(const PointSet& xs, PointView x,
                                          double radius, Norm norm);

//! Same as above, also requiring xs[i] to lie inside `domain`.
std::vector<std::size_t> neighbor_indices(const PointSet& xs, PointView x,
                                          double radius, Norm norm,
                                          const BoxDomain& domain);

//! Equally spaced grid over B_p(x, r) intersected with the domain.
//!
//! Per axis the grid covers [max(lo, x_j - r), min(hi, x_j + r)] with
//! spec.resolution points; for p < inf the box grid is filtered by the
//! closed ball. The centre x is always included.
PointSet clipped_ball_grid(PointView x, const AttackSpec& spec,
                           const BoxDomain& domain);

}  // namespace advinterp
