#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace pgk {

/// A point of the parameter box. Coordinates are expected to be wrapped into
/// [-L/2, L/2) by the owning ParamSpace.
struct ParamPoint {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }
  bool operator==(const ParamPoint&) const = default;
};

/// Probability density on the parameter box.
///
/// Three representations are supported: the uniform density 1/L^m, a product
/// of one-dimensional factors (sampled by inverse CDF), and an arbitrary
/// function (sampled by rejection against the uniform envelope).
class Density {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  using Fn1d = std::function<double(double)>;

  enum class Form { Uniform, Product, General };

  static Density uniform() { return Density(Form::Uniform, {}, {}); }
  static Density product(std::vector<Fn1d> factors) {
    return Density(Form::Product, std::move(factors), {});
  }
  static Density general(Fn fn) { return Density(Form::General, {}, std::move(fn)); }

  Form form() const { return form_; }
  const std::vector<Fn1d>& factors() const { return factors_; }

  /// Density value at x for a box of dimension x.size() and side L.
  double operator()(std::span<const double> x, double side) const;

 private:
  Density(Form form, std::vector<Fn1d> factors, Fn fn)
      : form_(form), factors_(std::move(factors)), fn_(std::move(fn)) {}

  Form form_;
  std::vector<Fn1d> factors_;
  Fn fn_;
};

/// The periodic box [-L/2, L/2)^m with a probability density.
class ParamSpace {
 public:
  /// Throws std::invalid_argument for m < 1, L <= 0, or a density that is
  /// negative somewhere or does not integrate to 1 within 1e-6.
  ParamSpace(int m, double side, Density density = Density::uniform());

  int dim() const { return m_; }
  double side() const { return side_; }
  const Density& density() const { return density_; }
  bool is_uniform() const { return density_.form() == Density::Form::Uniform; }

  double density_at(std::span<const double> x) const { return density_(x, side_); }
  double uniform_density() const;

  /// Rejection envelope: max of density/uniform on the validation grid.
  double envelope() const { return envelope_; }
  /// Quadrature of the density over the box, computed at construction.
  double normalization() const { return normalization_; }

 private:
  int m_;
  double side_;
  Density density_;
  double envelope_ = 1.0;
  double normalization_ = 1.0;
};

/// Maps every coordinate into [-L/2, L/2) modulo L.
ParamPoint wrap(std::span<const double> raw, const ParamSpace& space);
double wrap_coordinate(double c, double side);

/// Shortest periodic l2 distance. Throws std::invalid_argument on dimension
/// mismatch.
double torus_distance(const ParamPoint& a, const ParamPoint& b, const ParamSpace& space);

/// N i.i.d. draws from the space's density. Deterministic in `seed`.
std::vector<ParamPoint> sample(const ParamSpace& space, std::size_t count, std::uint64_t seed);

/// Regular lattice of cell midpoints, points_per_dim^m points with spacing
/// L/points_per_dim. Throws std::length_error beyond 1e7 points.
std::vector<ParamPoint> grid(const ParamSpace& space, int points_per_dim);

/// Midpoint coordinates of a 1-D lattice with `count` cells over [-L/2, L/2).
std::vector<double> midpoints(double side, int count);

}  // namespace pgk
