#include "pgk/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pgk/numeric.hpp"

namespace pgk {

namespace {

constexpr std::size_t kMaxGridPoints = 10'000'000;
constexpr int kValidationPointsPerDim = 10'000;
constexpr double kValidationBudget = 1e8;

int validation_points_per_dim(int m) {
  const double cap = std::floor(std::pow(kValidationBudget, 1.0 / m));
  return static_cast<int>(std::min<double>(kValidationPointsPerDim, cap));
}

// Tabulated inverse CDF of a one-dimensional density factor on [-L/2, L/2).
// The density is treated as piecewise constant on each cell, so the inverse is
// piecewise linear.
class InverseCdf {
 public:
  InverseCdf(const Density::Fn1d& f, double side, int cells)
      : side_(side), cdf_(static_cast<std::size_t>(cells) + 1, 0.0) {
    const double h = side / cells;
    for (int i = 0; i < cells; ++i) {
      const double x = -0.5 * side + (i + 0.5) * h;
      cdf_[i + 1] = cdf_[i] + f(x) * h;
    }
    const double total = cdf_.back();
    for (double& c : cdf_) c /= total;
  }

  double operator()(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = static_cast<std::size_t>(std::distance(cdf_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, cdf_.size() - 1) - 1;
    const double lo = cdf_[i];
    const double hi = cdf_[i + 1];
    const double cell = side_ / static_cast<double>(cdf_.size() - 1);
    const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
    return -0.5 * side_ + (static_cast<double>(i) + frac) * cell;
  }

 private:
  double side_;
  std::vector<double> cdf_;
};

}  // namespace

double Density::operator()(std::span<const double> x, double side) const {
  switch (form_) {
    case Form::Uniform:
      return std::pow(side, -static_cast<double>(x.size()));
    case Form::Product: {
      double v = 1.0;
      for (std::size_t j = 0; j < x.size(); ++j) v *= factors_[j](x[j]);
      return v;
    }
    case Form::General:
      return fn_(x);
  }
  return 0.0;
}

ParamSpace::ParamSpace(int m, double side, Density density)
    : m_(m), side_(side), density_(std::move(density)) {
  if (m < 1) throw std::invalid_argument("ParamSpace: dimension must be >= 1");
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw std::invalid_argument("ParamSpace: side length must be positive");
  }
  if (density_.form() == Density::Form::Uniform) return;
  if (density_.form() == Density::Form::Product &&
      density_.factors().size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("ParamSpace: product density needs one factor per dimension");
  }

  if (density_.form() == Density::Form::Product) {
    // Factorizes: validate each factor on a 1-D lattice.
    const std::vector<double> mid = midpoints(side, kValidationPointsPerDim);
    const double h = side / kValidationPointsPerDim;
    normalization_ = 1.0;
    double peak = 1.0;
    for (const auto& f : density_.factors()) {
      CompensatedSum total;
      double fmax = 0.0;
      for (double x : mid) {
        const double v = f(x);
        if (!std::isfinite(v) || v < 0.0) {
          throw std::invalid_argument("ParamSpace: density is negative or non-finite");
        }
        total.add(v * h);
        fmax = std::max(fmax, v * side);
      }
      normalization_ *= total.value();
      peak *= fmax;
    }
    if (std::abs(normalization_ - 1.0) > 1e-6) {
      throw std::invalid_argument("ParamSpace: density integrates to " +
                                  std::to_string(normalization_) + ", expected 1");
    }
    envelope_ = 1.01 * peak;
    return;
  }

  // Midpoint quadrature of the density and grid maximum of density/uniform.
  const int q = validation_points_per_dim(m);
  const std::vector<double> mid = midpoints(side, q);
  const double cell = std::pow(side / q, m);
  const double uniform = std::pow(side, -m);
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  std::vector<double> x(static_cast<std::size_t>(m));
  CompensatedSum total;
  double peak = 0.0;
  while (true) {
    for (int j = 0; j < m; ++j) x[j] = mid[idx[j]];
    const double v = density_(x, side);
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("ParamSpace: density is negative or non-finite");
    }
    total.add(v * cell);
    peak = std::max(peak, v / uniform);
    int j = 0;
    while (j < m && ++idx[j] == q) idx[j++] = 0;
    if (j == m) break;
  }
  normalization_ = total.value();
  if (std::abs(normalization_ - 1.0) > 1e-6) {
    throw std::invalid_argument("ParamSpace: density integrates to " +
                                std::to_string(normalization_) + ", expected 1");
  }
  // Grid maximization can miss a peak between lattice points; 1% headroom.
  envelope_ = 1.01 * peak;
}

double ParamSpace::uniform_density() const { return std::pow(side_, -m_); }

double wrap_coordinate(double c, double side) {
  const double half = 0.5 * side;
  double w = c - side * std::floor((c + half) / side);
  if (w >= half) w -= side;
  if (w < -half) w += side;
  return w;
}

ParamPoint wrap(std::span<const double> raw, const ParamSpace& space) {
  if (raw.size() != static_cast<std::size_t>(space.dim())) {
    throw std::invalid_argument("wrap: dimension mismatch");
  }
  ParamPoint p;
  p.coords.reserve(raw.size());
  for (double c : raw) p.coords.push_back(wrap_coordinate(c, space.side()));
  return p;
}

double torus_distance(const ParamPoint& a, const ParamPoint& b, const ParamSpace& space) {
  const std::size_t m = static_cast<std::size_t>(space.dim());
  if (a.dim() != m || b.dim() != m) {
    throw std::invalid_argument("torus_distance: dimension mismatch");
  }
  const double side = space.side();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double d = std::fmod(std::abs(a[j] - b[j]), side);
    d = std::min(d, side - d);
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<ParamPoint> sample(const ParamSpace& space, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
  const int m = space.dim();
  const double side = space.side();
  Rng rng(seed);
  std::vector<ParamPoint> out(count);

  switch (space.density().form()) {
    case Density::Form::Uniform:
      for (auto& p : out) {
        p.coords.resize(static_cast<std::size_t>(m));
        for (auto& c : p.coords) c = wrap_coordinate(rng.uniform(-0.5 * side, 0.5 * side), side);
      }
      break;
    case Density::Form::Product: {
      std::vector<InverseCdf> inv;
      for (const auto& f : space.density().factors()) {
        inv.emplace_back(f, side, kValidationPointsPerDim);
      }
      for (auto& p : out) {
        p.coords.resize(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) p.coords[j] = wrap_coordinate(inv[j](rng.uniform()), side);
      }
      break;
    }
    case Density::Form::General: {
      const double envelope = space.envelope();
      const double uniform = space.uniform_density();
      std::vector<double> x(static_cast<std::size_t>(m));
      for (auto& p : out) {
        while (true) {
          for (auto& c : x) c = wrap_coordinate(rng.uniform(-0.5 * side, 0.5 * side), side);
          const double accept = space.density_at(x) / (uniform * envelope);
          if (rng.uniform() < accept) break;
        }
        p.coords = x;
      }
      break;
    }
  }
  return out;
}

std::vector<double> midpoints(double side, int count) {
  std::vector<double> mid(static_cast<std::size_t>(count));
  const double h = side / count;
  for (int i = 0; i < count; ++i) mid[i] = -0.5 * side + (i + 0.5) * h;
  return mid;
}

std::vector<ParamPoint> grid(const ParamSpace& space, int points_per_dim) {
  if (points_per_dim < 2) throw std::invalid_argument("grid: points_per_dim must be >= 2");
  const int m = space.dim();
  const double total = std::pow(static_cast<double>(points_per_dim), m);
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw std::length_error("grid: more than 1e7 points requested");
  }
  const std::vector<double> mid = midpoints(space.side(), points_per_dim);
  std::vector<ParamPoint> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    ParamPoint p;
    p.coords.resize(static_cast<std::size_t>(m));
    // Last coordinate varies fastest.
    for (int j = 0; j < m; ++j) p.coords[j] = mid[idx[j]];
    out.push_back(std::move(p));
    int j = m - 1;
    while (j >= 0 && ++idx[j] == points_per_dim) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace pgk
