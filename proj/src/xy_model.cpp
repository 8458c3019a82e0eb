#include "pgk/xy_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pgk {

namespace {

constexpr double kPi = std::numbers::pi;

// Qubit q lives at bit n-1-q of a basis index, matching quantum.cpp.
inline int bit_of(int q, int n) { return n - 1 - q; }

void check_ed_size(const XYParams& p) {
  p.validate();
  if (p.n > kMaxQubits) throw std::invalid_argument("XY model: exact diagonalization needs n <= 12");
}

// Calls emit(row, col, value) for every nonzero of H, iterating columns `col`
// over `states`.
template <typename Emit>
void for_each_element(const XYParams& p, const std::vector<std::uint32_t>& states, Emit&& emit) {
  const int n = p.n;
  const double h = p.J * p.h_over_J;
  const double same = -p.J * p.gamma;  // XX + YY amplitude on |00>,|11>
  const double diff = -p.J;            // on |01>,|10>
  for (std::uint32_t s : states) {
    double diag = 0.0;
    for (int q = 0; q < n; ++q) diag += ((s >> bit_of(q, n)) & 1U) ? h : -h;
    emit(s, s, diag);
    for (int q = 0; q < n; ++q) {
      const int a = bit_of(q, n);
      const int b = bit_of((q + 1) % n, n);
      const std::uint32_t t = s ^ (1U << a) ^ (1U << b);
      const bool equal = ((s >> a) & 1U) == ((s >> b) & 1U);
      emit(t, s, equal ? same : diff);
    }
  }
}

struct ParityBlock {
  std::vector<std::uint32_t> states;
  Eigen::MatrixXd h;
};

ParityBlock parity_block(const XYParams& p, int parity) {
  const std::uint32_t dim = 1U << p.n;
  ParityBlock blk;
  std::vector<int> local(dim, -1);
  for (std::uint32_t s = 0; s < dim; ++s) {
    if (std::popcount(s) % 2 == parity) {
      local[s] = static_cast<int>(blk.states.size());
      blk.states.push_back(s);
    }
  }
  const auto size = static_cast<Eigen::Index>(blk.states.size());
  blk.h = Eigen::MatrixXd::Zero(size, size);
  for_each_element(p, blk.states, [&](std::uint32_t row, std::uint32_t col, double v) {
    blk.h(local[row], local[col]) += v;
  });
  return blk;
}

double degeneracy_tolerance(double e) { return 1e-9 * std::max(1.0, std::abs(e)); }

}  // namespace

void XYParams::validate() const {
  if (n < 2) throw std::invalid_argument("XY model: n must be >= 2");
  if (!(J > 0.0)) throw std::invalid_argument("XY model: J must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("XY model: gamma must lie in [0, 1]");
  }
  if (!std::isfinite(h_over_J)) throw std::invalid_argument("XY model: h/J must be finite");
}

Observable xy_observable(const XYParams& p) {
  check_ed_size(p);
  Observable obs(p.n);
  const CMatrix xx = kron(pauli::x(), pauli::x());
  const CMatrix yy = kron(pauli::y(), pauli::y());
  const CMatrix bond = -p.J * (0.5 * (1.0 + p.gamma) * xx + 0.5 * (1.0 - p.gamma) * yy);
  const CMatrix field = -p.J * p.h_over_J * pauli::z();
  for (int i = 0; i < p.n; ++i) {
    obs.add_term({i, (i + 1) % p.n}, bond);
    obs.add_term({i}, field);
  }
  return obs;
}

CMatrix build_hamiltonian(const XYParams& p) {
  check_ed_size(p);
  const std::uint32_t dim = 1U << p.n;
  std::vector<std::uint32_t> all(dim);
  for (std::uint32_t s = 0; s < dim; ++s) all[s] = s;
  CMatrix h = CMatrix::Zero(dim, dim);
  for_each_element(p, all, [&](std::uint32_t row, std::uint32_t col, double v) { h(row, col) += v; });
  return h;
}

double ground_energy_ed(const XYParams& p) {
  check_ed_size(p);
  double e = std::numeric_limits<double>::infinity();
  for (int parity : {0, 1}) {
    const ParityBlock blk = parity_block(p, parity);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk.h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("ground_energy_ed: eigensolve failed");
    e = std::min(e, es.eigenvalues()(0));
  }
  return e;
}

EdGroundState ground_state_ed(const XYParams& p) {
  check_ed_size(p);
  const Eigen::Index dim = Eigen::Index{1} << p.n;
  ParityBlock blocks[2] = {parity_block(p, 0), parity_block(p, 1)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es[2];
  double e0 = std::numeric_limits<double>::infinity();
  for (int b = 0; b < 2; ++b) {
    es[b].compute(blocks[b].h);
    if (es[b].info() != Eigen::Success) throw std::runtime_error("ground_state_ed: eigensolve failed");
    e0 = std::min(e0, es[b].eigenvalues()(0));
  }
  const double tol = degeneracy_tolerance(e0);
  CMatrix rho = CMatrix::Zero(dim, dim);
  int degeneracy = 0;
  for (int b = 0; b < 2; ++b) {
    const auto& vals = es[b].eigenvalues();
    for (Eigen::Index k = 0; k < vals.size() && vals(k) <= e0 + tol; ++k) {
      CVector psi = CVector::Zero(dim);
      const auto v = es[b].eigenvectors().col(k);
      for (Eigen::Index i = 0; i < v.size(); ++i) psi(blocks[b].states[i]) = v(i);
      rho += psi * psi.adjoint();
      ++degeneracy;
    }
  }
  rho /= static_cast<double>(degeneracy);
  return EdGroundState{e0, DensityMatrix(std::move(rho)), degeneracy};
}

SectorEnergies sector_energies_ff(const XYParams& p) {
  p.validate();
  const int n = p.n;
  const double h = p.h_over_J;
  const double g = p.gamma;

  // Even Z-parity <-> antiperiodic fermions k = pi(2m+1)/n; odd <-> periodic
  // k = 2 pi m/n. Pairs (k, -k) contribute xi - eps to the vacuum; unpaired
  // modes k = 0, pi have energy xi when occupied. A pair can host one
  // quasiparticle at cost eps, which flips the parity.
  auto sector = [&](bool periodic, int required_parity) {
    double base = -h * n;
    double min_eps = std::numeric_limits<double>::infinity();
    std::vector<double> unpaired;
    for (int m = 0; m < n; ++m) {
      const double num = periodic ? 2.0 * m : 2.0 * m + 1.0;
      const double k = kPi * num / n;
      const double c = std::cos(k);
      const double s = std::sin(k);
      const double xi = 2.0 * (h - c);
      const bool self_paired = periodic ? (2 * m == 0 || 2 * m == n) : (2 * m + 1 == n);
      if (self_paired) {
        unpaired.push_back(xi);
        continue;
      }
      const double eps = 2.0 * std::hypot(h - c, g * s);
      // Each pair is visited twice, once for k and once for -k.
      base += 0.5 * (xi - eps);
      min_eps = std::min(min_eps, eps);
    }
    double best = std::numeric_limits<double>::infinity();
    const int configs = 1 << unpaired.size();
    for (int mask = 0; mask < configs; ++mask) {
      double e = base;
      for (std::size_t u = 0; u < unpaired.size(); ++u) {
        if (mask & (1 << u)) e += unpaired[u];
      }
      if (std::popcount(static_cast<unsigned>(mask)) % 2 != required_parity) {
        if (!std::isfinite(min_eps)) continue;
        e += min_eps;
      }
      best = std::min(best, e);
    }
    return p.J * best;
  };

  return SectorEnergies{sector(false, 0), sector(true, 1)};
}

double ground_energy_ff(const XYParams& p) {
  const SectorEnergies s = sector_energies_ff(p);
  return std::min(s.even, s.odd);
}

std::vector<double> sector_crossings(const XYParams& p, double h_lo, double h_hi, int resolution) {
  if (resolution < 100) throw std::invalid_argument("sector_crossings: resolution must be >= 100");
  if (!(h_hi > h_lo)) throw std::invalid_argument("sector_crossings: empty interval");
  auto gap = [&](double h) {
    XYParams q = p;
    q.h_over_J = h;
    const SectorEnergies s = sector_energies_ff(q);
    return s.even - s.odd;
  };
  std::vector<double> out;
  double x0 = h_lo;
  double g0 = gap(x0);
  for (int i = 1; i <= resolution; ++i) {
    const double x1 = h_lo + (h_hi - h_lo) * i / resolution;
    const double g1 = gap(x1);
    if (g0 == 0.0) {
      out.push_back(x0);
    } else if (g0 * g1 < 0.0) {
      double a = x0, b = x1, ga = g0;
      while (b - a > 1e-8) {
        const double c = 0.5 * (a + b);
        const double gc = gap(c);
        if (gc == 0.0) {
          a = b = c;
          break;
        }
        if ((gc < 0.0) == (ga < 0.0)) {
          a = c;
          ga = gc;
        } else {
          b = c;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    x0 = x1;
    g0 = g1;
  }
  if (g0 == 0.0) out.push_back(x0);
  return out;
}

namespace detail {

std::vector<double> majorana_contractions(double gamma, double h_over_J, int r) {
  // G(R) = (1/pi) int_0^pi [cos(kR)(cos k - h) + gamma sin(kR) sin k] / w(k) dk,
  // w(k) = sqrt((cos k - h)^2 + gamma^2 sin^2 k). Midpoint rule on the
  // half period is spectrally accurate for the smooth periodic integrand.
  const double h = h_over_J;
  const int points = 1 << 15;
  const int count = 2 * r + 1;
  std::vector<double> g(static_cast<std::size_t>(count), 0.0);
  std::vector<double> cos_part(static_cast<std::size_t>(points));
  std::vector<double> sin_part(static_cast<std::size_t>(points));
  const double dk = kPi / points;
  for (int i = 0; i < points; ++i) {
    const double k = (i + 0.5) * dk;
    const double c = std::cos(k);
    const double s = std::sin(k);
    const double w = std::hypot(c - h, gamma * s);
    cos_part[i] = (c - h) / w;
    sin_part[i] = gamma * s / w;
  }
  // e^{ikR} by rotation from R = -r, re-seeded every 32 steps.
  std::vector<double> acc(static_cast<std::size_t>(count), 0.0);
  for (int i = 0; i < points; ++i) {
    const double k = (i + 0.5) * dk;
    const std::complex<double> step = std::polar(1.0, k);
    std::complex<double> z;
    for (int j = 0; j < count; ++j) {
      z = j % 32 == 0 ? std::polar(1.0, k * (j - r)) : z * step;
      acc[j] += z.real() * cos_part[i] + z.imag() * sin_part[i];
    }
  }
  for (int j = 0; j < count; ++j) g[j] = acc[j] / points;
  return g;
}

double xx_correlator_toeplitz(double gamma, double h_over_J, int r) {
  if (r < 1) throw std::invalid_argument("xx_correlator_toeplitz: r must be >= 1");
  const std::vector<double> g = majorana_contractions(gamma, h_over_J, r);
  Eigen::MatrixXd m(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) m(a, b) = g[(b - a + 1) + r];
  }
  return m.partialPivLu().determinant();
}

}  // namespace detail

LongRangeOrder longrange_xx(double gamma, double h_over_J) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("longrange_xx: gamma must lie in (0, 1]");
  }
  const double v64 = 0.25 * detail::xx_correlator_toeplitz(gamma, h_over_J, 64);
  const double v128 = 0.25 * detail::xx_correlator_toeplitz(gamma, h_over_J, 128);
  LongRangeOrder out;
  out.delta = std::abs(v128 - v64);
  out.converged = out.delta <= 1e-6;
  out.value = v128;
  return out;
}

double longrange_xx_closed_form(double gamma, double h_over_J) {
  const double h2 = h_over_J * h_over_J;
  if (h2 >= 1.0) return 0.0;
  return 0.25 * 2.0 * std::sqrt(gamma) * std::pow(1.0 - h2, 0.25) / (1.0 + gamma);
}

}  // namespace pgk
