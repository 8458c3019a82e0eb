#pragma once

#include <utility>
#include <vector>

#include "pgk/quantum.hpp"

namespace pgk {

/// Periodic 1-D XY chain
///   H = -J sum_i [(1+g)/2 X_i X_{i+1} + (1-g)/2 Y_i Y_{i+1} + (h/J) Z_i],
/// site n+1 identified with site 1.
struct XYParams {
  int n = 5;
  double J = 1.0;
  double gamma = 1.0 / 3.0;
  double h_over_J = 0.0;

  /// Throws std::invalid_argument unless J > 0, 0 <= gamma <= 1 and n >= 2.
  void validate() const;
};

/// The Hamiltonian as a sum of 2-local and 1-local terms.
Observable xy_observable(const XYParams& p);

/// Dense Hamiltonian, n <= 12.
CMatrix build_hamiltonian(const XYParams& p);

struct EdGroundState {
  double energy = 0.0;
  DensityMatrix rho;      // projector, or uniform mixture over a degenerate ground space
  int degeneracy = 1;
};

/// Exact diagonalization in the two Z-parity blocks, n <= 12. Ground states
/// within 1e-9 (relative) of the minimum are mixed with equal weights.
EdGroundState ground_state_ed(const XYParams& p);

/// Lowest eigenvalue only (same parity-block diagonalization).
double ground_energy_ed(const XYParams& p);

/// Lowest energy in the even (antiperiodic fermions) and odd (periodic
/// fermions) Z-parity sectors from the Jordan-Wigner/Bogoliubov solution.
struct SectorEnergies {
  double even = 0.0;
  double odd = 0.0;
};
SectorEnergies sector_energies_ff(const XYParams& p);

/// min(even, odd). O(n).
double ground_energy_ff(const XYParams& p);

/// Fields h/J in [h_lo, h_hi] where the even and odd sector energies cross,
/// located by sign changes on a `resolution`-point scan and refined by
/// bisection to 1e-8. `p.h_over_J` is ignored.
std::vector<double> sector_crossings(const XYParams& p, double h_lo, double h_hi, int resolution);

struct LongRangeOrder {
  double value = 0.0;     // lim_r <S^x_0 S^x_r>, sign fixed so gamma=1, h=0 gives +1/4
  bool converged = false; // |value(128) - value(64)| <= 1e-6
  double delta = 0.0;     // |value(128) - value(64)|
};

/// Thermodynamic-limit long-range order from r x r Toeplitz determinants at
/// r = 64 and 128 (value at 128). Requires 0 < gamma <= 1.
LongRangeOrder longrange_xx(double gamma, double h_over_J);

/// Closed-form limit 2 sqrt(gamma) (1 - h^2)^{1/4} / (4 (1 + gamma)) for
/// |h| < 1 and 0 otherwise (S = sigma/2 units).
double longrange_xx_closed_form(double gamma, double h_over_J);

namespace detail {
/// <sigma^x_0 sigma^x_r> in the infinite chain as an r x r Toeplitz determinant.
double xx_correlator_toeplitz(double gamma, double h_over_J, int r);
/// G(R) = <B_0 A_R> for R in [-r, r], index R + r.
std::vector<double> majorana_contractions(double gamma, double h_over_J, int r);
}  // namespace detail

}  // namespace pgk
