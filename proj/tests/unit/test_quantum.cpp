#include <doctest.h>

#include "pgk/numeric.hpp"
#include "pgk/quantum.hpp"
#include "pgk/xy_model.hpp"

using namespace pgk;

namespace {

CVector random_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  CVector v(1 << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return v.normalized();
}

CMatrix random_hermitian(int dim, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return 0.5 * (a + a.adjoint());
}

DensityMatrix random_mixed(int n, std::uint64_t seed) {
  CMatrix rho = CMatrix::Zero(1 << n, 1 << n);
  Rng rng(seed);
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double w = rng.uniform(0.1, 1.0);
    const CVector v = random_state(n, seed + 100 + k);
    rho += w * v * v.adjoint();
    total += w;
  }
  return DensityMatrix::checked(rho / total);
}

}  // namespace

TEST_CASE("expectation values") {
  for (int n : {1, 3, 5}) {
    Observable id(n);
    id.add_term({0}, pauli::identity());
    CHECK(expectation(id, random_mixed(n, 7)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // sigma^z on qubit 0 with |0><0| (x) (I/2)^{n-1}.
  const int n = 3;
  CMatrix zero = CMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  CMatrix rho = zero;
  for (int q = 1; q < n; ++q) rho = kron(rho, 0.5 * pauli::identity());
  Observable z(n);
  z.add_term({0}, pauli::z());
  CHECK(expectation(z, DensityMatrix::checked(rho)) == doctest::Approx(1.0));

  SUBCASE("XY Hamiltonian on its ED ground state") {
    XYParams p;
    p.n = 5;
    p.gamma = 1.0 / 3.0;
    p.h_over_J = 0.0;
    const EdGroundState gs = ground_state_ed(p);
    CHECK(std::abs(expectation(xy_observable(p), gs.rho) - gs.energy) <= 1e-10);
  }

  SUBCASE("errors") {
    Observable z2(2);
    z2.add_term({1}, pauli::z());
    CHECK_THROWS_AS(expectation(z2, DensityMatrix::maximally_mixed(3)), std::invalid_argument);
    CMatrix bad = CMatrix::Zero(2, 2);
    bad(0, 1) = Complex(0.0, 1.0);
    Observable x1(1);
    x1.add_term({0}, pauli::x());
    CHECK_THROWS_AS(expectation(x1, CMatrix(bad)), std::domain_error);
    Observable o(2);
    CHECK_THROWS_AS(o.add_term({0}, bad), std::invalid_argument);
    CHECK_THROWS_AS(o.add_term({0, 0}, kron(pauli::x(), pauli::x())), std::invalid_argument);
    CHECK_THROWS_AS(o.add_term({2}, pauli::x()), std::invalid_argument);
  }
}

TEST_CASE("expectation is linear in both arguments") {
  for (int n : {2, 3, 4}) {
    const DensityMatrix a = random_mixed(n, 10 + n), b = random_mixed(n, 20 + n);
    Observable o1(n), o2(n), sum(n);
    const CMatrix h1 = random_hermitian(4, 30 + n), h2 = random_hermitian(2, 40 + n);
    o1.add_term({0, n - 1}, h1);
    o2.add_term({1}, h2);
    sum.add_term({0, n - 1}, h1);
    sum.add_term({1}, h2);
    CHECK(std::abs(expectation(sum, a) - expectation(o1, a) - expectation(o2, a)) <= 1e-10);
    const CMatrix mix = 0.3 * a.matrix() + 0.7 * b.matrix();
    CHECK(std::abs(expectation(o1, mix) - 0.3 * expectation(o1, a) - 0.7 * expectation(o1, b)) <= 1e-10);
    // Dense operator agrees with the term-wise sum.
    CHECK(std::abs((sum.to_matrix() * a.matrix()).trace().real() - expectation(sum, a)) <= 1e-10);
  }
}

TEST_CASE("entry-wise l_inf distance") {
  const CMatrix a = 0.5 * CMatrix::Identity(2, 2);
  CMatrix b = a;
  b(0, 0) += 0.03;
  b(1, 1) -= 0.03;
  CHECK(linf_entry_norm(a, a) == 0.0);
  CHECK(linf_entry_norm(a, b) == doctest::Approx(0.03));
  CHECK(linf_entry_norm(b, a) == linf_entry_norm(a, b));
  CHECK_THROWS_AS(linf_entry_norm(a, CMatrix::Identity(4, 4)), std::invalid_argument);
}

TEST_CASE("validation reports") {
  for (int n : {1, 4}) CHECK(validate(DensityMatrix::maximally_mixed(n).matrix()).passed());
  CHECK(validate(DensityMatrix::pure(random_state(3, 5)).matrix()).passed());

  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.01;
  neg(1, 1) = -0.01;
  const ValidationReport r = validate(neg);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.positive);
  CHECK(r.min_eigenvalue == doctest::Approx(-0.01));
  CHECK_THROWS_AS(DensityMatrix::checked(neg), std::invalid_argument);

  CMatrix nonherm = 0.5 * CMatrix::Identity(2, 2);
  nonherm(0, 1) = 0.1;
  CHECK_FALSE(validate(nonherm).hermitian);
  CHECK_FALSE(validate(CMatrix::Identity(2, 2)).unit_trace);
  CHECK_THROWS_AS(DensityMatrix(CMatrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("kron, embed and partial trace") {
  const CMatrix xz = kron(pauli::x(), pauli::z());
  CHECK(xz.rows() == 4);
  CHECK((embed(pauli::x(), {0}, 2) * embed(pauli::z(), {1}, 2) - xz).norm() < 1e-14);
  CHECK((embed(xz, {1, 0}, 2) - kron(pauli::z(), pauli::x())).norm() < 1e-14);
  const DensityMatrix rho = random_mixed(3, 99);
  const CMatrix r0 = partial_trace_to(rho.matrix(), {0}, 3);
  CHECK(validate(r0).passed());
  Observable z0(3);
  z0.add_term({0}, pauli::z());
  CHECK((pauli::z() * r0).trace().real() == doctest::Approx(expectation(z0, rho)));
}
