#include "pgk/quantum.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pgk {

namespace {

int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw std::invalid_argument("dimension is not a power of two");
  }
  return n;
}

// Bit position of qubit q in a basis index (qubit 0 is most significant).
inline int bit_of(int q, int n_qubits) { return n_qubits - 1 - q; }

void check_support(const std::vector<int>& support, int n_qubits) {
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (support[a] < 0 || support[a] >= n_qubits) {
      throw std::invalid_argument("support qubit out of range");
    }
    for (std::size_t b = a + 1; b < support.size(); ++b) {
      if (support[a] == support[b]) throw std::invalid_argument("repeated qubit in support");
    }
  }
}

// Local index (support order, first qubit most significant) of a full index.
inline Eigen::Index local_index(Eigen::Index full, const std::vector<int>& support, int n) {
  Eigen::Index s = 0;
  for (int q : support) s = (s << 1) | ((full >> bit_of(q, n)) & 1);
  return s;
}

// Full index with the support bits replaced by those of local index s.
inline Eigen::Index with_local(Eigen::Index full, Eigen::Index s, const std::vector<int>& support,
                               int n) {
  const int k = static_cast<int>(support.size());
  for (int a = 0; a < k; ++a) {
    const int bit = bit_of(support[a], n);
    const Eigen::Index v = (s >> (k - 1 - a)) & 1;
    full = (full & ~(Eigen::Index{1} << bit)) | (v << bit);
  }
  return full;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
  }
  n_qubits_ = qubits_for_dim(entries_.rows());
  if (n_qubits_ > kMaxQubits) throw std::invalid_argument("DensityMatrix: more than 12 qubits");
}

DensityMatrix DensityMatrix::checked(CMatrix entries, double tol) {
  DensityMatrix rho(std::move(entries));
  const ValidationReport r = validate(rho.entries_, tol);
  if (!r.passed()) {
    throw std::invalid_argument("DensityMatrix: not a valid density matrix (min eigenvalue " +
                                std::to_string(r.min_eigenvalue) + ", trace deviation " +
                                std::to_string(r.trace_deviation) + ")");
  }
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

Observable::Observable(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("Observable: qubit count must be in [1, 12]");
  }
}

void Observable::add_term(std::vector<int> support, CMatrix op) {
  check_support(support, n_qubits_);
  const Eigen::Index d = Eigen::Index{1} << support.size();
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("Observable: local operator size does not match support");
  }
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("Observable: local operator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(op, Eigen::EigenvaluesOnly);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  terms_.push_back(LocalTerm{std::move(support), std::move(op), norm});
}

CMatrix Observable::to_matrix() const {
  const Eigen::Index d = Eigen::Index{1} << n_qubits_;
  CMatrix full = CMatrix::Zero(d, d);
  for (const auto& t : terms_) full += embed(t.op, t.support, n_qubits_);
  return full;
}

namespace pauli {
CMatrix identity() { return CMatrix::Identity(2, 2); }
CMatrix x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
CMatrix z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix embed(const CMatrix& op, const std::vector<int>& support, int n_qubits) {
  check_support(support, n_qubits);
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const Eigen::Index k = Eigen::Index{1} << support.size();
  if (op.rows() != k || op.cols() != k) throw std::invalid_argument("embed: size mismatch");
  CMatrix full = CMatrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const Eigen::Index s_col = local_index(col, support, n_qubits);
    for (Eigen::Index s_row = 0; s_row < k; ++s_row) {
      const Complex v = op(s_row, s_col);
      if (v == Complex(0.0)) continue;
      full(with_local(col, s_row, support, n_qubits), col) += v;
    }
  }
  return full;
}

CMatrix partial_trace_to(const CMatrix& rho, const std::vector<int>& support, int n_qubits) {
  check_support(support, n_qubits);
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const Eigen::Index k = Eigen::Index{1} << support.size();
  if (rho.rows() != d || rho.cols() != d) throw std::invalid_argument("partial_trace: size mismatch");
  CMatrix out = CMatrix::Zero(k, k);
  // Each full index i contributes rho(i', i) to out(s', s) where i' equals i
  // off the support.
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index s = local_index(i, support, n_qubits);
    for (Eigen::Index sp = 0; sp < k; ++sp) {
      out(sp, s) += rho(with_local(i, sp, support, n_qubits), i);
    }
  }
  return out;
}

double expectation(const Observable& obs, const CMatrix& rho) {
  const Eigen::Index d = Eigen::Index{1} << obs.n_qubits();
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("expectation: observable and state dimensions differ");
  }
  Complex total = 0.0;
  for (const auto& t : obs.terms()) {
    const CMatrix reduced = partial_trace_to(rho, t.support, obs.n_qubits());
    total += (t.op * reduced).trace();
  }
  if (std::abs(total.imag()) > 1e-8) {
    throw std::domain_error("expectation: imaginary part exceeds 1e-8 (non-Hermitian input)");
  }
  return total.real();
}

double expectation(const Observable& obs, const DensityMatrix& rho) {
  return expectation(obs, rho.matrix());
}

double linf_entry_norm(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("linf_entry_norm: dimension mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

ValidationReport validate(const CMatrix& rho, double tol) {
  ValidationReport r;
  if (rho.rows() != rho.cols() || rho.size() == 0) return r;
  r.hermiticity_residual = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  r.trace_deviation = std::abs(rho.trace() - Complex(1.0));
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.hermitian = r.hermiticity_residual <= tol;
  r.unit_trace = r.trace_deviation <= tol;
  r.positive = r.min_eigenvalue >= -tol;
  return r;
}

}  // namespace pgk
