#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace pgk {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 12;

/// 2^n x 2^n density matrix in the computational (sigma^z product) basis.
/// Qubit 0 is the leftmost Kronecker factor (most significant index bit).
class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Checks shape only (square, power-of-two dimension, n <= 12).
  explicit DensityMatrix(CMatrix entries);

  /// Shape check plus validate(entries, tol); throws std::invalid_argument
  /// when any of Hermiticity, unit trace, or PSD fails.
  static DensityMatrix checked(CMatrix entries, double tol = 1e-10);
  static DensityMatrix maximally_mixed(int n_qubits);
  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(const CVector& psi);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }

 private:
  int n_qubits_ = 0;
  CMatrix entries_;
};

/// Hermitian operator acting on a subset of qubits.
struct LocalTerm {
  std::vector<int> support;
  CMatrix op;
  double norm_bound = 0.0;  // operator norm of op
};

/// Sum of local Hermitian terms O = sum_i O_i on n qubits.
class Observable {
 public:
  explicit Observable(int n_qubits);

  /// Throws std::invalid_argument for a non-Hermitian op (1e-12), a support
  /// outside [0, n) or with repeated qubits, or a size mismatch.
  void add_term(std::vector<int> support, CMatrix op);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<LocalTerm>& terms() const { return terms_; }

  /// Dense 2^n x 2^n matrix of the full operator.
  CMatrix to_matrix() const;

 private:
  int n_qubits_;
  std::vector<LocalTerm> terms_;
};

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Embeds an operator on `support` into the full n-qubit space.
CMatrix embed(const CMatrix& op, const std::vector<int>& support, int n_qubits);

/// Reduced density matrix on `support` (ordered as given).
CMatrix partial_trace_to(const CMatrix& rho, const std::vector<int>& support, int n_qubits);

/// sum_i Tr(O_i rho). Throws std::invalid_argument on dimension mismatch and
/// std::domain_error when the imaginary part exceeds 1e-8.
double expectation(const Observable& obs, const DensityMatrix& rho);
double expectation(const Observable& obs, const CMatrix& rho);

/// max_ij |a_ij - b_ij|.
double linf_entry_norm(const CMatrix& a, const CMatrix& b);

struct ValidationReport {
  double hermiticity_residual = 0.0;  // max |rho - rho^dagger|
  double trace_deviation = 0.0;       // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;
  bool passed() const { return hermitian && unit_trace && positive; }
};

/// Hermiticity, trace and spectrum checks at tolerance `tol`.
ValidationReport validate(const CMatrix& rho, double tol = 1e-10);

}  // namespace pgk
