#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qnetsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Tensor-basis ordering a StateVector's amplitudes refer to. Every
// multi-factor basis is row-major over its factors, first factor slowest.
enum class BasisLabel {
  Generic,
  QubitPosition,    // |x1>, |x2>
  QubitEnergy,      // |E1>=|g>, |E2>=|e>
  CavityEnergy,     // |E_phi1>, |E_phi2>
  JcEnergy,         // |E_phi_i> (x) |g/e>
  JcMixed,          // |E_phi_i> (x) |x1/x2>
  NetworkEnergy,    // |E_phi_i> (x) |g/e>_A (x) |g/e>_B
  NetworkPosition,  // |E_phi_i> (x) |x>_A (x) |x>_B
};

const char* to_string(BasisLabel basis) noexcept;

inline constexpr double kNormTolerance = 1e-10;

// Unit-norm amplitude vector. Construction rejects vectors whose norm is off
// by more than kNormTolerance; use normalized() to rescale explicitly.
class StateVector {
 public:
  StateVector(ComplexVector amplitudes, BasisLabel basis = BasisLabel::Generic);

  static StateVector normalized(ComplexVector amplitudes,
                                BasisLabel basis = BasisLabel::Generic);
  static StateVector basis_state(Eigen::Index dim, Eigen::Index index,
                                 BasisLabel basis = BasisLabel::Generic);

  Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  BasisLabel basis() const noexcept { return basis_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }
  double probability(Eigen::Index i) const { return std::norm(amplitudes_(i)); }

 private:
  ComplexVector amplitudes_;
  BasisLabel basis_;
};

struct EigenSystem {
  RealVector values;     // ascending
  ComplexMatrix vectors; // orthonormal columns, phase-fixed
};

double max_abs(const ComplexMatrix& m);

// max |A - A^dagger|
double hermitian_defect(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tolerance = 1e-12);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             const ComplexMatrix& c);
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);

// Rotates the global phase so the component of largest modulus (the last one
// among ties) is real and positive.
ComplexVector fix_phase(ComplexVector v);

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Eigenvalue clusters whose spread is below
/// 1e-10 * max(1, max|H|) get a canonical orthonormal basis (pivoted
/// Gram-Schmidt on the cluster projector) ordered lexicographically by rounded
/// components, so results do not depend on the solver's choice inside a
/// degenerate subspace. Throws Error(NotHermitian).
EigenSystem hermitian_eig(const ComplexMatrix& h);

/// exp(A). Hermitian and anti-Hermitian inputs are exponentiated in their
/// eigenbasis; anything else uses Pade scaling-and-squaring. Throws Error(NonFinite).
ComplexMatrix matrix_exp(const ComplexMatrix& a);

// exp(-i H dt) for Hermitian H.
ComplexMatrix unitary_step(const ComplexMatrix& h, double dt);

ComplexMatrix density_matrix(const StateVector& psi);

/// Reduced density matrix of subsystem `keep` for a state on the tensor
/// product of `dims`. Throws DimMismatch or NotNormalized (trace off by > 1e-10).
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> dims, int keep);

// True when the pure state has Schmidt rank 1 across every single-factor cut.
bool is_product_state(const StateVector& psi, std::span<const int> dims,
                      double tolerance = 1e-12);

using HamiltonianFn = std::function<ComplexMatrix(double)>;

/// Time-ordered product of midpoint exponentials exp(-i H(t_mid) h) over
/// ceil((t1 - t0) / dt) uniform steps of size h <= dt.
ComplexMatrix time_ordered_propagator(const HamiltonianFn& hamiltonian, double t0, double t1,
                                      double dt);

// Same stepping applied directly to a state.
ComplexVector evolve_stepped(const HamiltonianFn& hamiltonian, ComplexVector psi, double t0,
                             double t1, double dt);

std::size_t step_count(double t0, double t1, double dt);

}  // namespace qnetsim
