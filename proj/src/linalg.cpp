#include "qnetsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "qnetsim/error.hpp"

namespace qnetsim {

namespace {

// Relative size of an eigenvalue cluster treated as exactly degenerate.
constexpr double kClusterTolerance = 1e-10;
constexpr double kLexRounding = 1e9;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimMismatch, std::string(what) + ": matrix is not square");
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite entry");
}

bool lex_less(const ComplexVector& a, const ComplexVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double ar = std::round(a(i).real() * kLexRounding);
    const double br = std::round(b(i).real() * kLexRounding);
    if (ar != br) return ar < br;
    const double ai = std::round(a(i).imag() * kLexRounding);
    const double bi = std::round(b(i).imag() * kLexRounding);
    if (ai != bi) return ai < bi;
  }
  return false;
}

// Pivoted Gram-Schmidt over the projected standard basis P e_j.
ComplexMatrix canonical_basis(const ComplexMatrix& cluster) {
  const Eigen::Index n = cluster.rows();
  const Eigen::Index m = cluster.cols();
  ComplexMatrix candidates = cluster * cluster.adjoint();
  ComplexMatrix basis(n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::Index best = 0;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double nj = candidates.col(j).norm();
      if (nj > best_norm + 1e-12) {
        best_norm = nj;
        best = j;
      }
    }
    ComplexVector v = candidates.col(best) / best_norm;
    basis.col(k) = v;
    // Remove the chosen direction from every remaining candidate.
    candidates -= v * (v.adjoint() * candidates);
  }
  return basis;
}

// exp applied to the eigenvalues of a Hermitian matrix, without the
// degeneracy canonicalization hermitian_eig performs.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (h + h.adjoint()));
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonFinite, "matrix_exp: eigensolver did not converge");
  ComplexVector diag(solver.eigenvalues().size());
  for (Eigen::Index k = 0; k < diag.size(); ++k) diag(k) = f(solver.eigenvalues()(k));
  return solver.eigenvectors() * diag.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

const char* to_string(BasisLabel basis) noexcept {
  switch (basis) {
    case BasisLabel::Generic: return "generic";
    case BasisLabel::QubitPosition: return "qubit_position";
    case BasisLabel::QubitEnergy: return "qubit_energy";
    case BasisLabel::CavityEnergy: return "cavity_energy";
    case BasisLabel::JcEnergy: return "jc_energy";
    case BasisLabel::JcMixed: return "jc_mixed";
    case BasisLabel::NetworkEnergy: return "network_energy";
    case BasisLabel::NetworkPosition: return "network_position";
  }
  return "unknown";
}

StateVector::StateVector(ComplexVector amplitudes, BasisLabel basis)
    : amplitudes_(std::move(amplitudes)), basis_(basis) {
  if (amplitudes_.size() == 0) throw Error(ErrorCode::DimMismatch, "state vector is empty");
  if (!amplitudes_.allFinite()) throw Error(ErrorCode::NonFinite, "state vector: non-finite amplitude");
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTolerance)
    throw Error(ErrorCode::NotNormalized,
                "state vector norm^2 = " + std::to_string(norm2) + ", expected 1");
}

StateVector StateVector::normalized(ComplexVector amplitudes, BasisLabel basis) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero or non-finite vector");
  return StateVector(amplitudes / norm, basis);
}

StateVector StateVector::basis_state(Eigen::Index dim, Eigen::Index index, BasisLabel basis) {
  if (index < 0 || index >= dim) throw Error(ErrorCode::DimMismatch, "basis index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return StateVector(std::move(v), basis);
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_defect(const ComplexMatrix& m) {
  require_square(m, "hermitian_defect");
  return max_abs(m - m.adjoint());
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  return m.rows() == m.cols() && hermitian_defect(m) <= tolerance * std::max(1.0, max_abs(m));
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             const ComplexMatrix& c) {
  return tensor_product(tensor_product(a, b), c);
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexVector fix_phase(ComplexVector v) {
  if (v.size() == 0) return v;
  const double largest = v.cwiseAbs().maxCoeff();
  if (largest == 0.0) return v;
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= largest * (1.0 - 1e-12)) pivot = i;
  const Complex phase = std::conj(v(pivot)) / std::abs(v(pivot));
  v *= phase;
  v(pivot) = std::abs(v(pivot));
  return v;
}

EigenSystem hermitian_eig(const ComplexMatrix& h) {
  require_square(h, "hermitian_eig");
  require_finite(h, "hermitian_eig");
  if (!is_hermitian(h))
    throw Error(ErrorCode::NotHermitian,
                "hermitian_eig: max|H - H^dagger| = " + std::to_string(hermitian_defect(h)));

  const ComplexMatrix symmetric = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetric);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonFinite, "hermitian_eig: eigensolver did not converge");

  EigenSystem out{solver.eigenvalues(), solver.eigenvectors()};
  const Eigen::Index n = h.rows();
  const double tol = kClusterTolerance * std::max(1.0, max_abs(h));

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && out.values(stop) - out.values(start) <= tol) ++stop;
    const Eigen::Index size = stop - start;
    if (size == 1) {
      out.vectors.col(start) = fix_phase(out.vectors.col(start));
    } else {
      ComplexMatrix basis = canonical_basis(out.vectors.middleCols(start, size));
      std::vector<ComplexVector> cols;
      for (Eigen::Index k = 0; k < size; ++k) cols.push_back(fix_phase(basis.col(k)));
      std::sort(cols.begin(), cols.end(), lex_less);
      const double mean = out.values.segment(start, size).mean();
      for (Eigen::Index k = 0; k < size; ++k) {
        out.vectors.col(start + k) = cols[static_cast<std::size_t>(k)];
        out.values(start + k) = mean;
      }
    }
    start = stop;
  }
  return out;
}

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
  require_square(a, "matrix_exp");
  require_finite(a, "matrix_exp");
  if (a.size() == 0) return a;
  const double scale = std::max(1.0, max_abs(a));
  const double tol = 1e-14 * scale;

  if (max_abs(a + a.adjoint()) <= tol) {
    // A = -iH with H = iA Hermitian.
    return hermitian_function(kI * a, [](double e) { return std::exp(-kI * e); });
  }
  if (hermitian_defect(a) <= tol)
    return hermitian_function(a, [](double e) { return Complex(std::exp(e), 0.0); });
  ComplexMatrix out = a.exp();
  require_finite(out, "matrix_exp");
  return out;
}

ComplexMatrix unitary_step(const ComplexMatrix& h, double dt) {
  return matrix_exp((-kI * dt) * h);
}

ComplexMatrix density_matrix(const StateVector& psi) {
  return psi.amplitudes() * psi.amplitudes().adjoint();
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> dims, int keep) {
  require_square(rho, "partial_trace");
  if (dims.empty()) throw Error(ErrorCode::DimMismatch, "partial_trace: no subsystems");
  if (keep < 0 || static_cast<std::size_t>(keep) >= dims.size())
    throw Error(ErrorCode::DimMismatch, "partial_trace: subsystem index out of range");
  long total = 1;
  for (int d : dims) {
    if (d <= 0) throw Error(ErrorCode::DimMismatch, "partial_trace: non-positive subsystem dim");
    total *= d;
  }
  if (total != rho.rows())
    throw Error(ErrorCode::DimMismatch, "partial_trace: product of dims != matrix dimension");
  const Complex trace = rho.trace();
  if (std::abs(trace - 1.0) > kNormTolerance)
    throw Error(ErrorCode::NotNormalized, "partial_trace: trace differs from 1");

  // Strides for row-major index decomposition; outer = dims before keep,
  // inner = dims after keep.
  long inner = 1;
  for (std::size_t k = static_cast<std::size_t>(keep) + 1; k < dims.size(); ++k) inner *= dims[k];
  const long kept = dims[static_cast<std::size_t>(keep)];
  const long outer = total / (inner * kept);

  ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
  for (long i = 0; i < kept; ++i)
    for (long j = 0; j < kept; ++j) {
      Complex acc = 0.0;
      for (long o = 0; o < outer; ++o)
        for (long r = 0; r < inner; ++r)
          acc += rho((o * kept + i) * inner + r, (o * kept + j) * inner + r);
      out(i, j) = acc;
    }
  return out;
}

bool is_product_state(const StateVector& psi, std::span<const int> dims, double tolerance) {
  const ComplexMatrix rho = density_matrix(psi);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const ComplexMatrix reduced = partial_trace(rho, dims, static_cast<int>(k));
    const double purity = (reduced * reduced).trace().real();
    if (std::abs(1.0 - purity) > tolerance) return false;
  }
  return true;
}

std::size_t step_count(double t0, double t1, double dt) {
  if (!(t1 >= t0)) throw Error(ErrorCode::BadTimeRange, "t1 must be >= t0");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (t1 == t0) return 0;
  return static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
}

ComplexMatrix time_ordered_propagator(const HamiltonianFn& hamiltonian, double t0, double t1,
                                      double dt) {
  const std::size_t steps = step_count(t0, t1, dt);
  const Eigen::Index n = hamiltonian(t0).rows();
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  if (steps == 0) return u;
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double mid = t0 + (static_cast<double>(k) + 0.5) * h;
    u = unitary_step(hamiltonian(mid), h) * u;
  }
  return u;
}

ComplexVector evolve_stepped(const HamiltonianFn& hamiltonian, ComplexVector psi, double t0,
                             double t1, double dt) {
  const std::size_t steps = step_count(t0, t1, dt);
  if (steps == 0) return psi;
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double mid = t0 + (static_cast<double>(k) + 0.5) * h;
    psi = unitary_step(hamiltonian(mid), h) * psi;
  }
  return psi;
}

}  // namespace qnetsim
