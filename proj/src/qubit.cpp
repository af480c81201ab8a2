#include "qnetsim/qubit.hpp"

#include <algorithm>
#include <cmath>

#include "qnetsim/error.hpp"
#include "quadrature.hpp"
#include "two_level.hpp"

namespace qnetsim {

QubitParams QubitParams::constant(double ep1, double ep2, double ts_mag, double ts_phase) {
  return {DriveSignal::constant(ep1), DriveSignal::constant(ep2), DriveSignal::constant(ts_mag),
          DriveSignal::constant(ts_phase)};
}

Complex QubitParams::hopping(double t) const {
  const double mag = ts_mag(t);
  if (mag < 0.0) throw Error(ErrorCode::InvalidArgument, "hopping magnitude must be >= 0");
  return std::polar(mag, ts_phase(t));
}

ComplexMatrix build_qubit_hamiltonian(const QubitParams& p, double t) {
  const Complex ts = p.hopping(t);
  ComplexMatrix h(2, 2);
  h << p.ep1(t), ts, std::conj(ts), p.ep2(t);
  return h;
}

std::pair<double, double> qubit_energies(const QubitParams& p, double t) {
  const double a = p.ep1(t);
  const double b = p.ep2(t);
  const double r = detail::half_splitting(a, b, p.hopping(t));
  const double mid = 0.5 * (a + b);
  return {mid - r, mid + r};
}

QubitEigen qubit_eigensystem(const QubitParams& p, double t) {
  const double a = p.ep1(t);
  const double b = p.ep2(t);
  const Complex ts = p.hopping(t);
  if (a == b && ts == 0.0)
    throw Error(ErrorCode::Degenerate, "qubit with Ep1 == Ep2 and t_s == 0 has no unique eigenbasis");
  const auto [e1, e2] = qubit_energies(p, t);
  return {e1, e2,
          StateVector(detail::two_level_eigenvector(a, b, ts, e1), BasisLabel::QubitPosition),
          StateVector(detail::two_level_eigenvector(a, b, ts, e2), BasisLabel::QubitPosition)};
}

double default_qubit_dt(double t0, double t1) { return std::max(1e-3, (t1 - t0) / 1e6); }

ComplexMatrix qubit_propagator(const QubitParams& p, double t0, double t1, QubitPropagation mode,
                               double dt) {
  if (t1 < t0) throw Error(ErrorCode::BadTimeRange, "t1 must not precede t0");
  if (t1 == t0) return ComplexMatrix::Identity(2, 2);
  if (mode == QubitPropagation::Stepped) {
    if (dt <= 0.0) dt = default_qubit_dt(t0, t1);
    return time_ordered_propagator([&p](double t) { return build_qubit_hamiltonian(p, t); }, t0,
                                   t1, dt);
  }
  const QubitEigen start = qubit_eigensystem(p, t0);
  const QubitEigen end = qubit_eigensystem(p, t1);
  double phase1 = 0.0;
  double phase2 = 0.0;
  if (p.ep1.is_constant() && p.ep2.is_constant() && p.ts_mag.is_constant()) {
    phase1 = start.e1 * (t1 - t0);
    phase2 = start.e2 * (t1 - t0);
  } else {
    phase1 = detail::integrate([&p](double s) { return qubit_energies(p, s).first; }, t0, t1);
    phase2 = detail::integrate([&p](double s) { return qubit_energies(p, s).second; }, t0, t1);
  }
  return std::exp(-kI * phase1) * end.v1.amplitudes() * start.v1.amplitudes().adjoint() +
         std::exp(-kI * phase2) * end.v2.amplitudes() * start.v2.amplitudes().adjoint();
}

Occupancy occupancy(const StateVector& state, QubitBasis basis, const QubitParams& p, double t) {
  if (state.dim() != 2) throw Error(ErrorCode::DimMismatch, "qubit state must have dimension 2");
  if (basis == QubitBasis::Position) return {state.probability(0), state.probability(1)};
  const QubitEigen eig = qubit_eigensystem(p, t);
  return {std::norm(eig.v1.amplitudes().dot(state.amplitudes())),
          std::norm(eig.v2.amplitudes().dot(state.amplitudes()))};
}

}  // namespace qnetsim
