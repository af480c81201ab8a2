#pragma once

#include "qnetsim/drive_signal.hpp"
#include "qnetsim/linalg.hpp"

namespace qnetsim {

// Two-site tight-binding qubit. Position basis |x1>, |x2>; hopping
// t_s(t) = ts_mag(t) * exp(i ts_phase(t)) sits above the diagonal.
struct QubitParams {
  DriveSignal ep1;
  DriveSignal ep2;
  DriveSignal ts_mag;
  DriveSignal ts_phase;

  static QubitParams constant(double ep1, double ep2, double ts_mag, double ts_phase = 0.0);
  static QubitParams symmetric(double ep, double ts_mag, double ts_phase = 0.0) {
    return constant(ep, ep, ts_mag, ts_phase);
  }

  Complex hopping(double t) const;

  bool operator==(const QubitParams&) const = default;
};

ComplexMatrix build_qubit_hamiltonian(const QubitParams& p, double t);

struct QubitEigen {
  double e1;  // ground
  double e2;  // excited
  StateVector v1;
  StateVector v2;
};

// Closed-form eigenpairs in the position basis. Throws Degenerate when
// Ep1 == Ep2 and t_s == 0.
QubitEigen qubit_eigensystem(const QubitParams& p, double t);

// Closed-form E1(t), E2(t); defined also at degeneracy.
std::pair<double, double> qubit_energies(const QubitParams& p, double t);

enum class QubitPropagation { Adiabatic, Stepped };

double default_qubit_dt(double t0, double t1);

/// U(t1, t0) in the position basis.
///   Adiabatic: sum_k exp(-i int E_k) |E_k(t1)><E_k(t0)|, exact for a fixed eigenbasis.
///   Stepped:   time-ordered midpoint product; dt <= 0 selects default_qubit_dt.
ComplexMatrix qubit_propagator(const QubitParams& p, double t0, double t1,
                               QubitPropagation mode, double dt = 0.0);

enum class QubitBasis { Position, Energy };

struct Occupancy {
  double prob0;  // |x1> or ground
  double prob1;  // |x2> or excited
};

// `state` holds position-basis amplitudes. Throws DimMismatch unless dim 2.
Occupancy occupancy(const StateVector& state, QubitBasis basis, const QubitParams& p, double t);

}  // namespace qnetsim
