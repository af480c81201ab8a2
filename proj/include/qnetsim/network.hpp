#pragma once

#include <array>
#include <optional>

#include "qnetsim/cavity.hpp"
#include "qnetsim/drive_signal.hpp"
#include "qnetsim/linalg.hpp"
#include "qnetsim/qubit.hpp"

namespace qnetsim {

// One qubit's coupling to the cavity in the position (mixed) basis plus the
// renormalization knobs acting on it.
struct QubitCavityCoupling {
  QubitParams qubit = QubitParams::symmetric(0.0, 1.0);
  Complex dipole_scale{0.0, 0.0};  // multiplies (c* a - d* b) / 2 to give u
  double position = 0.0;           // location inside the cavity
  double c0 = 0.0;                 // linear hopping renormalization
  std::array<double, 5> va{};      // V_a1 .. V_a5
  double s0 = 0.0;                 // cavity -> qubit phase imprint strength
  // <E_phi_k|E_f(x_q, t)|E_phi_k>; defaults to E_ox,k cos(2 pi x_q / L) sin(E_phi_k t + p_k).
  std::array<std::optional<DriveSignal>, 2> field_expectation;

  bool operator==(const QubitCavityCoupling&) const = default;
};

// Two qubits (A, B) sharing a two-mode cavity or waveguide.
// Energy basis index = 4*cavity + 2*A + B with 0 = g, 1 = e; the position
// basis uses the same layout with 0 = x1, 1 = x2.
struct NetworkSystem {
  QubitCavityCoupling qubit_a;
  QubitCavityCoupling qubit_b;
  CavitySpec cavity;
  double g1 = 0.0;
  double g2 = 0.0;
  DriveSignal d1;
  DriveSignal d2;
  DriveSignal f1 = DriveSignal::constant(1.0);
  double waveguide_length = 0.0;
  double signal_speed = 1.0;
  std::array<double, 4> coulomb_distances{1.0, 1.0, 1.0, 1.0};  // d11', d12', d21', d22'
  double charge = 0.0;
  double s_a = 0.0;
  double s_b = 0.0;
  bool sqrt_imprint = false;

  double delay() const { return waveguide_length / signal_speed; }

  // Parameters satisfying the equal-spacing constraint for energy unit e_g:
  // cavity (e_g, 2 e_g), both qubits E_p = 1.5 e_g, |t_s| = 0.5 e_g.
  static NetworkSystem simplified(double e_g, double g1, double g2,
                                  DriveSignal d1 = DriveSignal::constant(0.0),
                                  DriveSignal d2 = DriveSignal::constant(0.0));

  bool operator==(const NetworkSystem&) const = default;
};

enum class NetworkForm { General, Simplified };

// Throws ConstraintViolated unless E_gA = E_gB = E_phi1 = E_phi2 - E_phi1 =
// E_eA - E_gA = E_eB - E_gB at time t; returns E_g.
double simplified_energy_unit(const NetworkSystem& sys, double t);

ComplexMatrix build_network_hamiltonian(const NetworkSystem& sys, double t, NetworkForm form);

struct NetworkEigen {
  std::array<double, 8> values;           // analytic order E1 .. E8
  std::array<ComplexVector, 8> vectors;   // unit norm, phase-fixed
  std::array<double, 8> norms;            // N_k = |anchor component| of the unit vector
  std::array<bool, 8> product_state;
};

// Analytic eigensystem of the simplified Hamiltonian. Throws ConstraintViolated.
NetworkEigen network_eigensystem(const NetworkSystem& sys, double t = 0.0);

// sum_k c_k exp(-i E_k (t1 - t0)) |E_k(t1)>. Throws NotNormalized.
StateVector network_evolve(const NetworkSystem& sys, const std::array<Complex, 8>& coeffs, double t0,
                           double t1);

ComplexMatrix network_propagator(const NetworkSystem& sys, double t0, double t1, NetworkForm form,
                                 double dt);

struct QubitEnergyCoeffs {
  Complex a, b, c, d;  // |E_g> = a|x1> + b|x2>, |E_e> = c|x1> + d|x2>
  Complex u;
};

// Throws Degenerate when |t_s| = 0.
QubitEnergyCoeffs abcd_coefficients(const QubitParams& p, double t, Complex scale = 1.0);

ComplexMatrix interaction_block_hs(const QubitEnergyCoeffs& k);

// [[0, H_s], [H_s^dagger, 0]] on (E_phi1, E_phi2) x (x1, x2).
ComplexMatrix interaction_matrix(const QubitEnergyCoeffs& k);

struct RenormalizedJcSystem {
  CavitySpec cavity;
  QubitCavityCoupling coupling;

  bool operator==(const RenormalizedJcSystem&) const = default;
};

// Basis |E_phi1,x1>, |E_phi1,x2>, |E_phi2,x1>, |E_phi2,x2>.
ComplexMatrix build_renormalized_jc_hamiltonian(const RenormalizedJcSystem& sys, double t);

// Basis index 4*cavity + 2*x_A + x_B.
ComplexMatrix build_renormalized_network_hamiltonian(const NetworkSystem& sys, double t);

}  // namespace qnetsim
