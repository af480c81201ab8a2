#pragma once

#include <array>
#include <string>
#include <vector>

#include "qnetsim/drive_signal.hpp"
#include "qnetsim/linalg.hpp"

namespace qnetsim {

// Qubit (E_g, E_e) coupled to a two-mode cavity (E_phi1, E_phi2) in the
// rotating-wave form. Basis order:
//   0 |E_phi1, g>   1 |E_phi1, e>   2 |E_phi2, g>   3 |E_phi2, e>
struct CoupledSystem {
  DriveSignal e_g;
  DriveSignal e_e;
  double e_phi1 = 1.0;
  double e_phi2 = 2.0;
  DriveSignal g_mag;
  double g_phase = 0.0;

  static CoupledSystem constant(double e_g, double e_e, double e_phi1, double e_phi2, double g,
                                double g_phase = 0.0);

  Complex coupling(double t) const { return std::polar(g_mag(t), g_phase); }

  // Samples [t0, t1] and throws InvalidArgument if E_e <= E_g or E_phi2 <= E_phi1.
  void validate(double t0, double t1) const;

  bool operator==(const CoupledSystem&) const = default;
};

ComplexMatrix build_jc_hamiltonian(const CoupledSystem& sys, double t);

// Eigenpairs in the analytic order E1 = E_g + E_phi1, E2 = E_e + E_phi2,
// then the lower and upper members of the coupled pair.
struct JcEigen {
  std::array<double, 4> values;
  std::array<ComplexVector, 4> vectors;
};

JcEigen jc_eigensystem(const CoupledSystem& sys, double t);

enum class JcPropagation { Paper, Stepped };

/// U(t1, t0).
///   Paper:   exponential of the integrated Hamiltonian, evaluated in closed
///            form (two phases plus the exact exponential of the coupled block).
///   Stepped: time-ordered midpoint product with step dt (<= 0 means 1e-3).
ComplexMatrix jc_propagator(const CoupledSystem& sys, double t0, double t1, JcPropagation mode,
                            double dt = 0.0);

struct ExcitationProbabilities {
  double qubit_excited;
  double cavity_excited;
};

ExcitationProbabilities excitation_probabilities(const CoupledSystem& sys, const StateVector& state0,
                                                 double t0, double t,
                                                 JcPropagation mode = JcPropagation::Paper,
                                                 double dt = 0.0);

// |U_32|^2 = |G|^2 (sin W / W)^2 with W = sqrt(D^2 + 4|G|^2) / 2,
// G = int g, D = int (Delta_q - Delta_EC).
double energy_transfer_coefficient(const CoupledSystem& sys, double t0, double t1);

struct Fig3Scenario {
  std::string label;
  DriveSignal detuning;
};

// The seven detuning schedules of the energy-transfer study.
std::vector<Fig3Scenario> fig3_scenarios();

// E_g = 0, E_phi1 = 1, E_phi2 = 3, E_e = 2 + detuning(t), coupling g.
CoupledSystem fig3_system(const DriveSignal& detuning, double g);

struct Fig3Row {
  int scenario;  // 1-based
  double t;
  double coefficient;
};

// `samples` uniform points on [t0, t1] per scenario, scenarios in order.
std::vector<Fig3Row> run_fig3_scenarios(double g, int samples, double t0 = 0.0, double t1 = 10.0);

}  // namespace qnetsim
