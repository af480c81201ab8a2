#pragma once

#include <array>
#include <optional>

#include "qnetsim/linalg.hpp"

namespace qnetsim {

// Two-mode electromagnetic cavity. Mode energies are either stored directly
// or derived from a fundamental frequency as omega_c * (k + 1/2).
struct CavitySpec {
  int dims = 1;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  std::optional<double> omega_c;
  std::array<double, 2> energies{1.0, 2.0};
  std::array<double, 2> field_amplitudes{1.0, 1.0};  // E_ox per mode
  std::array<double, 2> phases{0.0, 0.0};
  double u0 = 1.0;
  double e0 = 1.0;
  std::optional<double> field_omega;  // defaults to the first mode energy

  static CavitySpec from_energies(double e_phi1, double e_phi2, double length = 1.0);
  static CavitySpec from_frequency(double omega_c, double length = 1.0);

  // Throws InvalidArgument on non-positive lengths or E_phi2 <= E_phi1.
  void validate() const;

  double e_phi1() const { return energy(0); }
  double e_phi2() const { return energy(1); }

 private:
  double energy(int k) const;
};

// Zero-based: k = 0 is the lower mode. Throws UnknownMode.
double mode_energy(const CavitySpec& spec, int k);

// Mode `mode` (1 or 2) evaluated with the unnormalized textbook prefactors
// sqrt(pi/2L) cos(pi x/L) and sqrt(2/L) sin(2 pi x/L). Throws OutOfCavity.
Complex mode_wavefunction(const CavitySpec& spec, int mode, double x, double t);
Complex mode_wavefunction(const CavitySpec& spec, int mode, const std::array<double, 3>& r,
                          double t);

// Integral of |psi_mode|^2 over a 1D cavity.
double mode_norm(const CavitySpec& spec, int mode, double t);

struct FieldOperators {
  ComplexMatrix electric;
  ComplexMatrix magnetic;
};

FieldOperators field_operators(const CavitySpec& spec, double x, double t);

// f1 |E_phi2><E_phi1| + f2 |E_phi1><E_phi2|
ComplexMatrix dissipation_hamiltonian(Complex f1, Complex f2);

struct CavityMeasurement {
  enum class Kind { Energy, Position };
  Kind kind = Kind::Energy;
  int mode = 1;
  double a = 0.0;
  double b = 0.0;

  static CavityMeasurement energy(int mode) { return {Kind::Energy, mode, 0.0, 0.0}; }
  static CavityMeasurement position(double a, double b) { return {Kind::Position, 0, a, b}; }
};

struct MeasurementResult {
  double probability;
  StateVector collapsed;
};

/// Projective measurement on a two-mode cavity state whose amplitudes refer to
/// the time-dependent modes at `t`. Position windows use renormalized modes and
/// the collapsed state is the window projection expressed back in the two-mode
/// basis. Throws ZeroProbability below 1e-14.
MeasurementResult cavity_measure(const StateVector& state, const CavityMeasurement& what,
                                 const CavitySpec& spec, double t);

}  // namespace qnetsim
