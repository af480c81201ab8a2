#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qnetsim/cavity.hpp"
#include "qnetsim/error.hpp"

using namespace qnetsim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("cavity") {

TEST_CASE("mode energies") {
  const CavitySpec w = CavitySpec::from_frequency(1.0);
  CHECK(mode_energy(w, 0) == 0.5);
  CHECK(mode_energy(w, 1) == 1.5);
  CHECK(mode_energy(w, 7) == 7.5);
  const CavitySpec s = CavitySpec::from_energies(1.0, 2.0);
  CHECK(mode_energy(s, 0) == 1.0);
  CHECK(mode_energy(s, 1) == 2.0);
  CHECK_THROWS_AS(mode_energy(s, 2), Error);
  CHECK_THROWS_AS(mode_energy(s, -1), Error);
  CHECK_THROWS_AS(CavitySpec::from_energies(2.0, 1.0), Error);
  CHECK_THROWS_AS(CavitySpec::from_energies(1.0, 2.0, 0.0), Error);
}

TEST_CASE("mode wavefunctions") {
  const CavitySpec s = CavitySpec::from_energies(1.0, 2.0, 2.0);
  for (double t : {0.0, 0.3, 4.0}) {
    CHECK(std::abs(mode_wavefunction(s, 1, 1.0, t)) < 1e-15);
    CHECK(std::abs(mode_wavefunction(s, 1, -1.0, t)) < 1e-15);
    CHECK(std::abs(mode_wavefunction(s, 2, 0.0, t)) == 0.0);
  }
  const Complex v = mode_wavefunction(s, 2, 0.5, 0.7);
  CHECK(std::abs(v - std::exp(Complex(0.0, -1.4)) * std::sqrt(2.0 / 2.0) * std::sin(kPi * 0.5)) <
        1e-15);
  CHECK_THROWS_AS(mode_wavefunction(s, 1, 1.01, 0.0), Error);
  CHECK_THROWS_AS(mode_wavefunction(s, 3, 0.0, 0.0), Error);

  CavitySpec s3 = s;
  s3.dims = 3;
  s3.lengths = {1.0, 2.0, 4.0};
  const double expected =
      std::sqrt(kPi / 2.0) * std::sqrt(kPi / 4.0) * std::sqrt(kPi / 8.0);
  CHECK(std::abs(mode_wavefunction(s3, 1, {0.0, 0.0, 0.0}, 0.0) - expected) < 1e-15);
  CHECK_THROWS_AS(mode_wavefunction(s3, 1, {0.0, 1.5, 0.0}, 0.0), Error);
}

TEST_CASE("mode norms are time independent") {
  const CavitySpec s = CavitySpec::from_energies(1.0, 2.0, 1.5);
  for (double t : {0.0, 1.0, 17.0}) {
    CHECK(std::abs(mode_norm(s, 1, t) - kPi / 4.0) <= 1e-9);
    CHECK(std::abs(mode_norm(s, 2, t) - 1.0) <= 1e-9);
  }
}

TEST_CASE("field operators") {
  CavitySpec s = CavitySpec::from_energies(1.0, 2.0, 1.0);
  s.u0 = 0.8;
  s.e0 = 1.3;
  s.phases = {0.4, 0.0};
  const double x = 0.1;
  const double r = 1.3 * std::cos(2.0 * kPi * x);
  double trace0 = 0.0;
  for (double t = 0.0; t < 6.0; t += 0.37) {
    const FieldOperators f = field_operators(s, x, t);
    CHECK(is_hermitian(f.electric, 1e-12));
    CHECK(is_hermitian(f.magnetic, 1e-12));
    const double o1 = 0.8 * std::sin(t + 0.4);
    const ComplexMatrix ee = f.electric.adjoint() * f.electric;
    CHECK(oracle::max_abs(ee - 0.5 * r * r * o1 * o1 * ComplexMatrix::Identity(2, 2)) <= 1e-14);
    const double trace = (ee + f.magnetic.adjoint() * f.magnetic).trace().real();
    if (t == 0.0) trace0 = trace;
    CHECK(std::abs(trace - trace0) <= 1e-14);
  }
  const FieldOperators zero = field_operators(s, 0.25, 1.0);
  CHECK(oracle::max_abs(zero.electric) <= 1e-16);
  CHECK(oracle::max_abs(zero.magnetic) <= 1e-16);
}

TEST_CASE("dissipation Hamiltonian") {
  const ComplexMatrix h = dissipation_hamiltonian(Complex(0.2, 0.1), Complex(0.2, -0.1));
  CHECK(is_hermitian(h));
  const ComplexVector psi = unitary_step(h, 3.0) * StateVector::basis_state(2, 0).amplitudes();
  CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);

  const ComplexMatrix raise = dissipation_hamiltonian(1.0, 0.0);
  CHECK(raise(1, 0) == Complex(1.0));
  CHECK(raise(0, 1) == Complex(0.0));
  CHECK_FALSE(is_hermitian(raise));

  const ComplexMatrix leak = dissipation_hamiltonian(0.1, 0.0);
  ComplexVector e1(2);
  e1 << 1.0, 0.0;
  double last = 1.0;
  for (double t = 0.05; t <= 1.0; t += 0.05) {
    const double n = (oracle::taylor_exp(Complex(0.0, -t) * leak) * e1).norm();
    CHECK(n > last);
    CHECK(std::abs(n - std::sqrt(1.0 + 0.01 * t * t)) <= 1e-14);
    last = n;
  }
}

TEST_CASE("cavity measurements") {
  const CavitySpec s = CavitySpec::from_energies(1.0, 2.0, 1.0);
  const StateVector e1 = StateVector::basis_state(2, 0, BasisLabel::CavityEnergy);
  const MeasurementResult a = cavity_measure(e1, CavityMeasurement::energy(1), s, 0.0);
  CHECK(a.probability == 1.0);
  CHECK(std::abs(a.collapsed[0] - 1.0) < 1e-15);

  ComplexVector eq(2);
  eq << 1.0, Complex(0.0, 1.0);
  const StateVector plus = StateVector::normalized(eq);
  CHECK(std::abs(cavity_measure(plus, CavityMeasurement::energy(2), s, 0.0).probability - 0.5) <
        1e-15);
  CHECK_THROWS_AS(cavity_measure(e1, CavityMeasurement::energy(2), s, 0.0), Error);

  const MeasurementResult full = cavity_measure(e1, CavityMeasurement::position(-0.5, 0.5), s, 2.0);
  CHECK(std::abs(full.probability - 1.0) <= 1e-10);
  const MeasurementResult half = cavity_measure(e1, CavityMeasurement::position(0.0, 0.5), s, 2.0);
  CHECK(std::abs(half.probability - 0.5) <= 1e-10);

  // Superposition over a window, against a direct Simpson integral of the normalized modes.
  const double t = 0.3;
  auto density = [&](double x) {
    const Complex p1 = std::exp(Complex(0.0, -t)) * std::sqrt(2.0) * std::cos(kPi * x);
    const Complex p2 = std::exp(Complex(0.0, -2.0 * t)) * std::sqrt(2.0) * std::sin(2.0 * kPi * x);
    return std::norm(plus[0] * p1 + plus[1] * p2);
  };
  const double ref = oracle::simpson(density, -0.1, 0.35, 20000);
  const MeasurementResult w = cavity_measure(plus, CavityMeasurement::position(-0.1, 0.35), s, t);
  CHECK(std::abs(w.probability - ref) <= 1e-10);
  CHECK(std::abs(w.collapsed.amplitudes().norm() - 1.0) <= 1e-12);

  CHECK_THROWS_AS(cavity_measure(e1, CavityMeasurement::position(-0.6, 0.2), s, 0.0), Error);
}

TEST_CASE("energy outcome probabilities sum to one") {
  std::mt19937_64 rng(3);
  const CavitySpec s = CavitySpec::from_energies(1.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const StateVector v(oracle::random_state(rng, 2));
    const double total = cavity_measure(v, CavityMeasurement::energy(1), s, 0.0).probability +
                         cavity_measure(v, CavityMeasurement::energy(2), s, 0.0).probability;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

}  // TEST_SUITE
