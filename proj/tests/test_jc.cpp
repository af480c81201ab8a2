#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qnetsim/error.hpp"
#include "qnetsim/jc.hpp"

using namespace qnetsim;

namespace {

CoupledSystem random_system(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double eg = u(rng) - 0.5;
  const double phi1 = 0.5 + u(rng);
  return CoupledSystem::constant(eg, eg + 0.2 + 2.0 * u(rng), phi1, phi1 + 0.2 + 2.0 * u(rng),
                                 0.01 + u(rng), 2.0 * std::numbers::pi * u(rng));
}

// |U32|^2 from a Taylor exponential of the integrated central block.
double block_oracle(const CoupledSystem& sys, double t0, double t1) {
  ComplexMatrix m(2, 2);
  const double tau = t1 - t0;
  const Complex g = std::polar(sys.g_mag.integral(t0, t1), sys.g_phase);
  m << sys.e_e.integral(t0, t1) + sys.e_phi1 * tau, g, std::conj(g),
      sys.e_g.integral(t0, t1) + sys.e_phi2 * tau;
  const ComplexMatrix u = oracle::taylor_exp_scaled(Complex(0.0, -1.0) * m);
  return std::norm(u(1, 0));
}

}  // namespace

TEST_SUITE("jc") {

TEST_CASE("Hamiltonian layout") {
  const ComplexMatrix d = build_jc_hamiltonian(CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, 0.0), 0.0);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1.0, 2.0, 2.0, 3.0;
  CHECK(oracle::max_abs(d - expected) == 0.0);

  const ComplexMatrix h = build_jc_hamiltonian(CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, 0.1), 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      if ((i == 1 && j == 2) || (i == 2 && j == 1))
        CHECK(std::abs(h(i, j) - 0.1) < 1e-16);
      else
        CHECK(h(i, j) == Complex(0.0));
    }

  const ComplexMatrix c =
      build_jc_hamiltonian(CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, 0.1, 0.7), 0.0);
  CHECK(hermitian_defect(c) == 0.0);
  CHECK(std::abs(c(1, 2) - std::polar(0.1, 0.7)) < 1e-16);
}

TEST_CASE("coupled pair energies") {
  const CoupledSystem sys = CoupledSystem::constant(0.2, 1.1, 1.0, 2.3, 0.4, 0.3);
  const JcEigen e = jc_eigensystem(sys, 0.0);
  CHECK(std::abs(e.values[2] + e.values[3] - (0.2 + 1.1 + 1.0 + 2.3)) <= 1e-14);
  CHECK(e.values[0] == doctest::Approx(1.2));
  CHECK(e.values[1] == doctest::Approx(3.4));
}

TEST_CASE("resonant eigenvectors are Bell-like with splitting 2|g|") {
  const double g = 0.35;
  const JcEigen e = jc_eigensystem(CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, g), 0.0);
  CHECK(std::abs(e.values[3] - e.values[2] - 2.0 * g) <= 1e-14);
  const double s = 1.0 / std::sqrt(2.0);
  // Overlap magnitudes with (|phi1,e> -+ |phi2,g>)/sqrt2 are one.
  ComplexVector minus = ComplexVector::Zero(4), plus = ComplexVector::Zero(4);
  minus(1) = s;
  minus(2) = -s;
  plus(1) = s;
  plus(2) = s;
  CHECK(std::abs(std::abs(minus.dot(e.vectors[2])) - 1.0) <= 1e-14);
  CHECK(std::abs(std::abs(plus.dot(e.vectors[3])) - 1.0) <= 1e-14);
}

TEST_CASE("weak-coupling limit and interlacing") {
  const JcEigen e0 = jc_eigensystem(CoupledSystem::constant(0.0, 1.4, 1.0, 2.0, 1e-9), 0.0);
  CHECK(std::abs(e0.values[2] - std::min(2.4, 2.0)) <= 1e-12);
  CHECK(std::abs(e0.values[3] - std::max(2.4, 2.0)) <= 1e-12);
  const JcEigen z = jc_eigensystem(CoupledSystem::constant(0.0, 1.4, 1.0, 2.0, 0.0), 0.0);
  CHECK(z.values[2] == 2.0);
  CHECK(z.values[3] == doctest::Approx(2.4));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const CoupledSystem sys = random_system(rng);
    const JcEigen e = jc_eigensystem(sys, 0.0);
    const double a = sys.e_e(0.0) + sys.e_phi1;
    const double b = sys.e_g(0.0) + sys.e_phi2;
    CHECK(e.values[2] <= std::min(a, b));
    CHECK(std::max(a, b) <= e.values[3]);
  }
}

TEST_CASE("analytic eigensystem agrees with the numeric solver for 100 draws") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const CoupledSystem sys = random_system(rng);
    const ComplexMatrix h = build_jc_hamiltonian(sys, 0.0);
    const JcEigen an = jc_eigensystem(sys, 0.0);
    std::array<double, 4> sorted = an.values;
    std::sort(sorted.begin(), sorted.end());
    const EigenSystem num = hermitian_eig(h);
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(sorted[static_cast<std::size_t>(k)] - num.values(k)) <= 1e-10);
      const ComplexVector& v = an.vectors[static_cast<std::size_t>(k)];
      CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
      CHECK((h * v - an.values[static_cast<std::size_t>(k)] * v).norm() <= 1e-10);
    }
  }
}

TEST_CASE("closed-form propagator structure") {
  CoupledSystem sys = CoupledSystem::constant(0.1, 1.3, 1.0, 2.0, 0.0);
  sys.e_e = DriveSignal::linear(1.3, 0.05);
  sys.g_mag = DriveSignal::constant(0.4) + DriveSignal::cosine(0.1, 3.0, 0.2);

  SUBCASE("zero pattern") {
    for (double t : {0.5, 3.0, 9.0}) {
      const ComplexMatrix u = jc_propagator(sys, 0.0, t, JcPropagation::Paper);
      for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {0, 3}, {3, 1}, {3, 2}, {1, 0}, {2, 0}, {1, 3},
                          {2, 3}, {3, 0}})
        CHECK(u(i, j) == Complex(0.0));
      CHECK(std::abs(std::abs(u(0, 0)) - 1.0) <= 1e-15);
      CHECK(std::abs(std::abs(u(3, 3)) - 1.0) <= 1e-15);
      CHECK(oracle::max_abs(u * u.adjoint() - ComplexMatrix::Identity(4, 4)) <= 1e-13);
    }
  }
  SUBCASE("|gamma1| and |gamma4| are conserved") {
    std::mt19937_64 rng(11);
    const ComplexVector psi0 = oracle::random_state(rng, 4);
    for (double t = 0.0; t <= 10.0; t += 0.5) {
      const ComplexVector psi = jc_propagator(sys, 0.0, t, JcPropagation::Paper) * psi0;
      CHECK(std::abs(std::abs(psi(0)) - std::abs(psi0(0))) <= 1e-12);
      CHECK(std::abs(std::abs(psi(3)) - std::abs(psi0(3))) <= 1e-12);
    }
  }
  SUBCASE("uncoupled constant system is diagonal phases") {
    const CoupledSystem free = CoupledSystem::constant(0.1, 1.3, 1.0, 2.0, 0.0);
    const ComplexMatrix u = jc_propagator(free, 1.0, 3.5, JcPropagation::Paper);
    const double e[] = {1.1, 2.3, 2.1, 3.3};
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(u(k, k) - std::exp(Complex(0.0, -2.5 * e[k]))) <= 1e-14);
  }
  SUBCASE("t1 = t0 and bad ranges") {
    CHECK(oracle::max_abs(jc_propagator(sys, 2.0, 2.0, JcPropagation::Paper) -
                          ComplexMatrix::Identity(4, 4)) <= 1e-15);
    CHECK_THROWS_AS(jc_propagator(sys, 2.0, 1.0, JcPropagation::Paper), Error);
  }
}

TEST_CASE("closed-form and stepped propagators agree for a resonant constant system") {
  const CoupledSystem sys = CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, 0.6);
  for (double t = 0.0; t <= 10.0; t += 0.5) {
    const double closed = std::norm(jc_propagator(sys, 0.0, t, JcPropagation::Paper)(2, 1));
    const double stepped = std::norm(jc_propagator(sys, 0.0, t, JcPropagation::Stepped, 1e-3)(2, 1));
    CHECK(std::abs(closed - stepped) <= 1e-6);
  }
}

TEST_CASE("stepped propagator keeps the norm for a driven system") {
  CoupledSystem sys = CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, 0.3);
  sys.e_e = DriveSignal::constant(1.1) + DriveSignal::cosine(2.0, 20.0, 0.0);
  sys.e_g = DriveSignal::constant(-2.0);
  std::mt19937_64 rng(13);
  const ComplexVector psi0 = oracle::random_state(rng, 4);
  ComplexVector psi = psi0;
  for (int chunk = 0; chunk < 10; ++chunk) {
    psi = jc_propagator(sys, chunk, chunk + 1.0, JcPropagation::Stepped, 1e-3) * psi;
    CHECK(std::abs(psi.squaredNorm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("excitation probabilities") {
  const double g = 0.45;
  const CoupledSystem sys = CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, g);
  const StateVector ground = StateVector::basis_state(4, 0, BasisLabel::JcEnergy);
  const StateVector excited = StateVector::basis_state(4, 1, BasisLabel::JcEnergy);
  for (double t = 0.0; t <= 8.0; t += 0.4) {
    const auto p0 = excitation_probabilities(sys, ground, 0.0, t);
    CHECK(p0.qubit_excited == 0.0);
    CHECK(p0.cavity_excited == 0.0);
    const auto p = excitation_probabilities(sys, excited, 0.0, t);
    CHECK(std::abs(p.qubit_excited - std::pow(std::cos(g * t), 2)) <= 1e-12);
    CHECK(std::abs(p.cavity_excited - std::pow(std::sin(g * t), 2)) <= 1e-12);
  }

  std::mt19937_64 rng(19);
  const StateVector r(oracle::random_state(rng, 4));
  const ComplexVector gamma = jc_propagator(sys, 0.0, 2.7, JcPropagation::Paper) * r.amplitudes();
  const auto p = excitation_probabilities(sys, r, 0.0, 2.7);
  CHECK(std::abs(p.qubit_excited + p.cavity_excited - 2.0 * std::norm(gamma(3)) -
                 (std::norm(gamma(1)) + std::norm(gamma(2)))) <= 1e-14);
  CHECK_THROWS_AS(excitation_probabilities(sys, StateVector::basis_state(2, 0), 0.0, 1.0), Error);
}

TEST_CASE("energy transfer coefficient") {
  SUBCASE("resonant case is sin^2") {
    const CoupledSystem sys = fig3_system(DriveSignal::constant(0.0), 1.0);
    for (double t = 0.0; t <= 10.0; t += 0.1)
      CHECK(std::abs(energy_transfer_coefficient(sys, 0.0, t) - std::pow(std::sin(t), 2)) <= 1e-12);
    CHECK(energy_transfer_coefficient(sys, 3.0, 3.0) == 0.0);
    CHECK_THROWS_AS(energy_transfer_coefficient(sys, 3.0, 2.0), Error);
  }
  SUBCASE("equals |U32|^2 of the closed-form propagator") {
    for (const auto& sc : fig3_scenarios()) {
      const CoupledSystem sys = fig3_system(sc.detuning, 1.0);
      for (double t = 0.0; t <= 10.0; t += 0.25) {
        const double c = energy_transfer_coefficient(sys, 0.0, t);
        CHECK(std::abs(c - std::norm(jc_propagator(sys, 0.0, t, JcPropagation::Paper)(2, 1))) <=
              1e-12);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
      }
    }
  }
  SUBCASE("constant detuning 0.1 against an independent evaluation") {
    const CoupledSystem sys = fig3_system(DriveSignal::constant(0.1), 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = 10.0 * i / 999.0;
      const double d = 0.1 * t;
      const double root = std::sqrt(d * d + 4.0 * t * t);
      const double closed = i == 0 ? 0.0 : 4.0 * t * t * std::pow(std::sin(0.5 * root) / root, 2);
      worst = std::max(worst, std::abs(energy_transfer_coefficient(sys, 0.0, t) - closed));
      if (i % 50 == 0)
        CHECK(std::abs(energy_transfer_coefficient(sys, 0.0, t) - block_oracle(sys, 0.0, t)) <= 1e-10);
    }
    CHECK(worst <= 1e-12);
  }
  SUBCASE("driven schedules match the integrated-block exponential") {
    for (const auto& sc : fig3_scenarios()) {
      const CoupledSystem sys = fig3_system(sc.detuning, 1.0);
      for (double t : {0.3, 1.7, 4.2})
        CHECK(std::abs(energy_transfer_coefficient(sys, 0.0, t) - block_oracle(sys, 0.0, t)) <= 1e-9);
    }
  }
}

TEST_CASE("fig3 scenario table") {
  const auto rows = run_fig3_scenarios(1.0, 101);
  CHECK(rows.size() == 7 * 101);
  for (const auto& r : rows)
    if (r.t == 0.0) CHECK(r.coefficient == 0.0);
  const CoupledSystem res = fig3_system(DriveSignal::constant(0.0), 1.0);
  CHECK(std::abs(energy_transfer_coefficient(res, 0.0, std::numbers::pi / 2) - 1.0) <= 1e-15);

  const CoupledSystem off = fig3_system(DriveSignal::constant(0.3), 1.0);
  double peak = 0.0;
  for (int i = 0; i <= 2000; ++i) peak = std::max(peak, energy_transfer_coefficient(off, 0.0, 3.2 * i / 2000));
  CHECK(peak < 1.0);

  CHECK(fig3_scenarios().size() == 7);
  CHECK(fig3_scenarios()[4].detuning(0.0) == doctest::Approx(2.1));
  CHECK_THROWS_AS(run_fig3_scenarios(1.0, 1), Error);
}

TEST_CASE("validation of the qubit and cavity ordering") {
  CHECK_THROWS_AS(CoupledSystem::constant(1.0, 0.5, 1.0, 2.0, 0.1).validate(0.0, 1.0), Error);
  CHECK_THROWS_AS(CoupledSystem::constant(0.0, 1.0, 2.0, 1.0, 0.1).validate(0.0, 1.0), Error);
  CoupledSystem swing = CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, 0.1);
  swing.e_e = DriveSignal::cosine(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(swing.validate(0.0, 4.0), Error);
  CHECK_NOTHROW(CoupledSystem::constant(0.0, 1.0, 1.0, 2.0, 0.1).validate(0.0, 1.0));
}

}  // TEST_SUITE
