#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qnetsim/error.hpp"
#include "qnetsim/qubit.hpp"

using namespace qnetsim;

namespace {

QubitParams random_qubit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double mag = 0.05 + std::abs(u(rng));
  return QubitParams{DriveSignal::constant(u(rng)) + DriveSignal::cosine(0.3 * u(rng), 1.0 + u(rng), u(rng)),
                     DriveSignal::linear(u(rng), 0.2 * u(rng)),
                     DriveSignal::constant(mag) + DriveSignal::cosine(0.04, 2.0, u(rng)),
                     DriveSignal::linear(u(rng), 0.3 * u(rng))};
}

double residual(const ComplexMatrix& h, double e, const StateVector& v) {
  return (h * v.amplitudes() - e * v.amplitudes()).norm();
}

}  // namespace

TEST_SUITE("qubit") {

TEST_CASE("Hamiltonian entries") {
  const ComplexMatrix sx = build_qubit_hamiltonian(QubitParams::symmetric(0.0, 1.0), 0.0);
  CHECK(oracle::max_abs(sx - oracle::sigma_x()) == 0.0);

  const ComplexMatrix d = build_qubit_hamiltonian(QubitParams::constant(1.0, 2.0, 0.0), 3.0);
  CHECK(d(0, 0) == Complex(1.0));
  CHECK(d(1, 1) == Complex(2.0));
  CHECK(d(0, 1) == Complex(0.0));

  const ComplexMatrix y =
      build_qubit_hamiltonian(QubitParams::symmetric(0.0, 1.0, std::numbers::pi / 2), 0.0);
  CHECK(std::abs(y(0, 1) - Complex(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(y(1, 0) - Complex(0.0, -1.0)) < 1e-15);
  const EigenSystem es = hermitian_eig(y);
  CHECK(es.values(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.values(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("symmetric qubit energies are E_p -+ |t|") {
  const QubitEigen e = qubit_eigensystem(QubitParams::symmetric(0.7, 0.25, 0.4), 0.0);
  CHECK(std::abs(e.e1 - 0.45) < 1e-15);
  CHECK(std::abs(e.e2 - 0.95) < 1e-15);
}

TEST_CASE("imaginary hopping relates the bases by a Hadamard") {
  const QubitParams p = QubitParams::symmetric(0.3, 1.0, std::numbers::pi / 2);
  const QubitEigen e = qubit_eigensystem(p, 0.0);
  for (const StateVector* v : {&e.v1, &e.v2})
    for (int j = 0; j < 2; ++j) CHECK(std::abs(v->probability(j) - 0.5) < 1e-15);
}

TEST_CASE("eigenpair residuals") {
  const QubitParams p = QubitParams::symmetric(0.0, 0.5, 1.1);
  const QubitEigen e = qubit_eigensystem(p, 0.0);
  const ComplexMatrix h = build_qubit_hamiltonian(p, 0.0);
  CHECK(residual(h, e.e1, e.v1) <= 1e-12);
  CHECK(residual(h, e.e2, e.v2) <= 1e-12);
  CHECK(e.e2 >= e.e1);
}

TEST_CASE("degenerate input is rejected") {
  CHECK_THROWS_AS(qubit_eigensystem(QubitParams::symmetric(0.4, 0.0), 0.0), Error);
  try {
    qubit_eigensystem(QubitParams::symmetric(0.4, 0.0), 0.0);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::Degenerate);
  }
  const auto [lo, hi] = qubit_energies(QubitParams::symmetric(0.4, 0.0), 0.0);
  CHECK(lo == 0.4);
  CHECK(hi == 0.4);
}

TEST_CASE("analytic eigensystem agrees with the numeric solver for random drives") {
  std::mt19937_64 rng(101);
  for (int draw = 0; draw < 100; ++draw) {
    const QubitParams p = random_qubit(rng);
    for (double t : {0.0, 0.37, 2.5}) {
      const ComplexMatrix h = build_qubit_hamiltonian(p, t);
      const EigenSystem num = hermitian_eig(h);
      const QubitEigen an = qubit_eigensystem(p, t);
      CHECK(std::abs(an.e1 - num.values(0)) <= 1e-12);
      CHECK(std::abs(an.e2 - num.values(1)) <= 1e-12);
      const auto [a, b] = oracle::eig2(h(0, 0).real(), h(1, 1).real(), h(0, 1));
      CHECK(std::abs(an.e1 - a) <= 1e-12);
      CHECK(std::abs(an.e2 - b) <= 1e-12);
      CHECK(std::abs(an.e1 + an.e2 - (p.ep1(t) + p.ep2(t))) <= 1e-12);
      CHECK(residual(h, an.e1, an.v1) <= 1e-12);
      CHECK(residual(h, an.e2, an.v2) <= 1e-12);
      CHECK(std::abs(an.v1.amplitudes().dot(an.v2.amplitudes())) <= 1e-12);
    }
  }
}

TEST_CASE("Hadamard correspondence holds along a time-dependent imaginary hopping") {
  const QubitParams p{DriveSignal::linear(0.2, 0.1), DriveSignal::linear(0.2, 0.1),
                      DriveSignal::constant(0.6) + DriveSignal::cosine(0.2, 1.3, 0.0),
                      DriveSignal::constant(std::numbers::pi / 2)};
  for (double t = 0.0; t < 5.0; t += 0.25) {
    const QubitEigen e = qubit_eigensystem(p, t);
    for (const StateVector* v : {&e.v1, &e.v2})
      for (int j = 0; j < 2; ++j) CHECK(std::abs(v->probability(j) - 0.5) <= 1e-12);
  }
}

TEST_CASE("propagators") {
  const QubitParams p = QubitParams::constant(0.1, -0.2, 0.45, 0.3);
  SUBCASE("t1 = t0 gives the identity") {
    for (auto mode : {QubitPropagation::Adiabatic, QubitPropagation::Stepped})
      CHECK(oracle::max_abs(qubit_propagator(p, 1.5, 1.5, mode, 1e-3) -
                            ComplexMatrix::Identity(2, 2)) <= 1e-15);
  }
  SUBCASE("stepped and adiabatic agree with the exact exponential for constant H") {
    const ComplexMatrix exact =
        oracle::taylor_exp(Complex(0.0, -4.0) * build_qubit_hamiltonian(p, 0.0), 60);
    const ComplexMatrix st = qubit_propagator(p, 0.0, 4.0, QubitPropagation::Stepped, 1e-3);
    const ComplexMatrix ad = qubit_propagator(p, 0.0, 4.0, QubitPropagation::Adiabatic);
    CHECK(oracle::max_abs(st - exact) <= 1e-8);
    CHECK(oracle::max_abs(ad - exact) <= 1e-12);
    CHECK(oracle::max_abs(st * st.adjoint() - ComplexMatrix::Identity(2, 2)) <= 1e-9);
  }
  SUBCASE("reversed interval is rejected") {
    CHECK_THROWS_AS(qubit_propagator(p, 2.0, 1.0, QubitPropagation::Stepped, 1e-3), Error);
  }
  SUBCASE("default step") {
    CHECK(default_qubit_dt(0.0, 10.0) == 1e-3);
    CHECK(default_qubit_dt(0.0, 1e4) == doctest::Approx(1e-2));
  }
}

TEST_CASE("Rabi oscillation between the sites at angular frequency 2|t|") {
  const double ts = 0.35;
  const QubitParams p = QubitParams::symmetric(0.2, ts);
  const StateVector x1 = StateVector::basis_state(2, 0, BasisLabel::QubitPosition);
  for (double t = 0.0; t <= 12.0; t += 0.5) {
    const ComplexVector psi = qubit_propagator(p, 0.0, t, QubitPropagation::Adiabatic) * x1.amplitudes();
    const Occupancy occ = occupancy(StateVector(psi, BasisLabel::QubitPosition),
                                    QubitBasis::Position, p, t);
    CHECK(std::abs(occ.prob0 - std::pow(std::cos(ts * t), 2)) <= 1e-12);
    CHECK(std::abs(occ.prob0 + occ.prob1 - 1.0) <= 1e-10);
  }
}

TEST_CASE("stepped evolution of a driven qubit keeps the norm over 1e4 steps") {
  std::mt19937_64 rng(5);
  const QubitParams p = random_qubit(rng);
  const ComplexMatrix u = qubit_propagator(p, 0.0, 10.0, QubitPropagation::Stepped, 1e-3);
  const ComplexVector psi = u * oracle::random_state(rng, 2);
  CHECK(std::abs(psi.norm() - 1.0) <= 1e-9);
}

TEST_CASE("occupancy in both bases") {
  const QubitParams p = QubitParams::symmetric(0.0, 1.0);
  const Occupancy a =
      occupancy(StateVector::basis_state(2, 0), QubitBasis::Position, p, 0.0);
  CHECK(a.prob0 == 1.0);
  CHECK(a.prob1 == 0.0);

  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const Occupancy b = occupancy(StateVector::normalized(plus), QubitBasis::Energy, p, 0.0);
  CHECK(std::abs(b.prob0) <= 1e-15);
  CHECK(std::abs(b.prob1 - 1.0) <= 1e-15);

  std::mt19937_64 rng(17);
  const StateVector r(oracle::random_state(rng, 2));
  const Occupancy c = occupancy(r, QubitBasis::Energy, QubitParams::constant(0.3, -0.1, 0.2, 0.9), 0.0);
  CHECK(std::abs(c.prob0 + c.prob1 - 1.0) <= 1e-10);

  CHECK_THROWS_AS(occupancy(StateVector::basis_state(4, 0), QubitBasis::Position, p, 0.0), Error);
}

}  // TEST_SUITE
