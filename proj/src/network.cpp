#include "qnetsim/network.hpp"

#include <cmath>
#include <numbers>

#include "qnetsim/error.hpp"
#include "quadrature.hpp"

namespace qnetsim {

namespace {

ComplexMatrix hermitian_completion(ComplexMatrix h) {
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = i + 1; j < h.cols(); ++j) h(j, i) = std::conj(h(i, j));
  return h;
}

ComplexVector unit(Eigen::Index i) { return ComplexVector::Unit(8, i); }

double field_integral(const QubitCavityCoupling& q, const CavitySpec& cavity, int k, double t) {
  const auto idx = static_cast<std::size_t>(k);
  if (q.field_expectation[idx]) return q.field_expectation[idx]->integral(0.0, t);
  const double amplitude =
      cavity.field_amplitudes[idx] * std::cos(2.0 * std::numbers::pi * q.position / cavity.lengths[0]);
  // sin(w t + p) = cos(w t + p - pi/2)
  return DriveSignal::cosine(amplitude, mode_energy(cavity, k), cavity.phases[idx] - 0.5 * std::numbers::pi)
      .integral(0.0, t);
}

// Tight-binding block of one qubit while the cavity sits in mode k, with the
// effective potentials, linear hopping renormalization and phase imprints.
ComplexMatrix renormalized_qubit_block(const QubitCavityCoupling& q, const CavitySpec& cavity, int k,
                                       double t, Complex extra_phase) {
  const auto idx = static_cast<std::size_t>(k);
  const double s = std::sin(mode_energy(cavity, k) * t + cavity.phases[idx]);
  const double v_node1 = q.va[k == 0 ? 0 : 1];
  const double v_node2 = q.va[k == 0 ? 2 : 3];
  const double p = std::exp(-q.c0 * q.va[4] * cavity.field_amplitudes[idx] * s);
  Complex hop = q.qubit.hopping(t) * p * extra_phase;
  if (q.s0 != 0.0) hop *= std::exp(kI * (q.s0 * field_integral(q, cavity, k, t)));

  ComplexMatrix b(2, 2);
  b << q.qubit.ep1(t) + v_node1 * s, hop, std::conj(hop), q.qubit.ep2(t) + v_node2 * s;
  return b;
}

Complex mutual_imprint(const QubitParams& other, double strength, bool use_sqrt, double t) {
  if (strength == 0.0) return 1.0;
  double integral = 0.0;
  if (use_sqrt) {
    integral = detail::integrate(
        [&other](double s) { return std::sqrt(std::max(0.0, other.ts_mag(s))); }, 0.0, t, 1e-12);
  } else {
    integral = other.ts_mag.integral(0.0, t);
  }
  return std::exp(kI * (strength * integral));
}

ComplexMatrix coupling_matrix(const QubitCavityCoupling& q, double t) {
  if (q.dipole_scale == 0.0) return ComplexMatrix::Zero(4, 4);
  return interaction_matrix(abcd_coefficients(q.qubit, t, q.dipole_scale));
}

}  // namespace

NetworkSystem NetworkSystem::simplified(double e_g, double g1, double g2, DriveSignal d1,
                                        DriveSignal d2) {
  NetworkSystem sys;
  sys.qubit_a.qubit = QubitParams::symmetric(1.5 * e_g, 0.5 * e_g);
  sys.qubit_b.qubit = QubitParams::symmetric(1.5 * e_g, 0.5 * e_g);
  sys.cavity = CavitySpec::from_energies(e_g, 2.0 * e_g);
  sys.g1 = g1;
  sys.g2 = g2;
  sys.d1 = std::move(d1);
  sys.d2 = std::move(d2);
  return sys;
}

double simplified_energy_unit(const NetworkSystem& sys, double t) {
  const auto [ga, ea] = qubit_energies(sys.qubit_a.qubit, t);
  const auto [gb, eb] = qubit_energies(sys.qubit_b.qubit, t);
  const double e_phi1 = mode_energy(sys.cavity, 0);
  const double e_phi2 = mode_energy(sys.cavity, 1);
  const double unit = e_phi1;
  const double tol = 1e-10 * std::max(1.0, std::abs(unit));
  const std::array<double, 5> others{ga, gb, e_phi2 - e_phi1, ea - ga, eb - gb};
  for (double v : others)
    if (std::abs(v - unit) > tol)
      throw Error(ErrorCode::ConstraintViolated,
                  "simplified form needs E_gA = E_gB = E_phi1 = E_phi2 - E_phi1 = E_eA - E_gA = "
                  "E_eB - E_gB");
  return unit;
}

ComplexMatrix build_network_hamiltonian(const NetworkSystem& sys, double t, NetworkForm form) {
  ComplexMatrix h = ComplexMatrix::Zero(8, 8);
  const Complex p1 = std::exp(-kI * sys.d1(t));
  const Complex p2 = std::exp(-kI * sys.d2(t));

  if (form == NetworkForm::Simplified) {
    const double eg = simplified_energy_unit(sys, t);
    const std::array<double, 8> diag{3, 4, 4, 5, 4, 5, 5, 6};
    for (int i = 0; i < 8; ++i) h(i, i) = diag[static_cast<std::size_t>(i)] * eg;
    h(1, 4) = sys.g2 * p2;
    h(2, 4) = sys.g1 * p1;
    h(3, 5) = sys.g1 * p1;
    h(3, 6) = sys.g2 * p2;
    return hermitian_completion(h);
  }

  const auto [ga, ea] = qubit_energies(sys.qubit_a.qubit, t);
  const auto [gb, eb] = qubit_energies(sys.qubit_b.qubit, t);
  const std::array<double, 2> cav{mode_energy(sys.cavity, 0), mode_energy(sys.cavity, 1)};
  const std::array<double, 2> qa{ga, ea};
  const std::array<double, 2> qb{gb, eb};
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        h(4 * c + 2 * a + b, 4 * c + 2 * a + b) = cav[static_cast<std::size_t>(c)] +
                                                   qa[static_cast<std::size_t>(a)] +
                                                   qb[static_cast<std::size_t>(b)];
  const double f_now = sys.f1(t);
  const double f_late = sys.f1(t + sys.delay());
  h(1, 4) = sys.g2 * f_late * p2;
  h(2, 4) = sys.g1 * f_now * p1;
  h(3, 5) = sys.g1 * f_now * p1;
  h(3, 6) = sys.g2 * f_late * p2;
  return hermitian_completion(h);
}

NetworkEigen network_eigensystem(const NetworkSystem& sys, double t) {
  const double eg = simplified_energy_unit(sys, t);
  const double g1 = sys.g1;
  const double g2 = sys.g2;
  const double r = std::sqrt(g1 * g1 + g2 * g2);
  const Complex p1 = std::exp(-kI * sys.d1(t));
  const Complex p2 = std::exp(-kI * sys.d2(t));

  NetworkEigen out;
  out.values = {3 * eg, 4 * eg, 5 * eg, 6 * eg, 4 * eg - r, 5 * eg - r, 4 * eg + r, 5 * eg + r};

  std::array<ComplexVector, 8> v;
  v[0] = unit(0);
  v[3] = unit(7);
  if (r == 0.0) {
    v[1] = unit(2);
    v[2] = unit(6);
    v[4] = unit(1);
    v[5] = unit(3);
    v[6] = unit(4);
    v[7] = unit(5);
  } else {
    for (auto* w : {&v[1], &v[2], &v[4], &v[5], &v[6], &v[7]}) *w = ComplexVector::Zero(8);
    // dark states
    v[1](1) = -g1 * p2;
    v[1](2) = g2 * p1;
    v[2](5) = -g2 * p2;
    v[2](6) = g1 * p1;
    // bright states of the {1, 2, 4} and {3, 5, 6} blocks
    for (int s = 0; s < 2; ++s) {
      const double lambda = s == 0 ? -r : r;
      ComplexVector& low = v[s == 0 ? 4 : 6];
      low(1) = g2 * p2;
      low(2) = g1 * p1;
      low(4) = lambda;
      ComplexVector& high = v[s == 0 ? 5 : 7];
      high(3) = lambda;
      high(5) = g1 * std::conj(p1);
      high(6) = g2 * std::conj(p2);
    }
  }

  constexpr std::array<Eigen::Index, 8> kAnchor{0, 2, 6, 7, 4, 6, 4, 6};
  constexpr std::array<int, 3> kDims{2, 2, 2};
  for (std::size_t k = 0; k < 8; ++k) {
    out.vectors[k] = fix_phase(v[k] / v[k].norm());
    out.norms[k] = std::abs(out.vectors[k](kAnchor[k]));
    out.product_state[k] =
        is_product_state(StateVector(out.vectors[k], BasisLabel::NetworkEnergy), kDims);
  }
  return out;
}

StateVector network_evolve(const NetworkSystem& sys, const std::array<Complex, 8>& coeffs, double t0,
                           double t1) {
  if (t1 < t0) throw Error(ErrorCode::BadTimeRange, "t1 must not precede t0");
  double total = 0.0;
  for (const Complex& c : coeffs) total += std::norm(c);
  if (std::abs(total - 1.0) > kNormTolerance)
    throw Error(ErrorCode::NotNormalized, "eigen-coefficients must satisfy sum |c_k|^2 = 1");
  simplified_energy_unit(sys, t0);
  const NetworkEigen eig = network_eigensystem(sys, t1);
  ComplexVector psi = ComplexVector::Zero(8);
  for (std::size_t k = 0; k < 8; ++k)
    psi += coeffs[k] * std::exp(-kI * (eig.values[k] * (t1 - t0))) * eig.vectors[k];
  return StateVector(psi, BasisLabel::NetworkEnergy);
}

ComplexMatrix network_propagator(const NetworkSystem& sys, double t0, double t1, NetworkForm form,
                                 double dt) {
  if (t1 < t0) throw Error(ErrorCode::BadTimeRange, "t1 must not precede t0");
  if (t1 == t0) return ComplexMatrix::Identity(8, 8);
  return time_ordered_propagator(
      [&sys, form](double t) { return build_network_hamiltonian(sys, t, form); }, t0, t1, dt);
}

QubitEnergyCoeffs abcd_coefficients(const QubitParams& p, double t, Complex scale) {
  const double mag = p.ts_mag(t);
  if (mag < 0.0) throw Error(ErrorCode::InvalidArgument, "hopping magnitude must be >= 0");
  if (mag == 0.0) throw Error(ErrorCode::Degenerate, "a, b, c, d need |t_s| > 0");
  const Complex phase = std::exp(kI * p.ts_phase(t));
  const double half = 0.5 * (p.ep2(t) - p.ep1(t));
  const double root = std::sqrt(half * half + mag * mag);
  // half + root and root - half, each in its cancellation-free form
  const double up = half >= 0.0 ? half + root : mag * mag / (root - half);
  const double down = half <= 0.0 ? root - half : mag * mag / (root + half);
  const double na = std::hypot(mag, up);
  const double nc = std::hypot(mag, down);

  QubitEnergyCoeffs k;
  k.a = up * phase / na;
  k.b = -mag / na;
  k.c = down * phase / nc;
  k.d = mag / nc;
  k.u = scale * 0.5 * (std::conj(k.c) * k.a - std::conj(k.d) * k.b);
  return k;
}

ComplexMatrix interaction_block_hs(const QubitEnergyCoeffs& k) {
  const Complex a = k.a, b = k.b, c = k.c, d = k.d;
  const double na = std::norm(a), nb = std::norm(b), nc = std::norm(c), nd = std::norm(d);
  ComplexMatrix hs(2, 2);
  hs(0, 0) = k.u * (na * nc - std::conj(a) * std::conj(d) * b * c);
  hs(0, 1) = k.u * (a * std::conj(b) * nc - c * std::conj(d) * nb);
  hs(1, 0) = k.u * (d * na * std::conj(c) - nd * b * std::conj(a));
  hs(1, 1) = k.u * (-nb * nd + std::conj(b) * std::conj(c) * a * d);
  return hs;
}

ComplexMatrix interaction_matrix(const QubitEnergyCoeffs& k) {
  const ComplexMatrix hs = interaction_block_hs(k);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m.block(0, 2, 2, 2) = hs;
  m.block(2, 0, 2, 2) = hs.adjoint();
  return m;
}

ComplexMatrix build_renormalized_jc_hamiltonian(const RenormalizedJcSystem& sys, double t) {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 2; ++k) {
    const double e = mode_energy(sys.cavity, k);
    h.block(2 * k, 2 * k, 2, 2) =
        e * ComplexMatrix::Identity(2, 2) +
        renormalized_qubit_block(sys.coupling, sys.cavity, k, t, 1.0);
  }
  return h + coupling_matrix(sys.coupling, t);
}

ComplexMatrix build_renormalized_network_hamiltonian(const NetworkSystem& sys, double t) {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  const Complex imprint_a = mutual_imprint(sys.qubit_b.qubit, sys.s_b, sys.sqrt_imprint, t);
  const Complex imprint_b = mutual_imprint(sys.qubit_a.qubit, sys.s_a, sys.sqrt_imprint, t);

  ComplexMatrix h = ComplexMatrix::Zero(8, 8);
  for (int k = 0; k < 2; ++k) {
    const double e = mode_energy(sys.cavity, k);
    h.block(4 * k, 4 * k, 4, 4) =
        e * ComplexMatrix::Identity(4, 4) +
        tensor_product(renormalized_qubit_block(sys.qubit_a, sys.cavity, k, t, imprint_a), id2) +
        tensor_product(id2, renormalized_qubit_block(sys.qubit_b, sys.cavity, k, t, imprint_b));
  }

  if (sys.charge != 0.0) {
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 4; ++j) {
        const double dist = sys.coulomb_distances[static_cast<std::size_t>(j)];
        if (!(dist > 0.0)) throw Error(ErrorCode::InvalidArgument, "Coulomb distances must be > 0");
        h(4 * k + j, 4 * k + j) += sys.charge * sys.charge / dist;
      }
  }

  h += tensor_product(coupling_matrix(sys.qubit_a, t), id2);
  if (sys.qubit_b.dipole_scale != 0.0) {
    const ComplexMatrix hs_b =
        tensor_product(id2, interaction_block_hs(
                                abcd_coefficients(sys.qubit_b.qubit, t, sys.qubit_b.dipole_scale)));
    h.block(0, 4, 4, 4) += hs_b;
    h.block(4, 0, 4, 4) += hs_b.adjoint();
  }
  return h;
}

}  // namespace qnetsim
