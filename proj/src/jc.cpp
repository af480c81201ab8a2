#include "qnetsim/jc.hpp"

#include <cmath>

#include "qnetsim/error.hpp"
#include "two_level.hpp"

namespace qnetsim {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

CoupledSystem CoupledSystem::constant(double e_g, double e_e, double e_phi1, double e_phi2,
                                      double g, double g_phase) {
  return {DriveSignal::constant(e_g), DriveSignal::constant(e_e), e_phi1, e_phi2,
          DriveSignal::constant(g), g_phase};
}

void CoupledSystem::validate(double t0, double t1) const {
  if (!(e_phi2 > e_phi1)) throw Error(ErrorCode::InvalidArgument, "cavity needs E_phi2 > E_phi1");
  constexpr int kSamples = 257;
  for (int i = 0; i < kSamples; ++i) {
    const double t = t0 + (t1 - t0) * i / (kSamples - 1);
    if (!(e_e(t) > e_g(t)))
      throw Error(ErrorCode::InvalidArgument, "qubit needs E_e > E_g (violated at t=" +
                                                  format_double(t) + ")");
    if (g_mag(t) < 0.0) throw Error(ErrorCode::InvalidArgument, "coupling magnitude must be >= 0");
  }
}

ComplexMatrix build_jc_hamiltonian(const CoupledSystem& sys, double t) {
  const double eg = sys.e_g(t);
  const double ee = sys.e_e(t);
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(0, 0) = eg + sys.e_phi1;
  h(1, 1) = ee + sys.e_phi1;
  h(2, 2) = eg + sys.e_phi2;
  h(3, 3) = ee + sys.e_phi2;
  const Complex g = sys.coupling(t);
  h(1, 2) = g;
  h(2, 1) = std::conj(g);
  return h;
}

JcEigen jc_eigensystem(const CoupledSystem& sys, double t) {
  const double eg = sys.e_g(t);
  const double ee = sys.e_e(t);
  const Complex g = sys.coupling(t);
  const double a = ee + sys.e_phi1;
  const double b = eg + sys.e_phi2;
  const double r = detail::half_splitting(a, b, g);
  const double mid = 0.5 * (a + b);

  JcEigen out;
  out.values = {eg + sys.e_phi1, ee + sys.e_phi2, mid - r, mid + r};
  out.vectors[0] = ComplexVector::Unit(4, 0);
  out.vectors[1] = ComplexVector::Unit(4, 3);
  if (g == 0.0) {
    const bool a_low = a <= b;
    out.vectors[2] = ComplexVector::Unit(4, a_low ? 1 : 2);
    out.vectors[3] = ComplexVector::Unit(4, a_low ? 2 : 1);
    return out;
  }
  for (int k = 0; k < 2; ++k) {
    const ComplexVector v = detail::two_level_eigenvector(a, b, g, out.values[2 + k]);
    ComplexVector full = ComplexVector::Zero(4);
    full(1) = v(0);
    full(2) = v(1);
    out.vectors[2 + k] = full;
  }
  return out;
}

ComplexMatrix jc_propagator(const CoupledSystem& sys, double t0, double t1, JcPropagation mode,
                            double dt) {
  if (t1 < t0) throw Error(ErrorCode::BadTimeRange, "t1 must not precede t0");
  if (mode == JcPropagation::Stepped) {
    if (t1 == t0) return ComplexMatrix::Identity(4, 4);
    if (dt <= 0.0) dt = 1e-3;
    return time_ordered_propagator([&sys](double t) { return build_jc_hamiltonian(sys, t); }, t0,
                                   t1, dt);
  }

  const double tau = t1 - t0;
  const double ei_g = sys.e_g.integral(t0, t1);
  const double ei_e = sys.e_e.integral(t0, t1);
  const Complex big_g = std::polar(sys.g_mag.integral(t0, t1), sys.g_phase);

  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  u(0, 0) = std::exp(-kI * (ei_g + tau * sys.e_phi1));
  u(3, 3) = std::exp(-kI * (ei_e + tau * sys.e_phi2));

  // exp(-i M) for M = [[m11, G], [G*, m22]].
  const double m11 = ei_e + tau * sys.e_phi1;
  const double m22 = ei_g + tau * sys.e_phi2;
  const double mean = 0.5 * (m11 + m22);
  const double half_d = 0.5 * (m11 - m22);
  const double w = std::sqrt(half_d * half_d + std::norm(big_g));
  const Complex phase = std::exp(-kI * mean);
  const double c = std::cos(w);
  const double s = sinc(w);
  u(1, 1) = phase * (c - kI * s * half_d);
  u(2, 2) = phase * (c + kI * s * half_d);
  u(1, 2) = phase * (-kI * s * big_g);
  u(2, 1) = phase * (-kI * s * std::conj(big_g));
  return u;
}

ExcitationProbabilities excitation_probabilities(const CoupledSystem& sys, const StateVector& state0,
                                                 double t0, double t, JcPropagation mode,
                                                 double dt) {
  if (state0.dim() != 4) throw Error(ErrorCode::DimMismatch, "JC state must have dimension 4");
  const ComplexVector gamma = jc_propagator(sys, t0, t, mode, dt) * state0.amplitudes();
  const double p2 = std::norm(gamma(1));
  const double p3 = std::norm(gamma(2));
  const double p4 = std::norm(gamma(3));
  return {p2 + p4, p3 + p4};
}

double energy_transfer_coefficient(const CoupledSystem& sys, double t0, double t1) {
  if (t1 < t0) throw Error(ErrorCode::BadTimeRange, "t1 must not precede t0");
  const double g_int = std::abs(sys.g_mag.integral(t0, t1));
  const double d = (sys.e_e.integral(t0, t1) - sys.e_g.integral(t0, t1)) -
                   (sys.e_phi2 - sys.e_phi1) * (t1 - t0);
  const double w = 0.5 * std::sqrt(d * d + 4.0 * g_int * g_int);
  const double amp = g_int * sinc(w);
  return amp * amp;
}

std::vector<Fig3Scenario> fig3_scenarios() {
  return {
      {"detuning_0", DriveSignal::constant(0.0)},
      {"detuning_0.1", DriveSignal::constant(0.1)},
      {"detuning_0.2", DriveSignal::constant(0.2)},
      {"detuning_0.3", DriveSignal::constant(0.3)},
      {"detuning_0.1+2cos(20t)", DriveSignal::constant(0.1) + DriveSignal::cosine(2.0, 20.0, 0.0)},
      {"detuning_0.2+0.2t", DriveSignal::linear(0.2, 0.2)},
      {"detuning_0.3+0.3t^2", DriveSignal::quadratic(0.3, 0.0, 0.3)},
  };
}

CoupledSystem fig3_system(const DriveSignal& detuning, double g) {
  CoupledSystem sys;
  sys.e_g = DriveSignal::constant(0.0);
  sys.e_phi1 = 1.0;
  sys.e_phi2 = 3.0;
  sys.e_e = DriveSignal::constant(sys.e_phi2 - sys.e_phi1) + detuning;
  sys.g_mag = DriveSignal::constant(g);
  return sys;
}

std::vector<Fig3Row> run_fig3_scenarios(double g, int samples, double t0, double t1) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "samples must be >= 2");
  if (!(t1 > t0)) throw Error(ErrorCode::BadTimeRange, "t1 must exceed t0");
  std::vector<Fig3Row> rows;
  const auto scenarios = fig3_scenarios();
  rows.reserve(scenarios.size() * static_cast<std::size_t>(samples));
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const CoupledSystem sys = fig3_system(scenarios[s].detuning, g);
    sys.validate(t0, t1);
    for (int i = 0; i < samples; ++i) {
      const double t = t0 + (t1 - t0) * i / (samples - 1);
      rows.push_back({static_cast<int>(s + 1), t, energy_transfer_coefficient(sys, t0, t)});
    }
  }
  return rows;
}

}  // namespace qnetsim
