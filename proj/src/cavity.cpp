#include "qnetsim/cavity.hpp"

#include <cmath>
#include <numbers>

#include "qnetsim/error.hpp"
#include "quadrature.hpp"

namespace qnetsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroProbability = 1e-14;

void check_mode(int mode) {
  if (mode != 1 && mode != 2)
    throw Error(ErrorCode::UnknownMode, "cavity mode must be 1 or 2, got " + std::to_string(mode));
}

void check_inside(double x, double length) {
  if (!(std::abs(x) <= 0.5 * length))
    throw Error(ErrorCode::OutOfCavity, "position " + std::to_string(x) + " outside cavity of length " +
                                            std::to_string(length));
}

double axis_factor(int mode, double x, double length) {
  if (mode == 1) return std::sqrt(kPi / (2.0 * length)) * std::cos(kPi * x / length);
  return std::sqrt(2.0 / length) * std::sin(2.0 * kPi * x / length);
}

}  // namespace

CavitySpec CavitySpec::from_energies(double e_phi1, double e_phi2, double length) {
  CavitySpec spec;
  spec.energies = {e_phi1, e_phi2};
  spec.lengths = {length, length, length};
  spec.validate();
  return spec;
}

CavitySpec CavitySpec::from_frequency(double omega_c, double length) {
  CavitySpec spec;
  spec.omega_c = omega_c;
  spec.lengths = {length, length, length};
  spec.validate();
  return spec;
}

double CavitySpec::energy(int k) const {
  if (omega_c) return *omega_c * (0.5 + k);
  return energies[static_cast<std::size_t>(k)];
}

void CavitySpec::validate() const {
  if (dims != 1 && dims != 3) throw Error(ErrorCode::InvalidArgument, "cavity dims must be 1 or 3");
  for (int i = 0; i < dims; ++i)
    if (!(lengths[static_cast<std::size_t>(i)] > 0.0))
      throw Error(ErrorCode::InvalidArgument, "cavity lengths must be positive");
  if (!(e_phi2() > e_phi1()))
    throw Error(ErrorCode::InvalidArgument, "cavity needs E_phi2 > E_phi1");
}

double mode_energy(const CavitySpec& spec, int k) {
  if (k < 0) throw Error(ErrorCode::UnknownMode, "mode index must be >= 0");
  if (spec.omega_c) return *spec.omega_c * (0.5 + k);
  if (k > 1)
    throw Error(ErrorCode::UnknownMode,
                "only two stored mode energies; mode " + std::to_string(k) + " requested");
  return spec.energies[static_cast<std::size_t>(k)];
}

Complex mode_wavefunction(const CavitySpec& spec, int mode, double x, double t) {
  check_mode(mode);
  check_inside(x, spec.lengths[0]);
  const double e = mode_energy(spec, mode - 1);
  return std::exp(-kI * (e * t)) * axis_factor(mode, x, spec.lengths[0]);
}

Complex mode_wavefunction(const CavitySpec& spec, int mode, const std::array<double, 3>& r,
                          double t) {
  check_mode(mode);
  if (spec.dims == 1) return mode_wavefunction(spec, mode, r[0], t);
  double amplitude = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    check_inside(r[i], spec.lengths[i]);
    amplitude *= axis_factor(mode, r[i], spec.lengths[i]);
  }
  const double e = mode_energy(spec, mode - 1);
  return std::exp(-kI * (e * t)) * amplitude;
}

double mode_norm(const CavitySpec& spec, int mode, double t) {
  const double half = 0.5 * spec.lengths[0];
  return detail::integrate(
      [&](double x) { return std::norm(mode_wavefunction(spec, mode, x, t)); }, -half, half,
      1e-12);
}

FieldOperators field_operators(const CavitySpec& spec, double x, double t) {
  const double length = spec.lengths[0];
  check_inside(x, length);
  const double omega = spec.field_omega.value_or(mode_energy(spec, 0));
  const double arg = omega * t + spec.phases[0];
  const double o1 = spec.u0 * std::sin(arg);
  const double o2 = spec.u0 * std::cos(arg);
  const double r = spec.e0 * std::cos(2.0 * kPi * x / length);

  ComplexMatrix sx(2, 2), sy(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  // i (|E2><E1| - |E1><E2|)
  sy << 0.0, -kI, kI, 0.0;
  return {r * o1 / std::sqrt(2.0) * sx, r * o2 / std::sqrt(2.0) * sy};
}

ComplexMatrix dissipation_hamiltonian(Complex f1, Complex f2) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(1, 0) = f1;
  h(0, 1) = f2;
  return h;
}

MeasurementResult cavity_measure(const StateVector& state, const CavityMeasurement& what,
                                 const CavitySpec& spec, double t) {
  if (state.dim() != 2) throw Error(ErrorCode::DimMismatch, "cavity state must have dimension 2");
  const ComplexVector& c = state.amplitudes();

  if (what.kind == CavityMeasurement::Kind::Energy) {
    check_mode(what.mode);
    const auto k = static_cast<Eigen::Index>(what.mode - 1);
    const double p = std::norm(c(k));
    if (p < kZeroProbability)
      throw Error(ErrorCode::ZeroProbability, "energy outcome has zero probability");
    ComplexVector collapsed = ComplexVector::Zero(2);
    collapsed(k) = c(k) / std::sqrt(p);
    return {p, StateVector::normalized(collapsed, BasisLabel::CavityEnergy)};
  }

  if (spec.dims != 1)
    throw Error(ErrorCode::InvalidArgument, "position measurement is defined for 1D cavities");
  const double half = 0.5 * spec.lengths[0];
  if (!(what.a < what.b)) throw Error(ErrorCode::InvalidArgument, "window needs a < b");
  if (what.a < -half || what.b > half)
    throw Error(ErrorCode::OutOfCavity, "measurement window exceeds the cavity");

  const std::array<double, 2> scale{1.0 / std::sqrt(mode_norm(spec, 1, 0.0)),
                                    1.0 / std::sqrt(mode_norm(spec, 2, 0.0))};
  auto phi = [&](int mode, double x) {
    return scale[static_cast<std::size_t>(mode - 1)] * mode_wavefunction(spec, mode, x, t);
  };

  // Window overlaps <phi_j|P(a,b)|phi_k> of the normalized modes.
  ComplexMatrix overlap(2, 2);
  for (int j = 1; j <= 2; ++j)
    for (int k = j; k <= 2; ++k) {
      const Complex v = detail::integrate(
          [&](double x) { return std::conj(phi(j, x)) * phi(k, x); }, what.a, what.b, 1e-12);
      overlap(j - 1, k - 1) = v;
      overlap(k - 1, j - 1) = std::conj(v);
    }

  const double p = detail::integrate(
      [&](double x) { return std::norm(c(0) * phi(1, x) + c(1) * phi(2, x)); }, what.a, what.b,
      1e-10);
  if (p < kZeroProbability)
    throw Error(ErrorCode::ZeroProbability, "position window has zero probability");
  const ComplexVector projected = overlap * c;
  if (projected.norm() < kZeroProbability)
    throw Error(ErrorCode::ZeroProbability, "projected state vanishes");
  return {p, StateVector::normalized(projected, BasisLabel::CavityEnergy)};
}

}  // namespace qnetsim
