#include "qnetsim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "qnetsim/error.hpp"

namespace qnetsim {

namespace {

constexpr double kZeroProbability = 1e-14;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ComplexMatrix single_qubit_factor(const ComplexMatrix& block, int slot) {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  return slot == 1 ? tensor_product(id2, block, id2) : tensor_product(id2, id2, block);
}

ComplexMatrix energy_projector_block(bool excited) {
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(excited ? 1 : 0, excited ? 1 : 0) = 1.0;
  return b;
}

}  // namespace

Projector::Projector(ComplexMatrix matrix, std::string label)
    : matrix_(std::move(matrix)), label_(std::move(label)) {
  if (matrix_.rows() != matrix_.cols()) throw Error(ErrorCode::DimMismatch, "projector must be square");
  if (!is_hermitian(matrix_)) throw Error(ErrorCode::NotHermitian, "projector must be Hermitian");
  if (max_abs(matrix_ * matrix_ - matrix_) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "projector must be idempotent");
}

Projector projector_qubit1_energy(bool excited) {
  return {single_qubit_factor(energy_projector_block(excited), 1), excited ? "P_e1" : "P_g1"};
}

Projector projector_qubit2_energy(bool excited) {
  return {single_qubit_factor(energy_projector_block(excited), 2), excited ? "P_e2" : "P_g2"};
}

Projector projector_qubit1_position(Node node, const QubitParams& p, double t) {
  const QubitEnergyCoeffs k = abcd_coefficients(p, t);
  // <g|x>, <e|x>
  ComplexVector w(2);
  if (node == Node::X1)
    w << std::conj(k.a), std::conj(k.c);
  else
    w << std::conj(k.b), std::conj(k.d);
  const ComplexMatrix block = w * w.adjoint();
  return {single_qubit_factor(block, 1), node == Node::X1 ? "P_x1" : "P_x2"};
}

MeasurementResult measure(const StateVector& state, const Projector& p) {
  if (state.dim() != p.dim()) throw Error(ErrorCode::DimMismatch, "state and projector dimensions differ");
  const ComplexVector projected = p.matrix() * state.amplitudes();
  const double prob = projected.squaredNorm();
  if (prob < kZeroProbability)
    throw Error(ErrorCode::ZeroProbability, "outcome " + p.label() + " has zero probability");
  return {prob, StateVector(projected / std::sqrt(prob), state.basis())};
}

std::mt19937_64 shot_rng(std::uint64_t seed, std::uint64_t shot) {
  return std::mt19937_64(splitmix64(seed + 0x9E3779B97F4A7C15ULL * (shot + 1)));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

StateVector prepared_state(const NetworkSystem& sys, PreparedState which) {
  const NetworkEigen eig = network_eigensystem(sys);
  return StateVector(eig.vectors[which == PreparedState::E2 ? 1 : 2], BasisLabel::NetworkEnergy);
}

ProtocolStats communication_protocol(const StateVector& prepared, std::size_t shots,
                                     std::uint64_t seed, unsigned jobs) {
  if (shots < 1) throw Error(ErrorCode::InvalidArgument, "shots must be >= 1");
  if (prepared.dim() != 8) throw Error(ErrorCode::DimMismatch, "protocol needs an 8-dim network state");
  const Projector pe1 = projector_qubit1_energy(true);
  const Projector pg1 = projector_qubit1_energy(false);
  const Projector pg2 = projector_qubit2_energy(false);
  const double p_excited = std::clamp(
      std::real(prepared.amplitudes().dot(pe1.matrix() * prepared.amplitudes())), 0.0, 1.0);

  ProtocolStats stats;
  stats.born_excited = p_excited;
  stats.shots.resize(shots);

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      std::mt19937_64 rng = shot_rng(seed, s);
      const bool excited = uniform01(rng) < p_excited;
      const ComplexVector projected = (excited ? pe1 : pg1).matrix() * prepared.amplitudes();
      const double weight = projected.squaredNorm();
      if (weight < kZeroProbability)
        throw Error(ErrorCode::ZeroProbability, "sampled outcome has zero probability");
      // Ratio of unnormalized weights: exact when the collapse lands in a qubit-2 eigenspace.
      const double q2_ground = std::min(1.0, (pg2.matrix() * projected).squaredNorm() / weight);
      const bool q2_excited = uniform01(rng) >= q2_ground;
      stats.shots[s] = {s, excited, excited ? p_excited : 1.0 - p_excited, q2_ground, q2_excited,
                        seed};
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, shots);
  if (workers == 1) {
    run_range(0, shots);
  } else {
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (shots + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(shots, begin + chunk);
        if (begin >= end) continue;
        pool.emplace_back([&, w, begin, end] {
          try {
            run_range(begin, end);
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
  }

  for (const ShotRecord& r : stats.shots) {
    if (!r.qubit1_excited) continue;
    ++stats.excited_count;
    stats.min_q2_ground_given_excited = std::min(stats.min_q2_ground_given_excited, r.q2_ground_prob);
    if (r.qubit2_excited) ++stats.joint_excited_excited;
  }
  stats.excited_frequency = static_cast<double>(stats.excited_count) / static_cast<double>(shots);
  return stats;
}

double von_neumann_entropy(const StateVector& state, std::span<const int> dims, int keep,
                           EntropyUnit unit) {
  const ComplexMatrix reduced = partial_trace(density_matrix(state), dims, keep);
  const EigenSystem eig = hermitian_eig(0.5 * (reduced + reduced.adjoint()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    if (lambda < 1e-14) continue;
    s -= lambda * std::log(lambda);
  }
  if (unit == EntropyUnit::Bits) s /= std::log(2.0);
  return std::max(0.0, s);
}

}  // namespace qnetsim
