#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qnetsim/cavity.hpp"
#include "qnetsim/linalg.hpp"
#include "qnetsim/network.hpp"
#include "qnetsim/qubit.hpp"

namespace qnetsim {

// Hermitian idempotent matrix. Construction checks max|P^2 - P| <= 1e-12.
class Projector {
 public:
  Projector(ComplexMatrix matrix, std::string label);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::string& label() const noexcept { return label_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
  std::string label_;
};

// I_cavity (x) |e1><e1| (x) I_qubit2, or the ground analogue.
Projector projector_qubit1_energy(bool excited);

enum class Node { X1, X2 };

// I_cavity (x) |x_node><x_node| (x) I_qubit2 written in the energy basis of
// qubit 1. Throws Degenerate when |t_s| = 0.
Projector projector_qubit1_position(Node node, const QubitParams& p, double t);

// I_cavity (x) I_qubit1 (x) |g2><g2|
Projector projector_qubit2_energy(bool excited);

// Born probability and collapsed state. Throws DimMismatch or ZeroProbability.
MeasurementResult measure(const StateVector& state, const Projector& p);

// Per-shot generator: mt19937_64 seeded with splitmix64(seed + golden * (shot + 1)).
std::mt19937_64 shot_rng(std::uint64_t seed, std::uint64_t shot);

// 53-bit uniform in [0, 1).
double uniform01(std::mt19937_64& rng);

struct ShotRecord {
  std::uint64_t shot;
  bool qubit1_excited;
  double p_outcome;       // Born weight of the sampled qubit-1 outcome
  double q2_ground_prob;  // qubit-2 ground probability after the collapse
  bool qubit2_excited;    // follow-up qubit-2 energy readout
  std::uint64_t seed;
};

struct ProtocolStats {
  std::vector<ShotRecord> shots;
  std::size_t excited_count = 0;
  double excited_frequency = 0.0;
  double born_excited = 0.0;
  // Smallest qubit-2 ground probability over the excited shots (1 when none).
  double min_q2_ground_given_excited = 1.0;
  std::size_t joint_excited_excited = 0;
};

enum class PreparedState { E2, E3 };

StateVector prepared_state(const NetworkSystem& sys, PreparedState which);

/// Repeated prepare-and-measure: sample qubit 1's energy by the Born rule,
/// collapse, then read qubit 2 in its energy basis. Shots are independent and
/// may be spread over `jobs` threads without changing the result.
ProtocolStats communication_protocol(const StateVector& prepared, std::size_t shots,
                                     std::uint64_t seed, unsigned jobs = 1);

enum class EntropyUnit { Nats, Bits };

// Entropy of the reduced state of subsystem `keep`. Eigenvalues below 1e-14
// are dropped.
double von_neumann_entropy(const StateVector& state, std::span<const int> dims, int keep,
                           EntropyUnit unit = EntropyUnit::Nats);

}  // namespace qnetsim
