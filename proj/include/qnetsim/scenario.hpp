#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnetsim/jc.hpp"
#include "qnetsim/measure.hpp"
#include "qnetsim/network.hpp"
#include "qnetsim/qubit.hpp"
#include "qnetsim/record.hpp"

namespace qnetsim {

enum class Operation { Eig, Evolve, Fig3, Protocol, Entropy };
enum class SystemKind { Qubit, Jc, Network };
// Default picks adiabatic / paper / eigen for qubit / jc / network.
enum class Propagation { Default, Adiabatic, Paper, Eigen, Stepped };

const char* to_string(Operation op) noexcept;
const char* to_string(SystemKind kind) noexcept;
const char* to_string(Propagation p) noexcept;
std::optional<Operation> parse_operation(std::string_view text);

struct JcConfig {
  DriveSignal e_g;
  // Exactly one of e_e and detuning; detuning gives E_e = E_g + (E_phi2 - E_phi1) + detuning.
  std::optional<DriveSignal> e_e;
  std::optional<DriveSignal> detuning;
  double e_phi1 = 1.0;
  double e_phi2 = 2.0;
  DriveSignal g = DriveSignal::constant(1.0);
  double g_phase = 0.0;

  CoupledSystem build() const;
  bool operator==(const JcConfig&) const = default;
};

// Starts from the equally spaced network with energy unit e_g; the optional
// blocks override qubits and cavity for the general form.
struct NetworkConfig {
  NetworkForm form = NetworkForm::Simplified;
  double e_g = 1.0;
  double g1 = 0.0;
  double g2 = 0.0;
  DriveSignal d1;
  DriveSignal d2;
  std::optional<QubitParams> qubit_a;
  std::optional<QubitParams> qubit_b;
  std::optional<std::array<double, 2>> cavity;
  DriveSignal f1 = DriveSignal::constant(1.0);
  double waveguide_length = 0.0;
  double signal_speed = 1.0;

  NetworkSystem build() const;
  bool operator==(const NetworkConfig&) const = default;
};

struct Grid {
  double t0 = 0.0;
  double t1 = 10.0;
  int samples = 101;

  double at(int i) const { return t0 + (t1 - t0) * i / (samples - 1); }
  bool operator==(const Grid&) const = default;
};

struct InitialState {
  enum class Kind { Index, Eigenstate, Amplitudes };
  Kind kind = Kind::Index;
  int index = 0;  // 0-based basis index, or 1-based eigenstate label
  std::vector<Complex> amplitudes;

  bool operator==(const InitialState&) const = default;
};

enum class Prepared { E2, E3, Initial };

struct Scenario {
  std::string name;
  Operation operation = Operation::Eig;
  SystemKind system = SystemKind::Qubit;
  QubitParams qubit = QubitParams::symmetric(0.0, 1.0);
  JcConfig jc;
  NetworkConfig network;
  Grid grid;
  InitialState initial;
  Propagation propagation = Propagation::Default;
  double dt = 0.0;  // stepped propagation; <= 0 picks the module default
  Prepared prepared = Prepared::E2;
  std::int64_t shots = 1000;
  std::uint64_t seed = 0;
  std::vector<int> states;               // entropy: 1-based eigenstate labels, empty = all
  std::vector<std::string> partitions;   // entropy: subsystem names, empty = all
  std::string output;                    // per-scenario CSV path, optional

  int dimension() const;
  bool operator==(const Scenario&) const = default;
};

/// Parses a YAML list of scenario blocks. Syntax problems throw ParseError;
/// semantic problems are collected over all scenarios and thrown together as
/// Error(ValidationError), one "line L, column C: ..." diagnostic per line.
std::vector<Scenario> parse_scenarios(std::string_view text);

// Reads and parses a file. Throws IoError plus the parse errors above.
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);

// Throws Error(ValidationError) naming the offending key.
void validate(const Scenario& s);

std::string serialize_scenarios(const std::vector<Scenario>& scenarios);

// CSV columns produced by an operation on a system.
std::vector<std::string> columns_for(Operation op, SystemKind system);

/// Runs one scenario. Module errors propagate unchanged. `jobs` only affects
/// how protocol shots are spread over threads, never the result.
RunRecord run_experiment(const Scenario& s, unsigned jobs = 1);

/// Runs scenarios concurrently, at most `jobs` at a time, and returns the
/// records in input order. The first failure (in input order) is rethrown.
std::vector<RunRecord> run_experiments(const std::vector<Scenario>& scenarios, unsigned jobs);

}  // namespace qnetsim
