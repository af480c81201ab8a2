#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qnetsim {

/// Declarative time-dependent real scalar used for gate voltages, hopping
/// amplitudes, couplings and detuning schedules.
///
/// A signal is a non-empty sum of terms. Each term is one of
///   constant(value)                          value
///   linear(offset, slope)                    offset + slope*t
///   quadratic(c0, c1, c2)                    c0 + c1*t + c2*t^2
///   cosine(amplitude, omega, phase)          amplitude*cos(omega*t + phase)
/// All of them integrate in closed form.
///
/// Text form: terms joined by '+' (or '-', which negates the next term);
/// arguments may be positional or named, and a bare number is a constant:
///   cosine(amplitude=2, omega=20, phase=0) + constant(0.1)
///   0.2 + linear(0, 0.2)
class DriveSignal {
 public:
  enum class Kind { Constant, Linear, Quadratic, Cosine, Sum };

  struct Term {
    Kind kind = Kind::Constant;
    double p0 = 0.0;  // value | offset | c0 | amplitude
    double p1 = 0.0;  // -     | slope  | c1 | omega
    double p2 = 0.0;  // -     | -      | c2 | phase

    bool operator==(const Term&) const = default;
  };

  DriveSignal() : DriveSignal(constant(0.0)) {}

  static DriveSignal constant(double value);
  static DriveSignal linear(double offset, double slope);
  static DriveSignal quadratic(double c0, double c1, double c2);
  static DriveSignal cosine(double amplitude, double omega, double phase);
  static DriveSignal sum(std::vector<DriveSignal> parts);

  // Throws ParseError with a 1-based column into `text`.
  static DriveSignal parse(std::string_view text);

  Kind kind() const noexcept;
  const std::vector<Term>& terms() const noexcept { return terms_; }

  double operator()(double t) const { return evaluate(t); }
  double evaluate(double t) const;
  // Exact integral over [a, b].
  double integral(double a, double b) const;

  bool is_constant() const noexcept;
  // Sum of all constant terms. Meaningful for time-invariant parameters.
  double constant_value() const;

  std::string to_string() const;

  DriveSignal operator+(const DriveSignal& other) const;
  DriveSignal operator-(const DriveSignal& other) const;
  DriveSignal operator*(double factor) const;

  bool operator==(const DriveSignal&) const = default;

 private:
  explicit DriveSignal(std::vector<Term> terms);

  std::vector<Term> terms_;
};

// Shortest round-trip decimal form of a double ("0.1", "1e-07", "-2").
std::string format_double(double value);

}  // namespace qnetsim
