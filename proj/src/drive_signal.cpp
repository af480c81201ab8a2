#include "qnetsim/drive_signal.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <optional>

#include "qnetsim/error.hpp"

namespace qnetsim {

namespace {

using Term = DriveSignal::Term;
using Kind = DriveSignal::Kind;

struct KindSpec {
  const char* name;
  Kind kind;
  std::array<const char*, 3> params;
  int arity;
};

constexpr std::array<KindSpec, 4> kKinds{{
    {"constant", Kind::Constant, {"value", "", ""}, 1},
    {"linear", Kind::Linear, {"offset", "slope", ""}, 2},
    {"quadratic", Kind::Quadratic, {"c0", "c1", "c2"}, 3},
    {"cosine", Kind::Cosine, {"amplitude", "omega", "phase"}, 3},
}};

const KindSpec& spec_for(Kind kind) {
  for (const auto& s : kKinds)
    if (s.kind == kind) return s;
  throw Error(ErrorCode::InvalidArgument, "no text form for a sum term");
}

double term_value(const Term& term, double t) {
  switch (term.kind) {
    case Kind::Constant: return term.p0;
    case Kind::Linear: return term.p0 + term.p1 * t;
    case Kind::Quadratic: return term.p0 + t * (term.p1 + t * term.p2);
    case Kind::Cosine: return term.p0 * std::cos(term.p1 * t + term.p2);
    case Kind::Sum: break;
  }
  return 0.0;
}

double term_integral(const Term& term, double a, double b) {
  switch (term.kind) {
    case Kind::Constant: return term.p0 * (b - a);
    case Kind::Linear: return term.p0 * (b - a) + 0.5 * term.p1 * (b * b - a * a);
    case Kind::Quadratic:
      return term.p0 * (b - a) + term.p1 * (b * b - a * a) / 2.0 +
             term.p2 * (b * b * b - a * a * a) / 3.0;
    case Kind::Cosine:
      if (term.p1 == 0.0) return term.p0 * std::cos(term.p2) * (b - a);
      return term.p0 / term.p1 * (std::sin(term.p1 * b + term.p2) - std::sin(term.p1 * a + term.p2));
    case Kind::Sum: break;
  }
  return 0.0;
}

Term negated(Term t) {
  t.p0 = -t.p0;
  if (t.kind == Kind::Linear || t.kind == Kind::Quadratic) t.p1 = -t.p1;
  if (t.kind == Kind::Quadratic) t.p2 = -t.p2;
  return t;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Term> parse_all() {
    std::vector<Term> terms;
    skip_ws();
    if (at_end()) fail("empty signal expression");
    bool negate = false;
    if (peek() == '-' && !starts_number()) {
      ++pos_;
      negate = true;
    }
    while (true) {
      Term t = parse_term();
      terms.push_back(negate ? negated(t) : t);
      skip_ws();
      if (at_end()) break;
      if (peek() == '+') {
        negate = false;
      } else if (peek() == '-') {
        negate = true;
      } else {
        fail(std::string("expected '+' or '-' but found '") + peek() + "'");
      }
      ++pos_;
      skip_ws();
    }
    return terms;
  }

 private:
  Term parse_term() {
    skip_ws();
    if (at_end()) fail("expected a term");
    if (starts_number()) return Term{Kind::Constant, parse_number(), 0.0, 0.0};
    const std::size_t name_pos = pos_;
    const std::string name = parse_identifier();
    if (name.empty()) fail(std::string("unexpected character '") + peek() + "'");
    const KindSpec* spec = nullptr;
    for (const auto& s : kKinds)
      if (name == s.name) spec = &s;
    if (spec == nullptr) fail_at(name_pos, "unknown signal kind '" + name + "'");
    skip_ws();
    expect('(');
    std::array<std::optional<double>, 3> values;
    int positional = 0;
    bool named_seen = false;
    skip_ws();
    if (!at_end() && peek() == ')') {
      ++pos_;
      return make(*spec, values);
    }
    while (true) {
      skip_ws();
      const std::size_t arg_pos = pos_;
      int slot = -1;
      if (!starts_number()) {
        const std::string key = parse_identifier();
        if (key.empty()) fail("expected an argument");
        for (int i = 0; i < spec->arity; ++i)
          if (key == spec->params[static_cast<std::size_t>(i)]) slot = i;
        if (slot < 0) fail_at(arg_pos, "unknown argument '" + key + "' for " + spec->name);
        skip_ws();
        expect('=');
        skip_ws();
        named_seen = true;
      } else {
        if (named_seen) fail_at(arg_pos, "positional argument after named argument");
        if (positional >= spec->arity)
          fail_at(arg_pos, std::string("too many arguments for ") + spec->name);
        slot = positional++;
      }
      if (values[static_cast<std::size_t>(slot)].has_value())
        fail_at(arg_pos, std::string("argument '") + spec->params[static_cast<std::size_t>(slot)] +
                             "' given twice");
      values[static_cast<std::size_t>(slot)] = parse_number();
      skip_ws();
      if (at_end()) fail("unterminated argument list");
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(')');
      break;
    }
    return make(*spec, values);
  }

  static Term make(const KindSpec& spec, const std::array<std::optional<double>, 3>& values) {
    return Term{spec.kind, values[0].value_or(0.0), values[1].value_or(0.0),
                values[2].value_or(0.0)};
  }

  double parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      ++pos_;
      if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    std::string_view token = text_.substr(start, pos_ - start);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size() || token.empty())
      fail_at(start, "malformed number '" + std::string(text_.substr(start, pos_ - start)) + "'");
    if (!std::isfinite(value)) fail_at(start, "number is not finite");
    return value;
  }

  std::string parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool starts_number() const {
    if (at_end()) return false;
    char c = peek();
    std::size_t i = pos_;
    if (c == '+' || c == '-') {
      if (i + 1 >= text_.size()) return false;
      c = text_[i + 1];
    }
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const {
    throw ParseError(1, static_cast<int>(pos) + 1, msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buf.data(), end);
}

DriveSignal::DriveSignal(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "signal needs at least one term");
  for (const Term& t : terms_)
    if (!std::isfinite(t.p0) || !std::isfinite(t.p1) || !std::isfinite(t.p2))
      throw Error(ErrorCode::NonFinite, "signal coefficient is not finite");
}

DriveSignal DriveSignal::constant(double value) {
  return DriveSignal({Term{Kind::Constant, value, 0.0, 0.0}});
}
DriveSignal DriveSignal::linear(double offset, double slope) {
  return DriveSignal({Term{Kind::Linear, offset, slope, 0.0}});
}
DriveSignal DriveSignal::quadratic(double c0, double c1, double c2) {
  return DriveSignal({Term{Kind::Quadratic, c0, c1, c2}});
}
DriveSignal DriveSignal::cosine(double amplitude, double omega, double phase) {
  return DriveSignal({Term{Kind::Cosine, amplitude, omega, phase}});
}

DriveSignal DriveSignal::sum(std::vector<DriveSignal> parts) {
  std::vector<Term> terms;
  for (auto& p : parts) terms.insert(terms.end(), p.terms_.begin(), p.terms_.end());
  return DriveSignal(std::move(terms));
}

DriveSignal DriveSignal::parse(std::string_view text) {
  return DriveSignal(Parser(text).parse_all());
}

DriveSignal::Kind DriveSignal::kind() const noexcept {
  return terms_.size() == 1 ? terms_.front().kind : Kind::Sum;
}

double DriveSignal::evaluate(double t) const {
  double acc = 0.0;
  for (const Term& term : terms_) acc += term_value(term, t);
  return acc;
}

double DriveSignal::integral(double a, double b) const {
  double acc = 0.0;
  for (const Term& term : terms_) acc += term_integral(term, a, b);
  return acc;
}

bool DriveSignal::is_constant() const noexcept {
  for (const Term& t : terms_) {
    switch (t.kind) {
      case Kind::Constant: break;
      case Kind::Linear:
        if (t.p1 != 0.0) return false;
        break;
      case Kind::Quadratic:
        if (t.p1 != 0.0 || t.p2 != 0.0) return false;
        break;
      case Kind::Cosine:
        if (t.p1 != 0.0 && t.p0 != 0.0) return false;
        break;
      case Kind::Sum: return false;
    }
  }
  return true;
}

double DriveSignal::constant_value() const {
  if (!is_constant()) throw Error(ErrorCode::InvalidArgument, "signal is time dependent: " + to_string());
  return evaluate(0.0);
}

std::string DriveSignal::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += " + ";
    const Term& t = terms_[i];
    const KindSpec& spec = spec_for(t.kind);
    out += spec.name;
    out += '(';
    const std::array<double, 3> values{t.p0, t.p1, t.p2};
    for (int k = 0; k < spec.arity; ++k) {
      if (k > 0) out += ", ";
      if (spec.arity > 1) {
        out += spec.params[static_cast<std::size_t>(k)];
        out += '=';
      }
      out += format_double(values[static_cast<std::size_t>(k)]);
    }
    out += ')';
  }
  return out;
}

DriveSignal DriveSignal::operator+(const DriveSignal& other) const { return sum({*this, other}); }

DriveSignal DriveSignal::operator-(const DriveSignal& other) const {
  return sum({*this, other * -1.0});
}

DriveSignal DriveSignal::operator*(double factor) const {
  std::vector<Term> terms = terms_;
  for (Term& t : terms) {
    t.p0 *= factor;
    if (t.kind == Kind::Linear || t.kind == Kind::Quadratic) t.p1 *= factor;
    if (t.kind == Kind::Quadratic) t.p2 *= factor;
  }
  return DriveSignal(std::move(terms));
}

}  // namespace qnetsim
