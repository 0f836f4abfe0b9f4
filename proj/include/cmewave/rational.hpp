#pragma once

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace cmewave {

/// Reduced rational number. Used for wavenumber bookkeeping so that the
/// harmonic membership tests of the W-splitting are exact integer
/// arithmetic instead of floating-point classification.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    reduce();
  }

  void reduce() {
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(std::llabs(num), den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }

  Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
  Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
  Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
  Rational operator*(long long s) const { return {num * s, den}; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  /// Parses "p/q" or "p". Throws on malformed input or q == 0.
  static Rational parse(const std::string& s) {
    std::size_t slash = s.find('/');
    std::size_t pos = 0;
    long long n, d = 1;
    try {
      n = std::stoll(s.substr(0, slash), &pos);
      if (pos != (slash == std::string::npos ? s.size() : slash))
        throw std::invalid_argument("trailing characters");
      if (slash != std::string::npos) {
        d = std::stoll(s.substr(slash + 1), &pos);
        if (pos != s.size() - slash - 1) throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("Rational::parse: malformed rational '" + s + "'");
    }
    return {n, d};
  }
};

/// A wavenumber expressed in lattice units (multiples of the primitive
/// reciprocal wavenumber 2*pi/P of the underlying periodic problem).
/// Exact rational on the primary path; a plain real with an integrality
/// tolerance of 1e-9 on the irrational path.
class Wavenumber {
 public:
  static constexpr double integer_tol = 1e-9;

  Wavenumber() : value_(0.0) { exact_ = Rational{0, 1}; }
  explicit Wavenumber(Rational r) : exact_(r), value_(r.value()) {}
  explicit Wavenumber(double v) : value_(v) {}

  double value() const { return value_; }
  bool exact() const { return exact_.has_value(); }
  const Rational& rational() const {
    if (!exact_) throw std::logic_error("Wavenumber: not rational");
    return *exact_;
  }

  bool is_integer() const {
    if (exact_) return exact_->is_integer();
    return std::abs(value_ - std::round(value_)) < integer_tol;
  }

  /// Nearest integer; only meaningful when is_integer() holds.
  long long as_integer() const {
    if (exact_) {
      if (!exact_->is_integer()) throw std::logic_error("Wavenumber: not an integer");
      return exact_->num;
    }
    return static_cast<long long>(std::llround(value_));
  }

  Wavenumber times(long long n) const {
    if (exact_) return Wavenumber(*exact_ * n);
    return Wavenumber(value_ * static_cast<double>(n));
  }

  Wavenumber plus(const Wavenumber& o) const {
    if (exact_ && o.exact_) return Wavenumber(*exact_ + *o.exact_);
    return Wavenumber(value_ + o.value_);
  }

 private:
  std::optional<Rational> exact_;
  double value_;
};

}  // namespace cmewave
