#pragma once

// Exact Gaussian-rational scalars.
//
// Every quantity that enters an "exact" verdict is a ExactComplex built on
// GMP rationals. Square roots never appear implicitly: disk membership and
// magnitude comparisons work on magnitude-squared, and the few places that
// need a root (clamping, lambda selection) go through exact_sqrt /
// exact_fourth_root or the certified bracketing helpers below.

#include <gmpxx.h>

#include <compare>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dclab {

using Rational = mpq_class;

enum class Exactness { exact, approximate };

std::string_view to_string(Exactness e);

// Accepts "p/q", "p", and decimal / scientific notation ("0.9", "1e-9").
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

Rational rational_pow(const Rational& base, std::uint64_t exponent);
Rational power_of_ten(int exponent);

std::optional<Rational> exact_sqrt(const Rational& q);
std::optional<Rational> exact_fourth_root(const Rational& q);

// Certified bracket [lower, upper] around a root of a nonnegative rational,
// with upper - lower <= 2^-bits / den(q) <= 2^-bits.
struct RootBracket {
  Rational lower;
  Rational upper;
};
RootBracket sqrt_bracket(const Rational& q, unsigned bits);
RootBracket fourth_root_bracket(const Rational& q, unsigned bits);

// Fractional bits needed so a bracket of a root of `q` has both absolute
// width <= 2^-64 and relative width around 2^-64.
unsigned root_bits_for(const Rational& q, unsigned root_degree);

class ExactComplex {
 public:
  ExactComplex() = default;
  ExactComplex(Rational re, Rational im = 0);  // NOLINT: implicit from real
  ExactComplex(int re) : ExactComplex(Rational(re)) {}  // NOLINT

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  ExactComplex conj() const { return {re_, -im_}; }
  // Throws std::domain_error for zero.
  ExactComplex reciprocal() const;

  ExactComplex& operator+=(const ExactComplex& o);
  ExactComplex& operator-=(const ExactComplex& o);
  ExactComplex& operator*=(const ExactComplex& o);
  ExactComplex& operator/=(const ExactComplex& o);

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

ExactComplex pow(const ExactComplex& base, std::uint64_t exponent);
ExactComplex scale(const ExactComplex& z, const Rational& factor);

Rational magnitude_squared(const ExactComplex& z);
std::weak_ordering compare_magnitude(const ExactComplex& a, const ExactComplex& b);

// Rendering-only mirror. `overflow` is set when a part rounded to +-inf.
struct ApproxComplex {
  std::complex<double> value;
  bool overflow = false;
};
ApproxComplex to_approx(const ExactComplex& z);
double to_double(const Rational& q, bool* overflow = nullptr);
// Shortest round-trip decimal rendering; "inf"/"-inf" on overflow.
std::string render_decimal(const Rational& q);

// "gmp X.Y.Z, mpfr X.Y.Z", echoed into reports.
std::string arithmetic_backends();

// Nearby point with |p| = 1 exactly, via the rational half-angle
// parametrization ((1 - t^2) + 2ti) / (1 + t^2). Requires z != 0.
ExactComplex unit_phase_near(const ExactComplex& z);
// Maps a parameter in [-1, 1] monotonically around the unit circle, exactly.
ExactComplex unit_phase_from_parameter(const Rational& a);

// A scalar of the closed unit disk; |value|^2 <= 1 is checked exactly.
class DiskScalar {
 public:
  DiskScalar() = default;
  explicit DiskScalar(ExactComplex value);

  const ExactComplex& value() const noexcept { return value_; }
  operator const ExactComplex&() const noexcept { return value_; }  // NOLINT

  friend bool operator==(const DiskScalar&, const DiskScalar&) = default;

 private:
  ExactComplex value_{0};
};

}  // namespace dclab
