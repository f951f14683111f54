#include "dclab/scalar.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dclab/errors.hpp"

namespace dclab {

std::string_view to_string(Exactness e) {
  return e == Exactness::exact ? "exact" : "approximate";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Rational parse_fraction(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  std::string_view digits = num;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (!all_digits(digits) || !all_digits(den)) {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  std::string n(num);
  if (!n.empty() && n.front() == '+') n.erase(0, 1);
  Rational q(mpz_class(n, 10), d);
  q.canonicalize();
  return q;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      throw ParseError("malformed exponent in '" + std::string(text) + "'");
    }
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw ParseError("malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Rational q(mpz_class(digits, 10));
  q *= power_of_ten(static_cast<int>(exponent));
  if (negative) q = -q;
  return q;
}

unsigned bit_length(const mpz_class& z) {
  return z == 0 ? 0u : static_cast<unsigned>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty rational");
  if (text.find('/') != std::string_view::npos) return parse_fraction(text);
  return parse_decimal(text);
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational rational_pow(const Rational& base, std::uint64_t exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational power_of_ten(int exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exponent)));
  return exponent >= 0 ? Rational(p) : Rational(mpz_class(1), p);
}

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) {
    return std::nullopt;
  }
  mpz_class num;
  mpz_class den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  return Rational(num, den);
}

std::optional<Rational> exact_fourth_root(const Rational& q) {
  auto s = exact_sqrt(q);
  if (!s) return std::nullopt;
  return exact_sqrt(*s);
}

RootBracket sqrt_bracket(const Rational& q, unsigned bits) {
  if (sgn(q) < 0) throw std::domain_error("sqrt of negative rational");
  mpz_class radicand = q.get_num() * q.get_den();
  radicand <<= 2 * bits;
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), radicand.get_mpz_t());
  mpz_class scale = q.get_den();
  scale <<= bits;
  Rational lower(s, scale);
  Rational upper(s + 1, scale);
  lower.canonicalize();
  upper.canonicalize();
  return {lower, upper};
}

RootBracket fourth_root_bracket(const Rational& q, unsigned bits) {
  if (sgn(q) < 0) throw std::domain_error("fourth root of negative rational");
  const mpz_class& den = q.get_den();
  mpz_class radicand = q.get_num() * den * den * den;
  radicand <<= 4 * bits;
  mpz_class s;
  mpz_root(s.get_mpz_t(), radicand.get_mpz_t(), 4);
  mpz_class scale = den;
  scale <<= bits;
  Rational lower(s, scale);
  Rational upper(s + 1, scale);
  lower.canonicalize();
  upper.canonicalize();
  return {lower, upper};
}

unsigned root_bits_for(const Rational& q, unsigned root_degree) {
  long deficit = static_cast<long>(bit_length(q.get_den())) - static_cast<long>(bit_length(q.get_num()));
  long extra = deficit > 0 ? deficit / static_cast<long>(root_degree) + 2 : 0;
  return 64u + static_cast<unsigned>(extra);
}

ExactComplex::ExactComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  // Rational(p, q) built from two integers is not reduced.
  re_.canonicalize();
  im_.canonicalize();
}

ExactComplex ExactComplex::reciprocal() const {
  Rational m = magnitude_squared(*this);
  if (sgn(m) == 0) throw std::domain_error("reciprocal of zero");
  return {re_ / m, -im_ / m};
}

ExactComplex& ExactComplex::operator+=(const ExactComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ExactComplex& ExactComplex::operator-=(const ExactComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ExactComplex& ExactComplex::operator*=(const ExactComplex& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) {
  if (o.is_real()) {
    if (sgn(o.re_) == 0) throw std::domain_error("division by zero");
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.reciprocal();
}

ExactComplex pow(const ExactComplex& base, std::uint64_t exponent) {
  if (base.is_real()) return {rational_pow(base.re(), exponent)};
  ExactComplex result{1};
  ExactComplex square = base;
  while (exponent != 0) {
    if (exponent & 1u) result *= square;
    exponent >>= 1u;
    if (exponent != 0) square *= square;
  }
  return result;
}

ExactComplex scale(const ExactComplex& z, const Rational& factor) {
  return {z.re() * factor, z.im() * factor};
}

Rational magnitude_squared(const ExactComplex& z) {
  return z.re() * z.re() + z.im() * z.im();
}

std::weak_ordering compare_magnitude(const ExactComplex& a, const ExactComplex& b) {
  int c = cmp(magnitude_squared(a), magnitude_squared(b));
  if (c < 0) return std::weak_ordering::less;
  if (c > 0) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

double to_double(const Rational& q, bool* overflow) {
  mpfr_t x;
  mpfr_init2(x, 53);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  double d = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  if (overflow != nullptr && std::isinf(d)) *overflow = true;
  return d;
}

ApproxComplex to_approx(const ExactComplex& z) {
  ApproxComplex out;
  double re = to_double(z.re(), &out.overflow);
  double im = to_double(z.im(), &out.overflow);
  out.value = {re, im};
  return out;
}

std::string render_decimal(const Rational& q) {
  double d = to_double(q);
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  return std::string(buf.data(), end);
}

namespace {

ExactComplex phase_from_half_angle(const Rational& t) {
  Rational t2 = t * t;
  Rational den = 1 + t2;
  return {(1 - t2) / den, 2 * t / den};
}

}  // namespace

ExactComplex unit_phase_near(const ExactComplex& z) {
  if (z.is_zero()) throw std::domain_error("phase of zero");
  if (z.is_real()) return sgn(z.re()) > 0 ? ExactComplex{1} : ExactComplex{-1};
  Rational ar = abs(z.re());
  Rational ai = abs(z.im());
  Rational m = ar > ai ? ar : ai;
  double a = to_double(z.re() / m);
  double b = to_double(z.im() / m);
  double r = std::hypot(a, b);
  // tan(theta / 2), picking the numerically stable form.
  double t = a >= 0 ? b / (r + a) : (r - a) / b;
  return phase_from_half_angle(Rational(t));
}

ExactComplex unit_phase_from_parameter(const Rational& a) {
  if (a >= 1 || a <= -1) return ExactComplex{-1};
  Rational magnitude = abs(a);
  return phase_from_half_angle(a / (1 - magnitude));
}

DiskScalar::DiskScalar(ExactComplex value) : value_(std::move(value)) {
  if (magnitude_squared(value_) > 1) {
    throw InvariantViolation("", "disk scalar has modulus greater than 1");
  }
}

}  // namespace dclab

namespace dclab {

std::string arithmetic_backends() {
  return std::string("gmp ") + gmp_version + ", mpfr " + mpfr_get_version();
}

}  // namespace dclab
