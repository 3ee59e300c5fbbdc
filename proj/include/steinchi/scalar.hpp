#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

namespace steinchi {

using Rational = boost::multiprecision::mpq_rational;

/// The two scalar fields a computation can run in. A computation never mixes them.
template <class T>
concept Field = std::same_as<T, Rational> || std::same_as<T, double>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

enum class Mode { exact, floating };

template <Field T>
constexpr Mode mode_of() {
  return is_exact_v<T> ? Mode::exact : Mode::floating;
}

std::string_view mode_name(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

template <Field T>
T from_int(std::int64_t v) {
  return T(v);
}

template <Field T>
double to_double(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.template convert_to<double>();
  } else {
    return v;
  }
}

/// Converts between fields. Rational -> double rounds; double -> Rational is exact.
template <Field To, Field From>
To scalar_cast(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (is_exact_v<To>) {
    return Rational(v);
  } else {
    return v.template convert_to<double>();
  }
}

template <Field T>
bool is_zero(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.is_zero();
  } else {
    return v == 0.0;
  }
}

template <Field T>
int sign_of(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.sign();
  } else {
    return (v > 0.0) - (v < 0.0);
  }
}

/// base^exponent by repeated squaring; exact for rationals.
template <Field T>
T ipow(const T& base, unsigned exponent) {
  T result = from_int<T>(1);
  T b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

/// Parses "3", "-1/2", "0.125", "1e-3" exactly.
Rational parse_rational(std::string_view text);
/// Parses a decimal or "p/q" string to the nearest double.
double parse_double(std::string_view text);

template <Field T>
T parse_scalar(std::string_view text) {
  if constexpr (is_exact_v<T>) {
    return parse_rational(text);
  } else {
    return parse_double(text);
  }
}

/// "p/q", or "p" when the denominator is one.
std::string format_rational(const Rational& v);
/// "%.17g" rendering; round-trips every finite double.
std::string format_double(double v);

inline std::string format_scalar(const Rational& v) { return format_rational(v); }
inline std::string format_scalar(double v) { return format_double(v); }

}  // namespace steinchi
