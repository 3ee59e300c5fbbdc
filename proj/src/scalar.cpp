#include "steinchi/scalar.hpp"

#include "steinchi/error.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace steinchi {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptySpec: return "EmptySpec";
    case Errc::InvalidWeight: return "InvalidWeight";
    case Errc::InvalidDof: return "InvalidDof";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::BadIndex: return "BadIndex";
    case Errc::BadOrder: return "BadOrder";
    case Errc::BadCount: return "BadCount";
    case Errc::ModeUnsupported: return "ModeUnsupported";
    case Errc::NotIntegrable: return "NotIntegrable";
    case Errc::ParseError: return "ParseError";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::TheoremViolation: return "TheoremViolation";
    case Errc::LemmaViolation: return "LemmaViolation";
  }
  return "Unknown";
}

std::string_view mode_name(Mode mode) noexcept {
  return mode == Mode::exact ? "exact" : "float";
}

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::exact;
  if (text == "float") return Mode::floating;
  throw Error(Errc::ParseError, "unknown mode '" + std::string(text) + "' (expected exact|float)");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_scalar(std::string_view text) {
  throw Error(Errc::ParseError, "malformed scalar '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

using boost::multiprecision::mpz_int;

mpz_int pow10(long e) {
  mpz_int r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

// [+-]digits[.digits][(e|E)[+-]digits]
Rational parse_decimal(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) bad_scalar(original);
    std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) bad_scalar(original);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
      bad_scalar(original);
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) bad_scalar(original);
    digits = std::string(s);
  }
  // mpz parses a leading zero as an octal prefix.
  const auto nonzero = digits.find_first_not_of('0');
  digits = nonzero == std::string::npos ? "0" : digits.substr(nonzero);
  mpz_int mantissa(digits);
  Rational value = exponent >= 0 ? Rational(mantissa * pow10(exponent))
                                 : Rational(mantissa, pow10(-exponent));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) bad_scalar(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = trim(s.substr(0, slash));
    std::string_view den = trim(s.substr(slash + 1));
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
      num_digits.remove_prefix(1);
    if (!all_digits(num_digits) || !all_digits(den)) bad_scalar(text);
    auto strip = [](std::string_view v) {
      const auto nz = v.find_first_not_of('0');
      return nz == std::string_view::npos ? std::string("0") : std::string(v.substr(nz));
    };
    mpz_int d(strip(den));
    if (d == 0) throw Error(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
    mpz_int n(strip(num_digits));
    if (!num.empty() && num.front() == '-') n = -n;
    return Rational(n, d);
  }
  return parse_decimal(s, text);
}

double parse_double(std::string_view text) {
  std::string_view s = trim(text);
  if (s.find('/') != std::string_view::npos) {
    return parse_rational(s).convert_to<double>();
  }
  std::string buf(s);
  if (buf.empty()) bad_scalar(text);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) bad_scalar(text);
  return v;
}

std::string format_rational(const Rational& v) {
  const auto num = boost::multiprecision::numerator(v);
  const auto den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace steinchi
