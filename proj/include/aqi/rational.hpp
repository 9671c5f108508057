// Copyright 2026 The AQI Scheduling Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aqi {

/// Exact arbitrary-precision rational used for every value in the library.
/// Floating point only appears when a report asks for it via to_double().
using Rational = mpq_class;

enum class ErrorKind {
  kParse,
  kValidation,
  kPrecondition,
  kStructural,
  kSequencing,
  kInfeasible,
  kBudget,
  kLookup,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kPrecondition: return "precondition error";
    case ErrorKind::kStructural: return "structural error";
    case ErrorKind::kSequencing: return "sequencing error";
    case ErrorKind::kInfeasible: return "infeasible error";
    case ErrorKind::kBudget: return "budget error";
    case ErrorKind::kLookup: return "lookup error";
  }
  return "error";
}

/// Single exception type for the library; kind() tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// "p/q" for non-integers, plain "p" otherwise.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// base^exponent, exact.
inline Rational pow_int(const Rational& base, unsigned long exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

/// Parses "7", "-3/4", "0.125", "1e-2" exactly. Decimal text is read as a
/// decimal fraction, never through binary floating point.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational {
    throw Error(ErrorKind::kParse, "not a rational number: '" + s + "'");
  };
  if (s.empty()) return fail();
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0) return fail();
    r.canonicalize();
    return r;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return fail();
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') return fail();
    ++pos;
    try {
      std::size_t used = 0;
      exponent = std::stol(s.substr(pos), &used);
      if (pos + used != s.size()) return fail();
    } catch (const std::logic_error&) {
      return fail();
    }
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exponent - scale;
  Rational out(num);
  if (shift > 0) {
    out *= pow_int(Rational(10), static_cast<unsigned long>(shift));
  } else if (shift < 0) {
    out /= pow_int(Rational(10), static_cast<unsigned long>(-shift));
  }
  out.canonicalize();
  return out;
}

}  // namespace aqi
