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

#include <optional>
#include <string>
#include <vector>

#include "aqi/rational.hpp"

namespace aqi {

enum class CostKind { kLinear, kPower, kExponential, kTabulated };

inline const char* to_string(CostKind kind) {
  switch (kind) {
    case CostKind::kLinear: return "linear";
    case CostKind::kPower: return "power";
    case CostKind::kExponential: return "exponential";
    case CostKind::kTabulated: return "tabulated";
  }
  return "?";
}

inline CostKind parse_cost_kind(const std::string& name) {
  if (name == "linear") return CostKind::kLinear;
  if (name == "power") return CostKind::kPower;
  if (name == "exponential") return CostKind::kExponential;
  if (name == "tabulated") return CostKind::kTabulated;
  throw Error(ErrorKind::kParse, "unknown cost kind '" + name + "'");
}

/// A scalar function on the non-negative integers.
///
///   linear       params [slope]          f(x) = slope * x
///   power        params [coef, exponent] f(x) = coef * x^exponent
///   exponential  params [scale, base]    f(x) = scale * (base^x - 1)
///   tabulated    table  [f(0), f(1), ...]
///
/// Tabulated values past the end of the table continue with the last
/// increment, which keeps convex tables convex and concave tables concave.
/// Power exponents must be non-negative integers so that evaluation stays
/// exact.
class CostFamily {
 public:
  CostFamily() : kind_(CostKind::kLinear), params_{Rational(0)} {}

  static CostFamily linear(const Rational& slope) {
    return CostFamily(CostKind::kLinear, {slope}, {});
  }
  static CostFamily power(const Rational& coef, unsigned long exponent) {
    return CostFamily(CostKind::kPower, {coef, Rational(exponent)}, {});
  }
  static CostFamily exponential(const Rational& scale, const Rational& base) {
    return CostFamily(CostKind::kExponential, {scale, base}, {});
  }
  static CostFamily tabulated(std::vector<Rational> table) {
    return CostFamily(CostKind::kTabulated, {}, std::move(table));
  }
  static CostFamily zero() { return linear(Rational(0)); }

  /// Checks parameter shapes; throws kParse on malformed families.
  static CostFamily make(CostKind kind, std::vector<Rational> params,
                         std::vector<Rational> table) {
    return CostFamily(kind, std::move(params), std::move(table));
  }

  CostKind kind() const { return kind_; }
  const std::vector<Rational>& params() const { return params_; }
  const std::vector<Rational>& table() const { return table_; }

  Rational operator()(long x) const {
    if (x < 0) {
      throw Error(ErrorKind::kPrecondition,
                  "cost evaluated at negative argument " + std::to_string(x));
    }
    switch (kind_) {
      case CostKind::kLinear:
        return params_[0] * Rational(x);
      case CostKind::kPower:
        return params_[0] *
               pow_int(Rational(x), params_[1].get_num().get_ui());
      case CostKind::kExponential: {
        Rational grown = pow_int(params_[1], static_cast<unsigned long>(x));
        return params_[0] * (grown - 1);
      }
      case CostKind::kTabulated: {
        const long last = static_cast<long>(table_.size()) - 1;
        if (x <= last) return table_[static_cast<std::size_t>(x)];
        Rational step = last >= 1 ? Rational(table_[last] - table_[last - 1])
                                  : Rational(0);
        return table_[last] + step * Rational(x - last);
      }
    }
    return Rational(0);
  }

  /// f(x + 1) - f(x).
  Rational delta(long x) const { return (*this)(x + 1) - (*this)(x); }

  friend bool operator==(const CostFamily& a, const CostFamily& b) {
    return a.kind_ == b.kind_ && a.params_ == b.params_ &&
           a.table_ == b.table_;
  }

 private:
  CostFamily(CostKind kind, std::vector<Rational> params,
             std::vector<Rational> table)
      : kind_(kind), params_(std::move(params)), table_(std::move(table)) {
    auto bad = [&](const std::string& why) {
      throw Error(ErrorKind::kParse,
                  std::string(to_string(kind_)) + " cost family: " + why);
    };
    switch (kind_) {
      case CostKind::kLinear:
        if (params_.size() != 1) bad("expects params [slope]");
        break;
      case CostKind::kPower:
        if (params_.size() != 2) bad("expects params [coef, exponent]");
        if (!is_integer(params_[1]) || params_[1] < 0)
          bad("exponent must be a non-negative integer");
        break;
      case CostKind::kExponential:
        if (params_.size() != 2) bad("expects params [scale, base]");
        if (params_[1] <= 0) bad("base must be positive");
        break;
      case CostKind::kTabulated:
        if (table_.empty()) bad("table must not be empty");
        if (!params_.empty()) bad("takes a table, not params");
        break;
    }
    if (kind_ != CostKind::kTabulated && !table_.empty())
      bad("only tabulated families take a table");
  }

  CostKind kind_;
  std::vector<Rational> params_;
  std::vector<Rational> table_;
};

/// First index i in [1, upto-1] where the increments of f grow
/// (f(i+1) - f(i) > f(i) - f(i-1)), i.e. where concavity breaks.
inline std::optional<long> first_concavity_break(const CostFamily& f,
                                                 long upto) {
  for (long i = 1; i < upto; ++i) {
    if (f.delta(i) > f.delta(i - 1)) return i;
  }
  return std::nullopt;
}

/// First index where second differences go negative.
inline std::optional<long> first_convexity_break(const CostFamily& f,
                                                 long upto) {
  for (long i = 1; i < upto; ++i) {
    if (f.delta(i) < f.delta(i - 1)) return i;
  }
  return std::nullopt;
}

/// First x in [0, upto-1] with f(x+1) < f(x).
inline std::optional<long> first_decrease(const CostFamily& f, long upto) {
  for (long x = 0; x < upto; ++x) {
    if (f.delta(x) < 0) return x + 1;
  }
  return std::nullopt;
}

}  // namespace aqi
