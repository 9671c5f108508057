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

// Seeded randomness for generators. Bounded draws use rejection on the raw
// 64-bit engine output so instances do not depend on the standard library's
// distribution implementations.

#include <cstdint>
#include <random>

#include "aqi/rational.hpp"

namespace aqi {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  long uniform(long lo, long hi) {
    if (hi < lo) throw Error(ErrorKind::kPrecondition, "empty random range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
  }

  /// True with probability num/den.
  bool chance(long num, long den) { return uniform(0, den - 1) < num; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aqi
