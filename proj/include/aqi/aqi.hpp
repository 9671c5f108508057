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

// Umbrella header.

#include "aqi/adapters.hpp"
#include "aqi/cost.hpp"
#include "aqi/greedy.hpp"
#include "aqi/harness.hpp"
#include "aqi/instance.hpp"
#include "aqi/io.hpp"
#include "aqi/matching.hpp"
#include "aqi/oracle.hpp"
#include "aqi/rational.hpp"
#include "aqi/reduction.hpp"
#include "aqi/rng.hpp"
#include "aqi/valuation.hpp"
