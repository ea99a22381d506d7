// Copyright 2026 The navqt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NAVQT_RNG_HPP
#define NAVQT_RNG_HPP

#include <cstdint>
#include <random>

namespace navqt {

// std::mt19937_64 is fully specified by the standard, so its raw output is
// identical on every platform. The distribution adaptors in <random> are not,
// which is why the conversions below are spelled out.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent sub-stream:
/// splitmix64(splitmix64(base) ^ stream * 0xD1B54A32D192ED03). Not symmetric in its arguments.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(Engine& engine);

double uniform(Engine& engine, double lo, double hi);

/// Standard normal via Box-Muller; consumes exactly two engine draws.
double standard_normal(Engine& engine);

}  // namespace navqt

#endif  // NAVQT_RNG_HPP
