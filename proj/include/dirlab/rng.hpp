// Copyright 2026 The dirlab Authors
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

#ifndef DIRLAB_RNG_HPP
#define DIRLAB_RNG_HPP

#include <array>
#include <cstdint>
#include <cstddef>

namespace dirlab::rng {

// Counter-based generator (Philox-4x32-10). Every variate is a pure function
// of (seed, stream, index), so sample batches are reproducible bit-for-bit,
// parallelize without shared state, and extending a batch or adding streams
// never perturbs existing draws.

std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t index);

/// Uniform on (0,1], from the (seed, stream, index) counter block.
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Standard normal via Box-Muller on the counter block.
double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Fills out[0..n) with normal(seed, stream, start + i).
void normal_fill(std::uint64_t seed, std::uint64_t stream, std::uint64_t start,
                 double* out, std::size_t n);

}  // namespace dirlab::rng

#endif  // DIRLAB_RNG_HPP
