// Copyright 2026 The Orthochain Authors.
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

#ifndef ORTHOCHAIN_RNG_H_
#define ORTHOCHAIN_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace orthochain {

// Counter-based Philox4x32-10 generator. The (seed, stream) pair selects an
// independent sequence, so path i of a Monte Carlo run draws the same numbers
// no matter which worker thread executes it.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  // One raw 10-round block; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> Block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

 private:
  void Refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

// Stream tags keep unrelated consumers of one user seed apart.
enum class StreamDomain : std::uint64_t {
  kMeasureDraw = 1,
  kPaths = 2,
  kRestart = 3,
  kSkeleton = 4,
  kTest = 15,
};

Philox4x32 MakeStream(std::uint64_t seed, StreamDomain domain,
                      std::uint64_t index);

// Static contiguous chunking over [0, n). Results must be written by index so
// the outcome does not depend on `workers`.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& body);

}  // namespace orthochain

#endif  // ORTHOCHAIN_RNG_H_
