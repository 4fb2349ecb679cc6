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

#include "orthochain/rng.h"

#include <algorithm>
#include <thread>
#include <vector>

namespace orthochain {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t* lo,
                    std::uint32_t* hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  *lo = static_cast<std::uint32_t>(p);
  *hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0, 0, static_cast<std::uint32_t>(stream),
           static_cast<std::uint32_t>(stream >> 32)} {}

std::array<std::uint32_t, 4> Philox4x32::Block(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    MulHiLo(kPhiloxM0, ctr[0], &lo0, &hi0);
    MulHiLo(kPhiloxM1, ctr[2], &lo1, &hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

void Philox4x32::Refill() {
  buf_ = Block(ctr_, key_);
  if (++ctr_[0] == 0) ++ctr_[1];
  pos_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (pos_ >= 4) Refill();
  const std::uint64_t lo = buf_[pos_];
  const std::uint64_t hi = buf_[pos_ + 1];
  pos_ += 2;
  return lo | (hi << 32);
}

Philox4x32 MakeStream(std::uint64_t seed, StreamDomain domain,
                      std::uint64_t index) {
  return Philox4x32(seed, (static_cast<std::uint64_t>(domain) << 56) ^ index);
}

void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& body) {
  const std::size_t w =
      std::clamp<std::size_t>(workers < 1 ? 1 : workers, 1, std::max<std::size_t>(n, 1));
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace orthochain
