/* Copyright 2026 The eot Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef EOT_RNG_HPP_
#define EOT_RNG_HPP_

#include <cstdint>
#include <random>

namespace eot {

// Portable random stream. The engine sequence of std::mt19937_64 is fixed by
// the standard; doubles are built from the top 53 bits rather than through
// <random> distributions, whose algorithms are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Stream for one (size, trial) cell of an experiment:
  //   key = mix(mix(mix(seed) + size) + trial), mix = splitmix64 finalizer.
  static RngStream derive(std::uint64_t seed, std::uint64_t size, std::uint64_t trial);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace eot

#endif  // EOT_RNG_HPP_
