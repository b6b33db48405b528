// Copyright 2026 The imitation_workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IMITATION_CORE_RNG_H_
#define IMITATION_CORE_RNG_H_

#include <cstdint>
#include <limits>
#include <string_view>

namespace imitation {

// Counter-based, splittable random stream.
//
// A stream is identified by a 64-bit key derived from (seed, role, index).
// The i-th output is a pure function of (key, i), so streams for different
// trial indices can be consumed on different threads in any order and still
// produce bit-identical results. Child streams are derived with Split().
//
// Distribution sampling is implemented here instead of via <random>
// distributions because the latter are implementation-defined and would
// break cross-toolchain replay of reports.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::string_view role, std::uint64_t index);

  // Independent child stream keyed by (this stream's key, role, index).
  Rng Split(std::string_view role, std::uint64_t index = 0) const;

  std::uint64_t key() const { return key_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextBits(); }

  std::uint64_t NextBits();
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform on (0, 1); never returns 0.
  double UniformOpen();
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);
  double Normal();
  double Normal(double mean, double stddev);
  // Zero-mean Laplace with the given scale.
  double Laplace(double scale);
  // +1 or -1 with equal probability.
  double Sign();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Stable 64-bit hash of a byte string (FNV-1a). Used for role names and
// config fingerprints.
std::uint64_t StableHash(std::string_view bytes);

}  // namespace imitation

#endif  // IMITATION_CORE_RNG_H_
