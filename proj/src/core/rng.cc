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

#include "imitation/core/rng.h"

#include <cmath>
#include <numbers>

namespace imitation {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t DeriveKey(std::uint64_t parent, std::string_view role,
                        std::uint64_t index) {
  std::uint64_t k = Mix(parent + kGolden);
  k = Mix(k ^ StableHash(role));
  return Mix(k + (index + 1) * kGolden);
}

}  // namespace

std::uint64_t StableHash(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) : key_(Mix(seed ^ 0x5851F42D4C957F2DULL)) {}

Rng::Rng(std::uint64_t seed, std::string_view role, std::uint64_t index)
    : key_(DeriveKey(Mix(seed ^ 0x5851F42D4C957F2DULL), role, index)) {}

Rng Rng::Split(std::string_view role, std::uint64_t index) const {
  Rng child(0);
  child.key_ = DeriveKey(key_, role, index);
  return child;
}

std::uint64_t Rng::NextBits() {
  ++counter_;
  return Mix(key_ + counter_ * kGolden);
}

double Rng::Uniform() {
  return static_cast<double>(NextBits() >> 11) * 0x1.0p-53;
}

double Rng::UniformOpen() {
  return (static_cast<double>(NextBits() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

std::uint64_t Rng::UniformInt(std::uint64_t n) {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t r;
  do {
    r = NextBits();
  } while (r >= limit);
  return r % n;
}

double Rng::Normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = UniformOpen();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

double Rng::Normal(double mean, double stddev) {
  return mean + stddev * Normal();
}

double Rng::Laplace(double scale) {
  // Inverse CDF on a symmetric open interval.
  const double u = UniformOpen() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -magnitude : magnitude;
}

double Rng::Sign() { return (NextBits() >> 63) != 0 ? 1.0 : -1.0; }

}  // namespace imitation
