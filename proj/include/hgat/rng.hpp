#pragma once

#include <cstdint>
#include <string_view>

namespace hgat {

// Deterministic splittable generator. Every random quantity in the project
// derives from one 64-bit seed through this class; std:: distributions are
// avoided because their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller on explicit uniforms.
  double normal();
  double normal(double mean, double stddev);

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Child stream keyed by label; independent of this stream's draw position.
  Rng split(std::string_view label) const;
  Rng split(std::string_view label, std::uint64_t salt) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// FNV-1a 64-bit hash; also used for file digests and graph fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace hgat
