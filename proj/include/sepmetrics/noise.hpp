#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace sepmetrics::dsp {

/// Seeded standard-normal generator.
///
/// Uniforms come from std::mt19937_64 (its output sequence is fixed by the
/// C++ standard) using the top 53 bits of each draw; normals come from the
/// Marsaglia polar method. std::normal_distribution is avoided because its
/// algorithm is implementation-defined.
class GaussianNoise {
 public:
  explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}

  double operator()();
  /// Uniform on [0, 1).
  double uniform();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Zero-mean, unit-variance white Gaussian noise, deterministic per seed.
[[nodiscard]] std::vector<double> white_noise(std::size_t length, std::uint64_t seed);

}  // namespace sepmetrics::dsp
