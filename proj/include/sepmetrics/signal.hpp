#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sepmetrics {

/// Mono sample buffer, full scale +-1.0, 64-bit samples.
///
/// Construction validates the buffer: at least one sample, every sample
/// finite and a positive sample rate.
class Signal {
 public:
  Signal(std::vector<double> samples, int sample_rate_hz);

  [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
  [[nodiscard]] const std::vector<double>& vec() const noexcept { return samples_; }
  [[nodiscard]] int sample_rate_hz() const noexcept { return sample_rate_hz_; }
  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }

  double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
  int sample_rate_hz_;
};

enum class LengthPolicy { kStrict, kTruncate };

/// Brings two buffers to a common length. kStrict throws
/// LengthMismatchError on any difference; kTruncate cuts the longer one.
void align_lengths(std::vector<double>& a, std::vector<double>& b, LengthPolicy policy);

/// Subtracts the arithmetic mean. Opt-in: metrics never center on their own.
[[nodiscard]] std::vector<double> remove_mean(std::span<const double> x);

}  // namespace sepmetrics
