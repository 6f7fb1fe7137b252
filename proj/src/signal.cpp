#include "sepmetrics/signal.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sepmetrics/errors.hpp"

namespace sepmetrics {

Signal::Signal(std::vector<double> samples, int sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (samples_.empty()) throw EmptySignalError("signal has no samples");
  if (sample_rate_hz_ <= 0) {
    throw InvalidArgumentError("sample rate must be positive, got " +
                               std::to_string(sample_rate_hz_));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw FormatError("non-finite sample at index " + std::to_string(i));
    }
  }
}

void align_lengths(std::vector<double>& a, std::vector<double>& b, LengthPolicy policy) {
  if (a.size() == b.size()) return;
  if (policy == LengthPolicy::kStrict) {
    throw LengthMismatchError("length mismatch: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + " samples");
  }
  const std::size_t n = std::min(a.size(), b.size());
  a.resize(n);
  b.resize(n);
}

std::vector<double> remove_mean(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  if (out.empty()) return out;
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  for (double& v : out) v -= mean;
  return out;
}

}  // namespace sepmetrics
