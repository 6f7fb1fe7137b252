#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sepmetrics::dsp {

/// Real-input FFT of a fixed size backed by FFTW.
///
/// Plans are created with FFTW_ESTIMATE (deterministic) and cached per size
/// behind a mutex; execution uses the new-array interface and is safe from
/// any number of threads.
class RealFft {
 public:
  explicit RealFft(std::size_t size);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] std::size_t bins() const noexcept { return size_ / 2 + 1; }

  /// Unnormalized forward transform; `in` has size() samples, `out` bins().
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

  /// Unnormalized inverse transform (no 1/N); imaginary parts of the DC and
  /// Nyquist bins are ignored. `in` has bins() values, `out` size() samples.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  std::size_t size_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Smallest size >= n of the form 2^a 3^b 5^c.
[[nodiscard]] std::size_t good_fft_size(std::size_t n);

/// Linear (zero-padded) cross-correlation r[k] = sum_t a[t + k] * b[t] for
/// lags k in [0, max_lag), computed through one FFT product.
[[nodiscard]] std::vector<double> cross_correlation(std::span<const double> a,
                                                    std::span<const double> b,
                                                    std::size_t max_lag);

/// Linear convolution of x with h, truncated to `length` samples.
[[nodiscard]] std::vector<double> fft_convolve(std::span<const double> x,
                                               std::span<const double> h, std::size_t length);

}  // namespace sepmetrics::dsp
