#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sepmetrics/signal.hpp"

namespace sepmetrics::dsp {

/// Square-root periodic Hann analysis/synthesis window with fft_size equal to
/// window_len. The hop must divide window_len and the squared window must
/// overlap-add to a constant; both are checked on construction.
class StftConfig {
 public:
  explicit StftConfig(std::size_t window_len = 512, std::size_t hop = 128);

  [[nodiscard]] std::size_t window_len() const noexcept { return window_len_; }
  [[nodiscard]] std::size_t hop() const noexcept { return hop_; }
  [[nodiscard]] std::size_t fft_size() const noexcept { return window_len_; }
  [[nodiscard]] std::size_t bins() const noexcept { return window_len_ / 2 + 1; }
  /// Zeros added at each end of the signal before framing.
  [[nodiscard]] std::size_t pad() const noexcept { return window_len_ - hop_; }
  [[nodiscard]] std::span<const double> window() const noexcept { return window_; }
  /// Overlap-add sum of the squared window (constant by construction).
  [[nodiscard]] double ola_gain() const noexcept { return ola_gain_; }
  [[nodiscard]] std::size_t frame_count(std::size_t signal_len) const noexcept;

  bool operator==(const StftConfig& other) const noexcept {
    return window_len_ == other.window_len_ && hop_ == other.hop_;
  }

 private:
  std::size_t window_len_;
  std::size_t hop_;
  std::vector<double> window_;
  double ola_gain_ = 0.0;
};

/// T x F complex frames, row-major by frame.
class Spectrogram {
 public:
  Spectrogram(StftConfig cfg, std::size_t frames, std::size_t original_len);

  [[nodiscard]] const StftConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] std::size_t frames() const noexcept { return frames_; }
  [[nodiscard]] std::size_t bins() const noexcept { return cfg_.bins(); }
  [[nodiscard]] std::size_t original_len() const noexcept { return original_len_; }

  [[nodiscard]] std::span<std::complex<double>> frame(std::size_t t);
  [[nodiscard]] std::span<const std::complex<double>> frame(std::size_t t) const;
  std::complex<double>& at(std::size_t t, std::size_t f) { return data_[t * bins() + f]; }
  const std::complex<double>& at(std::size_t t, std::size_t f) const { return data_[t * bins() + f]; }
  [[nodiscard]] std::span<const std::complex<double>> data() const noexcept { return data_; }

 private:
  StftConfig cfg_;
  std::size_t frames_;
  std::size_t original_len_;
  std::vector<std::complex<double>> data_;
};

/// Per-bin real gain in [0, 1], applied identically to every frame.
class MaskVector {
 public:
  explicit MaskVector(std::vector<double> gains);
  static MaskVector ones(std::size_t bins) { return MaskVector(std::vector<double>(bins, 1.0)); }

  [[nodiscard]] std::span<const double> gains() const noexcept { return gains_; }
  [[nodiscard]] std::size_t size() const noexcept { return gains_.size(); }
  double operator[](std::size_t f) const { return gains_[f]; }

 private:
  std::vector<double> gains_;
};

/// Frames the signal after padding pad() zeros in front and at least pad()
/// zeros behind; T = ceil((L + pad) / hop). Throws SignalTooShortError when
/// L < window_len.
[[nodiscard]] Spectrogram stft(std::span<const double> signal, const StftConfig& cfg);

/// Windowed overlap-add divided by the constant OLA gain, trimmed to
/// original_len.
[[nodiscard]] std::vector<double> istft(const Spectrogram& spec);

/// Adjoint of istft with respect to the real inner product on the time
/// signal: returns G such that <g, istft(Z)> = sum_{t,f} Re(Z[t,f] conj(G[t,f]))
/// for every spectrogram Z of the same shape.
[[nodiscard]] Spectrogram istft_adjoint(std::span<const double> gradient,
                                        const StftConfig& cfg, std::size_t frames);

[[nodiscard]] Spectrogram apply_mask(const Spectrogram& spec, const MaskVector& mask);

/// Signal energy recovered from the frames via Parseval and the OLA gain.
[[nodiscard]] double spectrogram_energy(const Spectrogram& spec);

/// Time-averaged power per bin: mean over frames of |X[t, f]|^2.
[[nodiscard]] std::vector<double> mean_bin_energy(const Spectrogram& spec);
/// Time-averaged magnitude per bin.
[[nodiscard]] std::vector<double> mean_bin_magnitude(const Spectrogram& spec);

}  // namespace sepmetrics::dsp
