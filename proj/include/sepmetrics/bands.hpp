#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sepmetrics/stft.hpp"

namespace sepmetrics::dsp {

/// Half-open bin range [begin, end).
struct BinRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
  bool operator==(const BinRange&) const = default;
};

struct Mixture {
  std::vector<double> mixture;
  std::vector<double> scaled_noise;
  double noise_gain = 0.0;
};

/// Scales `noise` so that clean-to-noise energy equals snr_db, either over
/// the whole signal or, when a band is given, over that STFT bin range.
[[nodiscard]] Mixture mix_at_snr(std::span<const double> clean, std::span<const double> noise,
                                 double snr_db, std::optional<BinRange> band = std::nullopt,
                                 const StftConfig& cfg = StftConfig{});

/// Energy of the STFT frames restricted to a bin range.
[[nodiscard]] double band_energy(const Spectrogram& spec, BinRange band);

enum class BandCenterMode { kMedianEnergy, kMaxMagnitude };

/// kMedianEnergy: smallest bin whose cumulative time-averaged energy reaches
/// half the total. kMaxMagnitude: argmax of the time-averaged magnitude,
/// smallest index on ties. Throws ZeroReferenceError on an all-zero input.
[[nodiscard]] std::size_t band_center(const Spectrogram& spec, BandCenterMode mode);

enum class BandKind { kBandpass, kBandstop };

/// Bins [center - width/2, center + width/2] clipped to [0, bins).
[[nodiscard]] BinRange centered_band(std::size_t center, std::size_t width_bins,
                                     std::size_t bins);

/// Bandpass: 1 inside the band, 0 outside. Bandstop: stop_gain inside, 1
/// outside.
[[nodiscard]] MaskVector band_mask(std::size_t center, std::size_t width_bins, BandKind kind,
                                   double stop_gain, std::size_t bins);

/// Hz bandwidth to a bin count, rounded to the nearest odd count so the band
/// is symmetric about its center bin.
[[nodiscard]] std::size_t bandwidth_to_bins(double bandwidth_hz, int sample_rate_hz,
                                            std::size_t fft_size);

/// `count` contiguous bins around `center`. When the band would cross a
/// spectrum edge it is shifted inward so exactly `count` bins are kept. For
/// even counts the extra bin goes above the center.
[[nodiscard]] BinRange contiguous_band(std::size_t center, std::size_t count, std::size_t bins);

}  // namespace sepmetrics::dsp
