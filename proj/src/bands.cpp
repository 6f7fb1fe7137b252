#include "sepmetrics/bands.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "sepmetrics/errors.hpp"

namespace sepmetrics::dsp {

double band_energy(const Spectrogram& spec, BinRange band) {
  const std::size_t n = spec.config().fft_size();
  if (band.end > spec.bins() || band.begin > band.end) {
    throw InvalidArgumentError("bin range [" + std::to_string(band.begin) + ", " +
                               std::to_string(band.end) + ") outside the spectrum");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    const auto frame = spec.frame(t);
    for (std::size_t f = band.begin; f < band.end; ++f) {
      const double w = (f == 0 || 2 * f == n) ? 1.0 : 2.0;
      total += w * std::norm(frame[f]);
    }
  }
  return total / (static_cast<double>(n) * spec.config().ola_gain());
}

Mixture mix_at_snr(std::span<const double> clean, std::span<const double> noise, double snr_db,
                   std::optional<BinRange> band, const StftConfig& cfg) {
  if (clean.size() != noise.size()) {
    throw LengthMismatchError("clean has " + std::to_string(clean.size()) + " samples, noise has " +
                              std::to_string(noise.size()));
  }
  double clean_energy = 0.0;
  double noise_energy = 0.0;
  if (band) {
    clean_energy = band_energy(stft(clean, cfg), *band);
    noise_energy = band_energy(stft(noise, cfg), *band);
  } else {
    for (double v : clean) clean_energy += v * v;
    for (double v : noise) noise_energy += v * v;
  }
  if (!(clean_energy > 0.0)) throw ZeroReferenceError("clean signal has no energy in the measured band");
  if (!(noise_energy > 0.0)) throw InvalidArgumentError("noise has no energy in the measured band");

  Mixture out;
  out.noise_gain = std::sqrt(clean_energy / (noise_energy * std::pow(10.0, snr_db / 10.0)));
  out.scaled_noise.resize(noise.size());
  out.mixture.resize(noise.size());
  for (std::size_t i = 0; i < noise.size(); ++i) {
    out.scaled_noise[i] = out.noise_gain * noise[i];
    out.mixture[i] = clean[i] + out.scaled_noise[i];
  }
  return out;
}

std::size_t band_center(const Spectrogram& spec, BandCenterMode mode) {
  if (mode == BandCenterMode::kMaxMagnitude) {
    const std::vector<double> mag = mean_bin_magnitude(spec);
    std::size_t best = 0;
    for (std::size_t f = 1; f < mag.size(); ++f)
      if (mag[f] > mag[best]) best = f;
    if (!(mag[best] > 0.0)) throw ZeroReferenceError("spectrogram is all zeros");
    return best;
  }
  const std::vector<double> energy = mean_bin_energy(spec);
  double total = 0.0;
  for (double e : energy) total += e;
  if (!(total > 0.0)) throw ZeroReferenceError("spectrogram is all zeros");
  double cumulative = 0.0;
  for (std::size_t f = 0; f < energy.size(); ++f) {
    cumulative += energy[f];
    if (cumulative >= 0.5 * total) return f;
  }
  return energy.size() - 1;
}

BinRange centered_band(std::size_t center, std::size_t width_bins, std::size_t bins) {
  if (center >= bins) {
    throw InvalidArgumentError("band center " + std::to_string(center) + " outside " +
                               std::to_string(bins) + " bins");
  }
  const std::size_t half = width_bins / 2;
  return {center > half ? center - half : 0, std::min(center + half + 1, bins)};
}

MaskVector band_mask(std::size_t center, std::size_t width_bins, BandKind kind, double stop_gain,
                     std::size_t bins) {
  if (!(stop_gain >= 0.0 && stop_gain <= 1.0)) throw InvalidArgumentError("stop gain outside [0, 1]");
  const BinRange band = centered_band(center, width_bins, bins);
  const double inside = kind == BandKind::kBandpass ? 1.0 : stop_gain;
  const double outside = kind == BandKind::kBandpass ? 0.0 : 1.0;
  std::vector<double> gains(bins, outside);
  for (std::size_t f = band.begin; f < band.end; ++f) gains[f] = inside;
  return MaskVector(std::move(gains));
}

std::size_t bandwidth_to_bins(double bandwidth_hz, int sample_rate_hz, std::size_t fft_size) {
  if (!(bandwidth_hz > 0.0) || sample_rate_hz <= 0 || fft_size == 0) {
    throw InvalidArgumentError("bandwidth, sample rate and FFT size must be positive");
  }
  const double bins = bandwidth_hz * static_cast<double>(fft_size) / static_cast<double>(sample_rate_hz);
  const double odd = 2.0 * std::round((bins - 1.0) / 2.0) + 1.0;
  return odd < 1.0 ? 1 : static_cast<std::size_t>(odd);
}

BinRange contiguous_band(std::size_t center, std::size_t count, std::size_t bins) {
  if (center >= bins) {
    throw InvalidArgumentError("band center " + std::to_string(center) + " outside " +
                               std::to_string(bins) + " bins");
  }
  if (count > bins) throw InvalidArgumentError("cannot keep more bins than the spectrum has");
  if (count == 0) return {center, center};
  const std::size_t below = (count - 1) / 2;
  std::size_t begin = center >= below ? center - below : 0;
  if (begin + count > bins) begin = bins - count;
  return {begin, begin + count};
}

}  // namespace sepmetrics::dsp
