#include "sepmetrics/stft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sepmetrics/errors.hpp"
#include "sepmetrics/fft.hpp"

namespace sepmetrics::dsp {
namespace {

// Weight of bin f in the one-sided Parseval sum of an even-length frame.
double onesided_weight(std::size_t f, std::size_t fft_size) {
  return (f == 0 || 2 * f == fft_size) ? 1.0 : 2.0;
}

}  // namespace

StftConfig::StftConfig(std::size_t window_len, std::size_t hop) : window_len_(window_len), hop_(hop) {
  if (window_len_ < 2 || window_len_ % 2 != 0) {
    throw InvalidArgumentError("window_len must be even and >= 2, got " + std::to_string(window_len_));
  }
  if (hop_ == 0 || window_len_ % hop_ != 0 || window_len_ / hop_ < 2) {
    throw InvalidArgumentError("hop must divide window_len with at least 2x overlap (window_len " +
                               std::to_string(window_len_) + ", hop " + std::to_string(hop_) + ")");
  }
  window_.resize(window_len_);
  for (std::size_t k = 0; k < window_len_; ++k) {
    // sqrt(0.5 - 0.5 cos(2 pi k / N)) == sin(pi k / N)
    window_[k] = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(window_len_));
  }
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t k = 0; k < hop_; ++k) {
    double sum = 0.0;
    for (std::size_t m = k; m < window_len_; m += hop_) sum += window_[m] * window_[m];
    lo = k == 0 ? sum : std::min(lo, sum);
    hi = k == 0 ? sum : std::max(hi, sum);
  }
  if (hi - lo > 1e-10 * hi) {
    throw InvalidArgumentError("window/hop pair does not satisfy constant overlap-add");
  }
  ola_gain_ = 0.5 * (lo + hi);
}

std::size_t StftConfig::frame_count(std::size_t signal_len) const noexcept {
  return (signal_len + pad() + hop_ - 1) / hop_;
}

Spectrogram::Spectrogram(StftConfig cfg, std::size_t frames, std::size_t original_len)
    : cfg_(std::move(cfg)), frames_(frames), original_len_(original_len),
      data_(frames * cfg_.bins()) {}

std::span<std::complex<double>> Spectrogram::frame(std::size_t t) {
  return std::span(data_).subspan(t * bins(), bins());
}

std::span<const std::complex<double>> Spectrogram::frame(std::size_t t) const {
  return std::span(data_).subspan(t * bins(), bins());
}

MaskVector::MaskVector(std::vector<double> gains) : gains_(std::move(gains)) {
  if (gains_.empty()) throw InvalidArgumentError("mask has no bins");
  for (std::size_t f = 0; f < gains_.size(); ++f) {
    if (!(gains_[f] >= 0.0 && gains_[f] <= 1.0)) {
      throw InvalidArgumentError("mask gain at bin " + std::to_string(f) + " outside [0, 1]");
    }
  }
}

Spectrogram stft(std::span<const double> signal, const StftConfig& cfg) {
  const std::size_t n = cfg.window_len();
  if (signal.size() < n) {
    throw SignalTooShortError("signal has " + std::to_string(signal.size()) +
                              " samples, STFT window needs " + std::to_string(n));
  }
  const std::size_t frames = cfg.frame_count(signal.size());
  std::vector<double> padded((frames - 1) * cfg.hop() + n, 0.0);
  std::copy(signal.begin(), signal.end(), padded.begin() + static_cast<std::ptrdiff_t>(cfg.pad()));

  Spectrogram spec(cfg, frames, signal.size());
  const RealFft fft(n);
  const auto window = cfg.window();
  std::vector<double> buf(n);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = padded.data() + t * cfg.hop();
    for (std::size_t k = 0; k < n; ++k) buf[k] = window[k] * src[k];
    fft.forward(buf, spec.frame(t));
  }
  return spec;
}

std::vector<double> istft(const Spectrogram& spec) {
  const StftConfig& cfg = spec.config();
  const std::size_t n = cfg.window_len();
  std::vector<double> acc((spec.frames() - 1) * cfg.hop() + n, 0.0);
  const RealFft fft(n);
  const auto window = cfg.window();
  std::vector<double> buf(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    fft.inverse(spec.frame(t), buf);
    double* dst = acc.data() + t * cfg.hop();
    for (std::size_t k = 0; k < n; ++k) dst[k] += window[k] * buf[k] * scale;
  }
  std::vector<double> out(spec.original_len());
  const double gain = 1.0 / cfg.ola_gain();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[cfg.pad() + i] * gain;
  return out;
}

Spectrogram istft_adjoint(std::span<const double> gradient, const StftConfig& cfg,
                          std::size_t frames) {
  const std::size_t n = cfg.window_len();
  std::vector<double> padded((frames - 1) * cfg.hop() + n, 0.0);
  if (cfg.pad() + gradient.size() > padded.size()) {
    throw LengthMismatchError("gradient longer than the spectrogram covers");
  }
  const double gain = 1.0 / cfg.ola_gain();
  for (std::size_t i = 0; i < gradient.size(); ++i) padded[cfg.pad() + i] = gradient[i] * gain;

  Spectrogram adj(cfg, frames, gradient.size());
  const RealFft fft(n);
  const auto window = cfg.window();
  std::vector<double> buf(n);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = padded.data() + t * cfg.hop();
    for (std::size_t k = 0; k < n; ++k) buf[k] = window[k] * src[k];
    auto out = adj.frame(t);
    fft.forward(buf, out);
    for (std::size_t f = 0; f < out.size(); ++f) out[f] *= onesided_weight(f, n) / static_cast<double>(n);
  }
  return adj;
}

Spectrogram apply_mask(const Spectrogram& spec, const MaskVector& mask) {
  if (mask.size() != spec.bins()) {
    throw LengthMismatchError("mask has " + std::to_string(mask.size()) + " bins, spectrogram has " +
                              std::to_string(spec.bins()));
  }
  Spectrogram out = spec;
  for (std::size_t t = 0; t < out.frames(); ++t) {
    auto frame = out.frame(t);
    for (std::size_t f = 0; f < frame.size(); ++f) frame[f] *= mask[f];
  }
  return out;
}

double spectrogram_energy(const Spectrogram& spec) {
  const std::size_t n = spec.config().fft_size();
  double total = 0.0;
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    const auto frame = spec.frame(t);
    for (std::size_t f = 0; f < frame.size(); ++f) total += onesided_weight(f, n) * std::norm(frame[f]);
  }
  return total / (static_cast<double>(n) * spec.config().ola_gain());
}

std::vector<double> mean_bin_energy(const Spectrogram& spec) {
  std::vector<double> out(spec.bins(), 0.0);
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    const auto frame = spec.frame(t);
    for (std::size_t f = 0; f < frame.size(); ++f) out[f] += std::norm(frame[f]);
  }
  for (double& v : out) v /= static_cast<double>(spec.frames());
  return out;
}

std::vector<double> mean_bin_magnitude(const Spectrogram& spec) {
  std::vector<double> out(spec.bins(), 0.0);
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    const auto frame = spec.frame(t);
    for (std::size_t f = 0; f < frame.size(); ++f) out[f] += std::abs(frame[f]);
  }
  for (double& v : out) v /= static_cast<double>(spec.frames());
  return out;
}

}  // namespace sepmetrics::dsp
