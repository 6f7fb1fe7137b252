#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sepmetrics/stft.hpp"

namespace sepmetrics::adversary {

struct AdversaryConfig {
  std::size_t iterations = 500;
  double step_size = 0.5;
  double momentum = 0.9;
  /// Gradients with a larger l2 norm are rescaled to this norm before the
  /// momentum update. The dB loss is singular at the all-pass start point.
  double max_grad_norm = 1.0;
  /// Seeds the symmetry-breaking dither used while the masked signal is still
  /// a perfect reconstruction (the dB loss has no defined gradient there).
  std::uint64_t seed = 0;
  std::size_t legacy_taps = 512;
  dsp::StftConfig stft{};
};

struct AdversaryResult {
  std::vector<double> weights;
  dsp::MaskVector mask{std::vector<double>{1.0}};
  /// SI-SDR (dB) of the masked signal before each update and after the last:
  /// iterations + 1 entries.
  std::vector<double> trajectory;
  std::vector<double> masked_signal;
  double final_si_sdr_db = 0.0;
  double final_legacy_sdr_db = 0.0;
};

/// v = logistic(w), m = v / max(v).
[[nodiscard]] dsp::MaskVector mask_from_weights(std::span<const double> weights);

/// Time-invariant masking of one clean signal, with the SI-SDR of the masked
/// result as a differentiable function of the mask weights. The clean STFT is
/// computed once.
class MaskingProblem {
 public:
  MaskingProblem(std::span<const double> clean, const dsp::StftConfig& cfg);

  [[nodiscard]] std::size_t bins() const noexcept { return spec_.bins(); }
  [[nodiscard]] std::span<const double> clean() const noexcept { return clean_; }
  [[nodiscard]] const dsp::Spectrogram& clean_spectrogram() const noexcept { return spec_; }

  [[nodiscard]] std::vector<double> render(const dsp::MaskVector& mask) const;

  /// SI-SDR (dB) of istft(mask(w) * stft(clean)) against clean.
  [[nodiscard]] double objective(std::span<const double> weights) const;

  /// d objective / d weights, backpropagated through the iSTFT, the mask
  /// multiply, the logistic and the l-infinity normalization.
  [[nodiscard]] std::vector<double> gradient(std::span<const double> weights) const;

 private:
  std::vector<double> clean_;
  double clean_energy_ = 0.0;
  dsp::Spectrogram spec_;
};

[[nodiscard]] double objective(std::span<const double> weights, std::span<const double> clean,
                               const dsp::StftConfig& cfg);
[[nodiscard]] std::vector<double> gradient(std::span<const double> weights,
                                           std::span<const double> clean,
                                           const dsp::StftConfig& cfg);

/// Gradient descent with momentum from w = 0, minimizing SI-SDR.
[[nodiscard]] AdversaryResult optimize(std::span<const double> clean, const AdversaryConfig& cfg);

}  // namespace sepmetrics::adversary
