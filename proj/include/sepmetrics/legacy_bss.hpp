#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "sepmetrics/gram_solver.hpp"

namespace sepmetrics::legacy {

using SignalView = std::span<const double>;

struct FirProjectionConfig {
  std::size_t taps = 512;
};

/// Upper bound on taps * number of sources (dense normal equations).
inline constexpr std::size_t kMaxProjectionDim = 4096;

struct LegacyDecomposition {
  std::vector<double> s_target;
  std::vector<double> e_interf;
  std::vector<double> e_artif;
  /// One filter per source, reference first, each `taps` long.
  std::vector<std::vector<double>> projection_filters;
};

/// Least-squares projection onto the delayed copies of a fixed source set.
///
/// Delayed copies are x[t - d] for d in [0, taps), zero outside [0, L) and
/// truncated to the estimate's length L, so every output is L samples long.
/// The normal equations are assembled from FFT cross-correlations plus the
/// exact truncation correction, then factorized once; project() can be
/// called for any number of estimates (and from several threads).
class FirProjector {
 public:
  FirProjector(SignalView reference, std::span<const std::vector<double>> interferers,
               FirProjectionConfig cfg = {});

  [[nodiscard]] LegacyDecomposition project(SignalView estimate) const;

  [[nodiscard]] std::size_t length() const noexcept { return length_; }
  [[nodiscard]] std::size_t taps() const noexcept { return cfg_.taps; }
  [[nodiscard]] std::size_t source_count() const noexcept { return sources_.size(); }
  [[nodiscard]] bool jittered() const noexcept { return solver_->jittered(); }

 private:
  FirProjectionConfig cfg_;
  std::size_t length_ = 0;
  std::vector<std::vector<double>> sources_;
  std::unique_ptr<GramSolver> solver_;
};

[[nodiscard]] LegacyDecomposition fir_project(SignalView estimate, SignalView reference,
                                              std::span<const std::vector<double>> interferers,
                                              FirProjectionConfig cfg = {});

/// |s_target|^2 / |e_interf + e_artif|^2 in dB.
[[nodiscard]] double legacy_sdr(const LegacyDecomposition& d);
/// |s_target|^2 / |e_interf|^2 in dB.
[[nodiscard]] double legacy_sir(const LegacyDecomposition& d);
/// |s_target + e_interf|^2 / |e_artif|^2 in dB; the numerator holds every
/// projected source, not just the target.
[[nodiscard]] double legacy_sar(const LegacyDecomposition& d);

/// Direct (non-FFT) causal convolution truncated to `length` samples.
[[nodiscard]] std::vector<double> fir_filter(std::span<const double> taps, SignalView x,
                                             std::size_t length);

}  // namespace sepmetrics::legacy
