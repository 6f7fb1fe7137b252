#pragma once

#include <cstdint>
#include <vector>

namespace sepmetrics::experiments {

struct SpeechFixtureConfig {
  int sample_rate_hz = 16000;
  double duration_s = 2.0;
  std::uint64_t seed = 1;
};

/// Synthetic speech-like signal: a glottal harmonic series with a gliding
/// pitch contour, shaped by time-varying formant resonances, cut into
/// syllables with raised-cosine onsets and offsets, with aspiration noise
/// under voiced segments and short fricative bursts between syllables.
/// Peak-normalized to 0.5. Deterministic per config.
[[nodiscard]] std::vector<double> make_speech_fixture(const SpeechFixtureConfig& cfg = {});

}  // namespace sepmetrics::experiments
