#include "sepmetrics/fixture.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sepmetrics/errors.hpp"
#include "sepmetrics/noise.hpp"

namespace sepmetrics::experiments {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vowel {
  std::array<double, 4> formant_hz;
  std::array<double, 4> bandwidth_hz;
};

// Rough adult male vowel targets: /a/, /i/, /u/, /e/, /o/.
constexpr std::array<Vowel, 5> kVowels{{
    {{730, 1090, 2440, 3400}, {90, 110, 170, 250}},
    {{270, 2290, 3010, 3700}, {60, 100, 180, 250}},
    {{300, 870, 2240, 3300}, {60, 90, 170, 250}},
    {{530, 1840, 2480, 3500}, {80, 100, 170, 250}},
    {{570, 840, 2410, 3300}, {80, 90, 170, 250}},
}};
constexpr std::array<double, 4> kFormantWeight{1.0, 0.6, 0.3, 0.2};

// Sum of Lorentzian formant peaks over a flat floor.
double vocal_tract_gain(double hz, const std::array<double, 4>& formants,
                        const std::array<double, 4>& bandwidths) {
  double g = 0.04;
  for (std::size_t k = 0; k < formants.size(); ++k) {
    const double x = (hz - formants[k]) / (0.5 * bandwidths[k]);
    g += kFormantWeight[k] / std::sqrt(1.0 + x * x);
  }
  return g;
}

// RBJ cookbook biquad, band-pass (0 dB peak) or high-pass.
class Biquad {
 public:
  static Biquad bandpass(double center_hz, double q, double rate) {
    const double w0 = kTwoPi * center_hz / rate;
    const double alpha = std::sin(w0) / (2.0 * q);
    return Biquad(alpha, 0.0, -alpha, 1.0 + alpha, -2.0 * std::cos(w0), 1.0 - alpha);
  }
  static Biquad highpass(double cutoff_hz, double q, double rate) {
    const double w0 = kTwoPi * cutoff_hz / rate;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double c = std::cos(w0);
    return Biquad(0.5 * (1.0 + c), -(1.0 + c), 0.5 * (1.0 + c), 1.0 + alpha, -2.0 * c, 1.0 - alpha);
  }
  double operator()(double x) {
    const double y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  Biquad(double b0, double b1, double b2, double a0, double a1, double a2)
      : b0_(b0 / a0), b1_(b1 / a0), b2_(b2 / a0), a1_(a1 / a0), a2_(a2 / a0) {}
  double b0_, b1_, b2_, a1_, a2_;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

// Raised-cosine gate: 0 outside [begin, end), ramps of the given lengths.
double gate(double t, double begin, double end, double rise, double fall) {
  if (t < begin || t >= end) return 0.0;
  if (t < begin + rise) return 0.5 - 0.5 * std::cos(std::numbers::pi * (t - begin) / rise);
  if (t > end - fall) return 0.5 - 0.5 * std::cos(std::numbers::pi * (end - t) / fall);
  return 1.0;
}

struct Syllable {
  double begin;
  double end;
  std::size_t vowel_from;
  std::size_t vowel_to;
};

}  // namespace

std::vector<double> make_speech_fixture(const SpeechFixtureConfig& cfg) {
  if (cfg.sample_rate_hz <= 0 || !(cfg.duration_s > 0.0)) {
    throw InvalidArgumentError("fixture needs a positive sample rate and duration");
  }
  const double rate = cfg.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * rate));
  if (n == 0) throw InvalidArgumentError("fixture duration shorter than one sample");
  dsp::GaussianNoise rng(cfg.seed);

  // Syllables tile the utterance with short pauses; pauses host fricatives.
  std::vector<Syllable> syllables;
  double t = 0.06;
  std::size_t vowel = 0;
  while (t < cfg.duration_s - 0.15) {
    const double length = 0.22 + 0.12 * rng.uniform();
    const std::size_t next = (vowel + 1 + static_cast<std::size_t>(rng.uniform() * 3.0)) % kVowels.size();
    syllables.push_back({t, std::min(t + length, cfg.duration_s - 0.02), vowel, next});
    vowel = next;
    t += length + 0.07 + 0.06 * rng.uniform();
  }

  const double f0_base = 105.0 + 30.0 * rng.uniform();
  const double nyquist = 0.5 * rate;
  Biquad fricative_filter = Biquad::highpass(3500.0, 0.7, rate);
  Biquad aspiration_filter = Biquad::bandpass(4000.0, 0.35, rate);

  std::vector<double> out(n, 0.0);
  double phase = 0.0;
  double jitter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double time = static_cast<double>(i) / rate;
    jitter = 0.999 * jitter + 0.02 * rng();
    const double f0 = f0_base * (1.0 + 0.12 * std::sin(kTwoPi * 0.6 * time) - 0.08 * time / cfg.duration_s) +
                      jitter;
    phase = std::fmod(phase + kTwoPi * f0 / rate, kTwoPi);

    double voiced = 0.0;
    double in_gap = 1.0;
    for (const Syllable& s : syllables) {
      const double g = gate(time, s.begin, s.end, 0.03, 0.05);
      if (time >= s.begin - 0.01 && time < s.end + 0.01) in_gap = 0.0;
      if (g == 0.0) continue;
      const double u = (time - s.begin) / (s.end - s.begin);
      const Vowel& a = kVowels[s.vowel_from];
      const Vowel& b = kVowels[s.vowel_to];
      std::array<double, 4> formants{};
      std::array<double, 4> bandwidths{};
      for (std::size_t k = 0; k < 4; ++k) {
        formants[k] = a.formant_hz[k] + (b.formant_hz[k] - a.formant_hz[k]) * u * u;
        bandwidths[k] = a.bandwidth_hz[k] + (b.bandwidth_hz[k] - a.bandwidth_hz[k]) * u;
      }
      for (int h = 1; h * f0 < nyquist - 50.0; ++h) {
        const double hz = h * f0;
        const double glottal = 1.0 / (1.0 + hz / 250.0);
        voiced += g * glottal * vocal_tract_gain(hz, formants, bandwidths) * std::sin(h * phase);
      }
      voiced += g * 0.06 * aspiration_filter(rng());
    }
    const double fricative = in_gap * 0.2 * fricative_filter(rng());
    out[i] = voiced + fricative;
  }

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : out) v *= 0.5 / peak;
  return out;
}

}  // namespace sepmetrics::experiments
