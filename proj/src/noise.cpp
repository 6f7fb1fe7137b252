#include "sepmetrics/noise.hpp"

#include <cmath>

namespace sepmetrics::dsp {

double GaussianNoise::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianNoise::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::vector<double> white_noise(std::size_t length, std::uint64_t seed) {
  GaussianNoise gen(seed);
  std::vector<double> out(length);
  for (double& x : out) x = gen();
  return out;
}

}  // namespace sepmetrics::dsp
