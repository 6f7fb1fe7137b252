#include "sepmetrics/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "sepmetrics/errors.hpp"

namespace sepmetrics::dsp {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW's planner is not thread-safe; plans live for the whole process.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int size = static_cast<int>(n);
  double* real = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_r2c_1d(size, real, spec, flags),
             fftw_plan_dft_c2r_1d(size, spec, real, flags | FFTW_DESTROY_INPUT)};
  fftw_free(real);
  fftw_free(spec);
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(std::size_t size) : size_(size) {
  if (size == 0) throw InvalidArgumentError("FFT size must be positive");
  const PlanPair p = plans_for(size);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  // r2c does not modify its input, the const_cast only satisfies the C API.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  // c2r destroys its input, so work on a copy.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  scratch.front().imag(0.0);
  if (size_ % 2 == 0) scratch.back().imag(0.0);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

std::size_t good_fft_size(std::size_t n) {
  std::size_t best = 1;
  while (best < n) best *= 2;
  for (std::size_t p5 = 1; p5 <= best; p5 *= 5) {
    for (std::size_t p3 = p5; p3 <= best; p3 *= 3) {
      std::size_t v = p3;
      while (v < n) v *= 2;
      best = std::min(best, v);
    }
  }
  return best;
}

std::vector<double> cross_correlation(std::span<const double> a, std::span<const double> b,
                                      std::size_t max_lag) {
  const std::size_t n = good_fft_size(a.size() + b.size());
  const RealFft fft(n);
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(fft.bins()), fb(fft.bins());
  fft.forward(pa, fa);
  fft.forward(pb, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= std::conj(fb[i]);
  std::vector<double> r(n);
  fft.inverse(fa, r);
  std::vector<double> out(max_lag, 0.0);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < max_lag && k < a.size(); ++k) out[k] = r[k] * scale;
  return out;
}

std::vector<double> fft_convolve(std::span<const double> x, std::span<const double> h,
                                 std::size_t length) {
  const std::size_t n = good_fft_size(x.size() + h.size());
  const RealFft fft(n);
  std::vector<double> px(n, 0.0), ph(n, 0.0);
  std::copy(x.begin(), x.end(), px.begin());
  std::copy(h.begin(), h.end(), ph.begin());
  std::vector<std::complex<double>> fx(fft.bins()), fh(fft.bins());
  fft.forward(px, fx);
  fft.forward(ph, fh);
  for (std::size_t i = 0; i < fx.size(); ++i) fx[i] *= fh[i];
  std::vector<double> y(n);
  fft.inverse(fx, y);
  std::vector<double> out(length, 0.0);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < length && i < n; ++i) out[i] = y[i] * scale;
  return out;
}

}  // namespace sepmetrics::dsp
