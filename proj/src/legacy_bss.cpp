#include "sepmetrics/legacy_bss.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sepmetrics/errors.hpp"
#include "sepmetrics/fft.hpp"
#include "sepmetrics/metrics.hpp"

namespace sepmetrics::legacy {
namespace {

double energy(std::span<const double> x) { return std::inner_product(x.begin(), x.end(), x.begin(), 0.0); }

// Gram block between delayed copies of a (rows) and b (columns):
// block(i, j) = sum_{t in [0, L)} a[t - i] * b[t - j].
void fill_block(Eigen::Ref<Eigen::MatrixXd> block, std::span<const double> a,
                std::span<const double> b, std::size_t taps) {
  const std::size_t n = a.size();
  const std::vector<double> ab = dsp::cross_correlation(a, b, taps);
  const std::vector<double> ba = dsp::cross_correlation(b, a, taps);
  const auto P = static_cast<Eigen::Index>(taps);
  for (Eigen::Index j = 0; j < P; ++j) block(0, j) = ab[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < P; ++i) block(i, 0) = ba[static_cast<std::size_t>(i)];
  // Truncation at t = L removes one product per extra unit of delay.
  for (Eigen::Index i = 1; i < P; ++i) {
    for (Eigen::Index j = 1; j < P; ++j) {
      block(i, j) = block(i - 1, j - 1) - a[n - static_cast<std::size_t>(i)] *
                                              b[n - static_cast<std::size_t>(j)];
    }
  }
}

}  // namespace

FirProjector::FirProjector(SignalView reference, std::span<const std::vector<double>> interferers,
                           FirProjectionConfig cfg)
    : cfg_(cfg), length_(reference.size()) {
  if (length_ == 0) throw ZeroReferenceError("empty reference");
  if (std::all_of(reference.begin(), reference.end(), [](double v) { return v == 0.0; })) {
    throw ZeroReferenceError("reference is all zeros");
  }
  if (cfg_.taps < 1 || cfg_.taps > length_) {
    throw InvalidArgumentError("taps must lie in [1, " + std::to_string(length_) + "], got " +
                               std::to_string(cfg_.taps));
  }
  sources_.emplace_back(reference.begin(), reference.end());
  for (std::size_t j = 0; j < interferers.size(); ++j) {
    if (interferers[j].size() != length_) {
      throw LengthMismatchError("interferer " + std::to_string(j) + " has " +
                                std::to_string(interferers[j].size()) + " samples, expected " +
                                std::to_string(length_));
    }
    sources_.push_back(interferers[j]);
  }
  const std::size_t k = sources_.size();
  if (cfg_.taps * k > kMaxProjectionDim) {
    throw InvalidArgumentError("taps * sources = " + std::to_string(cfg_.taps * k) +
                               " exceeds the limit of " + std::to_string(kMaxProjectionDim));
  }

  const auto P = static_cast<Eigen::Index>(cfg_.taps);
  Eigen::MatrixXd gram(P * static_cast<Eigen::Index>(k), P * static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      const auto ia = static_cast<Eigen::Index>(a) * P;
      const auto ib = static_cast<Eigen::Index>(b) * P;
      fill_block(gram.block(ia, ib, P, P), sources_[a], sources_[b], cfg_.taps);
      if (a != b) gram.block(ib, ia, P, P) = gram.block(ia, ib, P, P).transpose();
    }
  }
  solver_ = std::make_unique<GramSolver>(gram);
}

LegacyDecomposition FirProjector::project(SignalView estimate) const {
  if (estimate.size() != length_) {
    throw LengthMismatchError("estimate has " + std::to_string(estimate.size()) +
                              " samples, sources have " + std::to_string(length_));
  }
  const std::size_t k = sources_.size();
  const std::size_t taps = cfg_.taps;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(taps * k));
  for (std::size_t a = 0; a < k; ++a) {
    const std::vector<double> c = dsp::cross_correlation(estimate, sources_[a], taps);
    for (std::size_t d = 0; d < taps; ++d) rhs(static_cast<Eigen::Index>(a * taps + d)) = c[d];
  }
  const Eigen::VectorXd coeff = solver_->solve(rhs);

  LegacyDecomposition out;
  out.projection_filters.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    out.projection_filters[a].resize(taps);
    for (std::size_t d = 0; d < taps; ++d)
      out.projection_filters[a][d] = coeff(static_cast<Eigen::Index>(a * taps + d));
  }

  out.s_target = dsp::fft_convolve(sources_[0], out.projection_filters[0], length_);
  out.e_interf.assign(length_, 0.0);
  for (std::size_t a = 1; a < k; ++a) {
    const std::vector<double> part = dsp::fft_convolve(sources_[a], out.projection_filters[a], length_);
    for (std::size_t i = 0; i < length_; ++i) out.e_interf[i] += part[i];
  }
  out.e_artif.resize(length_);
  for (std::size_t i = 0; i < length_; ++i)
    out.e_artif[i] = estimate[i] - out.s_target[i] - out.e_interf[i];

  // Rounding-level components are exact zeros (identity and residual cases).
  const double est_energy = energy(estimate);
  const std::size_t scale_len = length_ + taps * k;
  if (metrics::is_rounding_residual(energy(out.e_artif), est_energy, scale_len)) {
    std::fill(out.e_artif.begin(), out.e_artif.end(), 0.0);
  } else {
    std::vector<double> projected(length_);
    for (std::size_t i = 0; i < length_; ++i) projected[i] = out.s_target[i] + out.e_interf[i];
    if (metrics::is_rounding_residual(energy(projected), est_energy, scale_len)) {
      std::fill(out.s_target.begin(), out.s_target.end(), 0.0);
      std::fill(out.e_interf.begin(), out.e_interf.end(), 0.0);
      out.e_artif.assign(estimate.begin(), estimate.end());
    }
  }
  return out;
}

LegacyDecomposition fir_project(SignalView estimate, SignalView reference,
                                std::span<const std::vector<double>> interferers,
                                FirProjectionConfig cfg) {
  if (estimate.size() != reference.size()) {
    throw LengthMismatchError("estimate has " + std::to_string(estimate.size()) +
                              " samples, reference has " + std::to_string(reference.size()));
  }
  return FirProjector(reference, interferers, cfg).project(estimate);
}

double legacy_sdr(const LegacyDecomposition& d) {
  double distortion = 0.0;
  for (std::size_t i = 0; i < d.e_interf.size(); ++i) {
    const double v = d.e_interf[i] + d.e_artif[i];
    distortion += v * v;
  }
  return metrics::ratio_db(energy(d.s_target), distortion);
}

double legacy_sir(const LegacyDecomposition& d) {
  return metrics::ratio_db(energy(d.s_target), energy(d.e_interf));
}

double legacy_sar(const LegacyDecomposition& d) {
  double projected = 0.0;
  for (std::size_t i = 0; i < d.s_target.size(); ++i) {
    const double v = d.s_target[i] + d.e_interf[i];
    projected += v * v;
  }
  return metrics::ratio_db(projected, energy(d.e_artif));
}

std::vector<double> fir_filter(std::span<const double> taps, SignalView x, std::size_t length) {
  std::vector<double> y(length, 0.0);
  for (std::size_t t = 0; t < length; ++t) {
    double acc = 0.0;
    for (std::size_t d = 0; d < taps.size() && d <= t; ++d) {
      if (t - d < x.size()) acc += taps[d] * x[t - d];
    }
    y[t] = acc;
  }
  return y;
}

}  // namespace sepmetrics::legacy
