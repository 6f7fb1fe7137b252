#include "sepmetrics/adversary.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "sepmetrics/errors.hpp"
#include "sepmetrics/legacy_bss.hpp"
#include "sepmetrics/metrics.hpp"
#include "sepmetrics/noise.hpp"

namespace sepmetrics::adversary {
namespace {

constexpr double kDither = 1e-3;

double logistic(double w) {
  if (w >= 0.0) return 1.0 / (1.0 + std::exp(-w));
  const double e = std::exp(w);
  return e / (1.0 + e);
}

// log(logistic(w)), finite for any finite w.
double log_logistic(double w) {
  return w >= 0.0 ? -std::log1p(std::exp(-w)) : w - std::log1p(std::exp(w));
}

std::size_t first_argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t f = 1; f < v.size(); ++f)
    if (v[f] > v[best]) best = f;
  return best;
}

// m_f = logistic(w_f) / max_g logistic(w_g), formed as a ratio in log space.
std::vector<double> normalized_mask(std::span<const double> weights, std::size_t top) {
  const double log_peak = log_logistic(weights[top]);
  std::vector<double> m(weights.size());
  for (std::size_t f = 0; f < m.size(); ++f) m[f] = f == top ? 1.0 : std::exp(log_logistic(weights[f]) - log_peak);
  return m;
}

void check_weights(std::span<const double> weights, std::size_t bins) {
  if (weights.size() != bins) {
    throw LengthMismatchError("expected " + std::to_string(bins) + " weights, got " +
                              std::to_string(weights.size()));
  }
  for (double w : weights)
    if (!std::isfinite(w)) throw InvalidArgumentError("non-finite mask weight");
}

}  // namespace

dsp::MaskVector mask_from_weights(std::span<const double> weights) {
  if (weights.empty()) throw InvalidArgumentError("no mask weights");
  return dsp::MaskVector(normalized_mask(weights, first_argmax(weights)));
}

MaskingProblem::MaskingProblem(std::span<const double> clean, const dsp::StftConfig& cfg)
    : clean_(clean.begin(), clean.end()),
      clean_energy_(std::inner_product(clean.begin(), clean.end(), clean.begin(), 0.0)),
      spec_(dsp::stft(clean, cfg)) {
  if (!(clean_energy_ > 0.0)) throw ZeroReferenceError("clean signal is all zeros");
}

std::vector<double> MaskingProblem::render(const dsp::MaskVector& mask) const {
  return dsp::istft(dsp::apply_mask(spec_, mask));
}

double MaskingProblem::objective(std::span<const double> weights) const {
  check_weights(weights, bins());
  return metrics::si_sdr(clean_, render(mask_from_weights(weights)));
}

std::vector<double> MaskingProblem::gradient(std::span<const double> weights) const {
  check_weights(weights, bins());
  const std::size_t F = bins();
  const std::size_t top = first_argmax(weights);
  const std::vector<double> m = normalized_mask(weights, top);

  const std::vector<double> y = render(dsp::MaskVector(m));
  const std::size_t L = clean_.size();

  // J = (10 / ln 10) * (ln c^2 - ln |r|^2) + const, c = y.s, r = y - (c/|s|^2) s.
  const double c = std::inner_product(y.begin(), y.end(), clean_.begin(), 0.0);
  const double alpha = c / clean_energy_;
  std::vector<double> r(L);
  double r_energy = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    r[i] = y[i] - alpha * clean_[i];
    r_energy += r[i] * r[i];
  }
  const double db = 10.0 / std::numbers::ln10;
  std::vector<double> grad_y(L);
  for (std::size_t i = 0; i < L; ++i) grad_y[i] = db * (2.0 * clean_[i] / c - 2.0 * r[i] / r_energy);

  const dsp::Spectrogram adj = dsp::istft_adjoint(grad_y, spec_.config(), spec_.frames());
  std::vector<double> grad_m(F, 0.0);
  for (std::size_t t = 0; t < spec_.frames(); ++t) {
    const auto s = spec_.frame(t);
    const auto g = adj.frame(t);
    for (std::size_t f = 0; f < F; ++f) grad_m[f] += (s[f] * std::conj(g[f])).real();
  }

  // m_f = v_f / v_top with v = logistic(w): dm_f/dw_f = m_f (1 - v_f) and
  // dm_f/dw_top = -m_f (1 - v_top). m_top is identically 1 (subgradient choice).
  std::vector<double> grad_w(F, 0.0);
  double top_grad = 0.0;
  for (std::size_t f = 0; f < F; ++f) {
    if (f == top) continue;
    grad_w[f] = grad_m[f] * m[f] * logistic(-weights[f]);
    top_grad -= grad_m[f] * m[f];
  }
  grad_w[top] = top_grad * logistic(-weights[top]);
  return grad_w;
}

double objective(std::span<const double> weights, std::span<const double> clean,
                 const dsp::StftConfig& cfg) {
  return MaskingProblem(clean, cfg).objective(weights);
}

std::vector<double> gradient(std::span<const double> weights, std::span<const double> clean,
                             const dsp::StftConfig& cfg) {
  return MaskingProblem(clean, cfg).gradient(weights);
}

AdversaryResult optimize(std::span<const double> clean, const AdversaryConfig& cfg) {
  if (!(cfg.step_size > 0.0)) throw InvalidArgumentError("step_size must be positive");
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw InvalidArgumentError("momentum must lie in [0, 1)");
  if (!(cfg.max_grad_norm > 0.0)) throw InvalidArgumentError("max_grad_norm must be positive");

  const MaskingProblem problem(clean, cfg.stft);
  const std::size_t F = problem.bins();
  std::vector<double> w(F, 0.0);
  std::vector<double> velocity(F, 0.0);
  std::vector<double> dither(F);
  dsp::GaussianNoise rng(cfg.seed);
  for (double& d : dither) d = kDither * rng();

  AdversaryResult result;
  result.trajectory.reserve(cfg.iterations + 1);
  result.trajectory.push_back(problem.objective(w));
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    std::vector<double> g;
    if (std::isinf(result.trajectory.back())) {
      std::vector<double> probe = w;
      for (std::size_t f = 0; f < F; ++f) probe[f] += dither[f];
      g = problem.gradient(probe);
    } else {
      g = problem.gradient(w);
    }
    double norm = 0.0;
    for (double x : g) norm += x * x;
    norm = std::sqrt(norm);
    if (!std::isfinite(norm)) throw Error("adversary gradient became non-finite");
    const double scale = norm > cfg.max_grad_norm ? cfg.max_grad_norm / norm : 1.0;
    for (std::size_t f = 0; f < F; ++f) {
      velocity[f] = cfg.momentum * velocity[f] - cfg.step_size * scale * g[f];
      w[f] += velocity[f];
    }
    result.trajectory.push_back(problem.objective(w));
  }

  result.weights = w;
  result.mask = mask_from_weights(w);
  result.masked_signal = problem.render(result.mask);
  result.final_si_sdr_db = result.trajectory.back();
  const legacy::FirProjector projector(clean, {}, legacy::FirProjectionConfig{cfg.legacy_taps});
  result.final_legacy_sdr_db = legacy::legacy_sdr(projector.project(result.masked_signal));
  return result;
}

}  // namespace sepmetrics::adversary
