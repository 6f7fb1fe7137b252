#include "sepmetrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sepmetrics/errors.hpp"
#include "sepmetrics/gram_solver.hpp"
#include "sepmetrics/parallel.hpp"
#include "sepmetrics/signal.hpp"

namespace sepmetrics::metrics {
namespace {

double dot(SignalView a, SignalView b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double energy(SignalView a) { return dot(a, a); }

bool all_zero(SignalView a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; });
}

void check_pair(SignalView reference, SignalView estimate) {
  if (reference.size() != estimate.size()) {
    throw LengthMismatchError("reference has " + std::to_string(reference.size()) +
                              " samples, estimate has " + std::to_string(estimate.size()));
  }
  if (reference.empty()) throw ZeroReferenceError("empty reference");
  if (all_zero(reference)) throw ZeroReferenceError("reference is all zeros");
}

void check_estimate(SignalView estimate) {
  if (all_zero(estimate)) throw ZeroEstimateError("estimate is all zeros");
}

// alpha, |alpha s|^2 and |alpha s - est|^2 for a validated pair.
struct TargetSplit {
  double alpha;
  double target_energy;
  double residual_energy;
};

TargetSplit split_target(SignalView reference, SignalView estimate) {
  const double ref_energy = energy(reference);
  const double alpha = dot(estimate, reference) / ref_energy;
  double residual = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double r = estimate[i] - alpha * reference[i];
    residual += r * r;
  }
  if (is_rounding_residual(residual, energy(estimate), reference.size())) residual = 0.0;
  return {alpha, alpha * alpha * ref_energy, residual};
}

std::vector<double> centered(SignalView x) { return remove_mean(x); }

}  // namespace

std::optional<double> Decomposition::beta() const {
  if (alpha == 0.0) return std::nullopt;
  return 1.0 / alpha;
}

double select(const MetricReport& report, Metric metric) {
  switch (metric) {
    case Metric::kSiSdr: return report.si_sdr_db;
    case Metric::kSnr: return report.snr_db;
    case Metric::kSdSdr: return report.sd_sdr_db;
  }
  return report.si_sdr_db;
}

double ratio_db(double numerator_energy, double denominator_energy) {
  return 10.0 * std::log10(numerator_energy / denominator_energy);
}

bool is_rounding_residual(double residual_energy, double scale_energy, std::size_t length) {
  const double tau = 4.0 * static_cast<double>(std::max<std::size_t>(length, 1)) *
                     std::numeric_limits<double>::epsilon();
  return residual_energy <= tau * tau * scale_energy;
}

double snr(SignalView reference, SignalView estimate) {
  check_pair(reference, estimate);
  double err = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - estimate[i];
    err += d * d;
  }
  return ratio_db(energy(reference), err);
}

double optimal_scale(SignalView reference, SignalView estimate) {
  check_pair(reference, estimate);
  return dot(estimate, reference) / energy(reference);
}

double si_sdr(SignalView reference, SignalView estimate) {
  check_pair(reference, estimate);
  check_estimate(estimate);
  const TargetSplit split = split_target(reference, estimate);
  return ratio_db(split.target_energy, split.residual_energy);
}

double sd_sdr(SignalView reference, SignalView estimate) {
  check_pair(reference, estimate);
  check_estimate(estimate);
  const double alpha = dot(estimate, reference) / energy(reference);
  double err = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - estimate[i];
    err += d * d;
  }
  return ratio_db(alpha * alpha * energy(reference), err);
}

Decomposition decompose(SignalView reference, std::span<const std::vector<double>> interferers,
                        SignalView estimate) {
  check_pair(reference, estimate);
  check_estimate(estimate);
  const std::size_t n = reference.size();
  for (std::size_t j = 0; j < interferers.size(); ++j) {
    if (interferers[j].size() != n) {
      throw LengthMismatchError("interferer " + std::to_string(j) + " has " +
                                std::to_string(interferers[j].size()) + " samples, expected " +
                                std::to_string(n));
    }
  }

  const TargetSplit split = split_target(reference, estimate);
  Decomposition d;
  d.alpha = split.alpha;
  d.e_target.resize(n);
  d.e_res.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.e_target[i] = split.alpha * reference[i];
    d.e_res[i] = split.residual_energy == 0.0 ? 0.0 : estimate[i] - d.e_target[i];
  }
  d.e_interf.assign(n, 0.0);
  d.e_artif = d.e_res;
  if (interferers.empty()) return d;

  std::vector<SignalView> sources{reference};
  for (const auto& x : interferers) sources.emplace_back(x);
  const std::size_t k = sources.size();
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) gram(a, b) = gram(b, a) = dot(sources[a], sources[b]);
    rhs(a) = dot(sources[a], d.e_res);
  }
  // Factorize even for a zero residual so degenerate source sets always throw.
  const GramSolver solver(gram);
  if (split.residual_energy == 0.0) return d;
  const Eigen::VectorXd coeff = solver.solve(rhs);

  for (std::size_t a = 0; a < k; ++a) {
    const double c = coeff(a);
    for (std::size_t i = 0; i < n; ++i) d.e_interf[i] += c * sources[a][i];
  }
  for (std::size_t i = 0; i < n; ++i) d.e_artif[i] = d.e_res[i] - d.e_interf[i];

  const double res_energy = energy(d.e_res);
  if (is_rounding_residual(energy(d.e_artif), res_energy, n)) {
    d.e_interf = d.e_res;
    std::fill(d.e_artif.begin(), d.e_artif.end(), 0.0);
  } else if (is_rounding_residual(energy(d.e_interf), res_energy, n)) {
    std::fill(d.e_interf.begin(), d.e_interf.end(), 0.0);
    d.e_artif = d.e_res;
  }
  return d;
}

double si_sir(const Decomposition& decomp) {
  const double target = energy(decomp.e_target);
  if (target == 0.0) throw ZeroTargetError("e_target is zero: estimate is orthogonal to the reference");
  return ratio_db(target, energy(decomp.e_interf));
}

double si_sar(const Decomposition& decomp) {
  const double target = energy(decomp.e_target);
  if (target == 0.0) throw ZeroTargetError("e_target is zero: estimate is orthogonal to the reference");
  return ratio_db(target, energy(decomp.e_artif));
}

MetricReport evaluate(SignalView reference, std::span<const std::vector<double>> interferers,
                      SignalView estimate, const EvalOptions& options) {
  if (options.zero_mean) {
    const std::vector<double> ref = centered(reference);
    const std::vector<double> est = centered(estimate);
    std::vector<std::vector<double>> interf;
    interf.reserve(interferers.size());
    for (const auto& x : interferers) interf.push_back(centered(x));
    return evaluate(ref, interf, est, EvalOptions{.zero_mean = false});
  }

  MetricReport report;
  report.snr_db = snr(reference, estimate);
  report.si_sdr_db = si_sdr(reference, estimate);
  report.sd_sdr_db = sd_sdr(reference, estimate);
  report.min_snr_sdsdr_db = std::min(report.snr_db, report.sd_sdr_db);
  if (!interferers.empty()) {
    const Decomposition d = decompose(reference, interferers, estimate);
    report.si_sir_db = si_sir(d);
    report.si_sar_db = si_sar(d);
  }
  return report;
}

PermutedEvaluation evaluate_permuted(std::span<const std::vector<double>> references,
                                     std::span<const std::vector<double>> estimates,
                                     Metric metric, const EvalOptions& options) {
  const std::size_t k = references.size();
  if (estimates.size() != k) {
    throw CountMismatchError(std::to_string(k) + " references but " +
                             std::to_string(estimates.size()) + " estimates");
  }
  if (k == 0) throw CountMismatchError("no sources to evaluate");
  if (k > kMaxPermutedSources) {
    throw InvalidArgumentError("permutation search supports at most " +
                               std::to_string(kMaxPermutedSources) + " sources, got " +
                               std::to_string(k));
  }

  // reports[r * k + e]: estimate e against reference r, other references as interferers.
  std::vector<MetricReport> matrix(k * k);
  parallel_for(k * k, [&](std::size_t idx) {
    const std::size_t r = idx / k;
    const std::size_t e = idx % k;
    std::vector<std::vector<double>> others;
    for (std::size_t j = 0; j < k; ++j)
      if (j != r) others.push_back(references[j]);
    matrix[idx] = evaluate(references[r], others, estimates[e], options);
  });

  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_score = -std::numeric_limits<double>::infinity();
  bool first = true;
  do {
    double score = 0.0;
    for (std::size_t r = 0; r < k; ++r) score += select(matrix[r * k + perm[r]], metric);
    score /= static_cast<double>(k);
    if (std::isnan(score)) score = -std::numeric_limits<double>::infinity();
    if (first || score > best_score) {
      best_score = score;
      best = perm;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  PermutedEvaluation out;
  out.assignment = best;
  for (std::size_t r = 0; r < k; ++r) out.reports.push_back(matrix[r * k + best[r]]);
  return out;
}

}  // namespace sepmetrics::metrics
