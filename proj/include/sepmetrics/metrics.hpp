#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sepmetrics::metrics {

using SignalView = std::span<const double>;

/// Split of an estimate into a scaled reference plus residual, with the
/// residual further split into the part inside span{reference, interferers}
/// (e_interf) and the part outside it (e_artif).
struct Decomposition {
  double alpha = 0.0;
  std::vector<double> e_target;
  std::vector<double> e_interf;
  std::vector<double> e_artif;
  std::vector<double> e_res;

  /// Scale that maps the estimate onto the reference; nullopt when alpha is 0.
  [[nodiscard]] std::optional<double> beta() const;
};

struct MetricReport {
  double snr_db = 0.0;
  double si_sdr_db = 0.0;
  double sd_sdr_db = 0.0;
  std::optional<double> si_sir_db;
  std::optional<double> si_sar_db;
  double min_snr_sdsdr_db = 0.0;
};

struct EvalOptions {
  /// Subtract each signal's mean before anything else.
  bool zero_mean = false;
};

enum class Metric { kSiSdr, kSnr, kSdSdr };

[[nodiscard]] double select(const MetricReport& report, Metric metric);

/// 10*log10(|s|^2 / |s - est|^2). +inf when est == s exactly.
[[nodiscard]] double snr(SignalView reference, SignalView estimate);

/// Optimal target scale est^T s / |s|^2.
[[nodiscard]] double optimal_scale(SignalView reference, SignalView estimate);

/// Scale-invariant SDR. +inf for an estimate collinear with the reference
/// (to working precision), -inf for a nonzero estimate orthogonal to it.
[[nodiscard]] double si_sdr(SignalView reference, SignalView estimate);

/// Scale-dependent SDR: 10*log10(|alpha s|^2 / |s - est|^2).
[[nodiscard]] double sd_sdr(SignalView reference, SignalView estimate);

/// Projects the estimate onto the reference, then projects the residual onto
/// span{reference, interferers} by solving the Gram system of the sources.
[[nodiscard]] Decomposition decompose(SignalView reference,
                                      std::span<const std::vector<double>> interferers,
                                      SignalView estimate);

[[nodiscard]] double si_sir(const Decomposition& decomp);
[[nodiscard]] double si_sar(const Decomposition& decomp);

/// Every metric for one pair. SI-SIR/SI-SAR are filled iff interferers are
/// given.
[[nodiscard]] MetricReport evaluate(SignalView reference,
                                    std::span<const std::vector<double>> interferers,
                                    SignalView estimate, const EvalOptions& options = {});

struct PermutedEvaluation {
  /// assignment[r] is the index of the estimate paired with reference r.
  std::vector<std::size_t> assignment;
  /// reports[r] evaluates estimate assignment[r] against reference r, with
  /// the remaining references acting as interferers.
  std::vector<MetricReport> reports;
};

inline constexpr std::size_t kMaxPermutedSources = 8;

/// Exhaustive search over all k! pairings for the one maximizing the mean of
/// the selected metric. Ties go to the lexicographically first permutation.
[[nodiscard]] PermutedEvaluation evaluate_permuted(std::span<const std::vector<double>> references,
                                                   std::span<const std::vector<double>> estimates,
                                                   Metric metric, const EvalOptions& options = {});

/// Energy-ratio helper shared by the metric families: 10*log10(num/den) with
/// IEEE semantics (x/0 = +inf, 0/x = -inf).
[[nodiscard]] double ratio_db(double numerator_energy, double denominator_energy);

/// True when a residual's energy is at rounding level relative to the
/// energy of the vector it was computed from. Such residuals are treated as
/// exact zeros so identity cases report +inf rather than ~300 dB.
[[nodiscard]] bool is_rounding_residual(double residual_energy, double scale_energy,
                                        std::size_t length);

}  // namespace sepmetrics::metrics
