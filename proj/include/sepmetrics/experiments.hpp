#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sepmetrics/adversary.hpp"
#include "sepmetrics/csv.hpp"
#include "sepmetrics/signal.hpp"
#include "sepmetrics/stft.hpp"

namespace sepmetrics::experiments {

enum class ExperimentKind { kAdversarial, kProgressiveDeletion, kBandstopSweep, kRescaleSweep };

[[nodiscard]] std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kRescaleSweep;
  /// Speech WAV for the speech experiments; the built-in fixture when empty.
  std::optional<std::filesystem::path> input_path;
  std::uint64_t seed = 0;
  /// Fixture parameters, used when input_path is empty.
  int sample_rate_hz = 16000;
  double fixture_duration_s = 2.0;
  dsp::StftConfig stft{};
  std::size_t legacy_taps = 512;

  std::vector<double> proportions;  // progressive deletion
  double noise_snr_db = 15.0;       // progressive deletion
  double band_width_hz = 1600.0;    // bandstop sweep
  double band_snr_db = 0.0;         // bandstop sweep, in-band
  std::vector<double> gains;        // bandstop sweep
  std::vector<double> mu;           // rescale sweep
  std::size_t rescale_length = 16000;

  adversary::AdversaryConfig adversary{};

  /// Defaults for a kind (grids included).
  static ExperimentSpec defaults(ExperimentKind kind);
};

/// Parses the JSON schema documented in docs/experiment_schema.md. Errors
/// are SpecError with a JSON-pointer path to the offending field.
[[nodiscard]] ExperimentSpec parse_spec(const std::string& json_text);
[[nodiscard]] ExperimentSpec load_spec(const std::filesystem::path& path);

/// Evenly spaced grid start, start + step, ..., stop (inclusive, index-based).
[[nodiscard]] std::vector<double> linear_grid(double start, double stop, double step);

struct CurveRow {
  double x = 0.0;
  double sdr_legacy_db = 0.0;
  double snr_db = 0.0;
  double si_sdr_db = 0.0;
  double sd_sdr_db = 0.0;
  /// Only for the rescale sweep: closed-form SD-SDR of mu * x.
  std::optional<double> closed_form_sd_sdr_db;
};

[[nodiscard]] io::CsvTable to_table(const std::vector<CurveRow>& rows);

/// Loads the speech input (channel 0 of input_path) or builds the fixture at
/// spec.sample_rate_hz.
[[nodiscard]] Signal load_speech(const ExperimentSpec& spec);

[[nodiscard]] std::vector<CurveRow> run_progressive_deletion(const ExperimentSpec& spec);
[[nodiscard]] std::vector<CurveRow> run_bandstop_sweep(const ExperimentSpec& spec);
[[nodiscard]] std::vector<CurveRow> run_rescale_sweep(const ExperimentSpec& spec);

struct AdversarialRun {
  adversary::AdversaryResult result;
  CurveRow final_row;
};
[[nodiscard]] AdversarialRun run_adversarial(const ExperimentSpec& spec);

struct ExperimentOutput {
  std::vector<std::filesystem::path> files;
  std::string summary;
};

/// Runs the experiment and writes <kind>.csv (plus mask.csv and
/// trajectory.csv for the adversarial run) into out_dir.
ExperimentOutput run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

/// Index of the largest value (first on ties); NaN entries are skipped.
[[nodiscard]] std::size_t argmax(const std::vector<double>& values);

}  // namespace sepmetrics::experiments
