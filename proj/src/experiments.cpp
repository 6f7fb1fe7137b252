#include "sepmetrics/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sepmetrics/bands.hpp"
#include "sepmetrics/errors.hpp"
#include "sepmetrics/fixture.hpp"
#include "sepmetrics/legacy_bss.hpp"
#include "sepmetrics/metrics.hpp"
#include "sepmetrics/noise.hpp"
#include "sepmetrics/parallel.hpp"
#include "sepmetrics/wav.hpp"

namespace sepmetrics::experiments {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Scores estimates against one clean signal; the legacy projector is built
// once and shared by every grid point.
class CurveScorer {
 public:
  CurveScorer(std::span<const double> clean, std::size_t taps)
      : clean_(clean.begin(), clean.end()),
        projector_(clean, {}, legacy::FirProjectionConfig{taps}) {}

  [[nodiscard]] CurveRow score(double x, std::span<const double> estimate) const {
    CurveRow row;
    row.x = x;
    row.snr_db = metrics::snr(clean_, estimate);
    const bool silent =
        std::all_of(estimate.begin(), estimate.end(), [](double v) { return v == 0.0; });
    if (silent) {
      // Nothing of the target survives: the reference-scaled metrics diverge.
      row.si_sdr_db = row.sd_sdr_db = row.sdr_legacy_db = kNegInf;
      return row;
    }
    row.si_sdr_db = metrics::si_sdr(clean_, estimate);
    row.sd_sdr_db = metrics::sd_sdr(clean_, estimate);
    row.sdr_legacy_db = legacy::legacy_sdr(projector_.project(estimate));
    return row;
  }

 private:
  std::vector<double> clean_;
  legacy::FirProjector projector_;
};

std::string describe_peaks(const std::vector<CurveRow>& rows, const std::string& axis) {
  std::vector<double> legacy, snr, si, sd, xs;
  for (const CurveRow& r : rows) {
    xs.push_back(r.x);
    legacy.push_back(r.sdr_legacy_db);
    snr.push_back(r.snr_db);
    si.push_back(r.si_sdr_db);
    sd.push_back(r.sd_sdr_db);
  }
  std::ostringstream os;
  os << "peak " << axis << ": sdr_legacy=" << io::format_real(xs[argmax(legacy)])
     << " snr=" << io::format_real(xs[argmax(snr)]) << " si_sdr=" << io::format_real(xs[argmax(si)])
     << " sd_sdr=" << io::format_real(xs[argmax(sd)]);
  return os.str();
}

void check_grid(const std::vector<double>& grid, const std::string& name) {
  if (grid.empty()) throw SpecError("/" + name + ": grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw SpecError("/" + name + ": grid must be strictly increasing");
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kAdversarial: return "adversarial";
    case ExperimentKind::kProgressiveDeletion: return "progressive-deletion";
    case ExperimentKind::kBandstopSweep: return "bandstop-sweep";
    case ExperimentKind::kRescaleSweep: return "rescale-sweep";
  }
  return "unknown";
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) {
    throw InvalidArgumentError("grid needs step > 0 and stop >= start");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
  return grid;
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.proportions = linear_grid(0.0, 1.0, 0.05);
  spec.gains = linear_grid(0.0, 1.0, 0.025);
  spec.mu = linear_grid(0.1, 5.0, 0.1);
  for (double tail : {10.0, 20.0, 50.0, 100.0}) spec.mu.push_back(tail);
  return spec;
}

io::CsvTable to_table(const std::vector<CurveRow>& rows) {
  io::CsvTable table;
  table.columns = {"x", "sdr_legacy_db", "snr_db", "si_sdr_db", "sd_sdr_db"};
  const bool closed_form = !rows.empty() && rows.front().closed_form_sd_sdr_db.has_value();
  if (closed_form) table.columns.emplace_back("sd_sdr_closed_form_db");
  for (const CurveRow& r : rows) {
    io::CsvRecord rec{{"x", r.x},
                      {"sdr_legacy_db", r.sdr_legacy_db},
                      {"snr_db", r.snr_db},
                      {"si_sdr_db", r.si_sdr_db},
                      {"sd_sdr_db", r.sd_sdr_db}};
    if (closed_form) rec.push_back({"sd_sdr_closed_form_db", r.closed_form_sd_sdr_db});
    table.rows.push_back(std::move(rec));
  }
  return table;
}

Signal load_speech(const ExperimentSpec& spec) {
  if (spec.input_path) return io::read_wav(*spec.input_path);
  SpeechFixtureConfig cfg;
  cfg.sample_rate_hz = spec.sample_rate_hz;
  cfg.duration_s = spec.fixture_duration_s;
  return Signal(make_speech_fixture(cfg), spec.sample_rate_hz);
}

std::vector<CurveRow> run_rescale_sweep(const ExperimentSpec& spec) {
  check_grid(spec.mu, "mu");
  for (double mu : spec.mu)
    if (!(mu > 0.0)) throw SpecError("/mu: values must be positive");
  const std::size_t n = spec.rescale_length;
  const std::vector<double> s = dsp::white_noise(n, spec.seed);
  std::vector<double> noise = dsp::white_noise(n, spec.seed + 1);

  // Make the interference exactly orthogonal to s and of equal energy.
  double ss = 0.0, ns = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ss += s[i] * s[i];
    ns += noise[i] * s[i];
  }
  for (std::size_t i = 0; i < n; ++i) noise[i] -= (ns / ss) * s[i];
  double nn = 0.0;
  for (double v : noise) nn += v * v;
  const double g = std::sqrt(ss / nn);
  for (double& v : noise) v *= g;

  const CurveScorer scorer(s, spec.legacy_taps);
  std::vector<CurveRow> rows(spec.mu.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const double mu = spec.mu[i];
    std::vector<double> estimate(n);
    for (std::size_t t = 0; t < n; ++t) estimate[t] = mu * (s[t] + noise[t]);
    rows[i] = scorer.score(mu, estimate);
    rows[i].closed_form_sd_sdr_db = 10.0 * std::log10(mu * mu / ((1.0 - mu) * (1.0 - mu) + mu * mu));
  });
  return rows;
}

std::vector<CurveRow> run_progressive_deletion(const ExperimentSpec& spec) {
  check_grid(spec.proportions, "proportions");
  for (double p : spec.proportions)
    if (!(p >= 0.0 && p <= 1.0)) throw SpecError("/proportions: values must lie in [0, 1]");
  const Signal speech = load_speech(spec);
  const std::span<const double> clean = speech.samples();
  const dsp::Mixture mix =
      dsp::mix_at_snr(clean, dsp::white_noise(clean.size(), spec.seed), spec.noise_snr_db);
  const dsp::Spectrogram mix_spec = dsp::stft(mix.mixture, spec.stft);
  const std::size_t bins = spec.stft.bins();
  const std::size_t center =
      dsp::band_center(dsp::stft(clean, spec.stft), dsp::BandCenterMode::kMedianEnergy);

  const CurveScorer scorer(clean, spec.legacy_taps);
  std::vector<CurveRow> rows(spec.proportions.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const double p = spec.proportions[i];
    const auto keep = static_cast<std::size_t>(std::llround((1.0 - p) * static_cast<double>(bins)));
    const dsp::BinRange band = dsp::contiguous_band(center, keep, bins);
    std::vector<double> gains(bins, 0.0);
    for (std::size_t f = band.begin; f < band.end; ++f) gains[f] = 1.0;
    const std::vector<double> estimate =
        dsp::istft(dsp::apply_mask(mix_spec, dsp::MaskVector(std::move(gains))));
    rows[i] = scorer.score(p, estimate);
  });
  return rows;
}

std::vector<CurveRow> run_bandstop_sweep(const ExperimentSpec& spec) {
  check_grid(spec.gains, "gains");
  for (double g : spec.gains)
    if (!(g >= 0.0 && g <= 1.0)) throw SpecError("/gains: values must lie in [0, 1]");
  const Signal speech = load_speech(spec);
  const std::span<const double> clean = speech.samples();
  const std::size_t bins = spec.stft.bins();
  const std::size_t width =
      dsp::bandwidth_to_bins(spec.band_width_hz, speech.sample_rate_hz(), spec.stft.fft_size());
  const std::size_t center =
      dsp::band_center(dsp::stft(clean, spec.stft), dsp::BandCenterMode::kMaxMagnitude);

  const dsp::MaskVector passband = dsp::band_mask(center, width, dsp::BandKind::kBandpass, 0.0, bins);
  const std::vector<double> band_noise = dsp::istft(
      dsp::apply_mask(dsp::stft(dsp::white_noise(clean.size(), spec.seed), spec.stft), passband));
  const dsp::Mixture mix = dsp::mix_at_snr(clean, band_noise, spec.band_snr_db,
                                           dsp::centered_band(center, width, bins), spec.stft);
  const dsp::Spectrogram mix_spec = dsp::stft(mix.mixture, spec.stft);

  const CurveScorer scorer(clean, spec.legacy_taps);
  std::vector<CurveRow> rows(spec.gains.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const double g = spec.gains[i];
    const dsp::MaskVector stop = dsp::band_mask(center, width, dsp::BandKind::kBandstop, g, bins);
    rows[i] = scorer.score(g, dsp::istft(dsp::apply_mask(mix_spec, stop)));
  });
  return rows;
}

AdversarialRun run_adversarial(const ExperimentSpec& spec) {
  const Signal speech = load_speech(spec);
  adversary::AdversaryConfig cfg = spec.adversary;
  cfg.stft = spec.stft;
  cfg.legacy_taps = spec.legacy_taps;
  cfg.seed = spec.seed;
  AdversarialRun run{adversary::optimize(speech.samples(), cfg), {}};
  const CurveScorer scorer(speech.samples(), spec.legacy_taps);
  run.final_row = scorer.score(static_cast<double>(cfg.iterations), run.result.masked_signal);
  return run;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  ExperimentOutput out;
  const std::string name = to_string(spec.kind);
  const std::filesystem::path main_csv = out_dir / (name + ".csv");
  std::ostringstream summary;
  summary << name << ": ";
  switch (spec.kind) {
    case ExperimentKind::kRescaleSweep: {
      const auto rows = run_rescale_sweep(spec);
      io::write_csv(to_table(rows), main_csv);
      summary << describe_peaks(rows, "mu");
      break;
    }
    case ExperimentKind::kProgressiveDeletion: {
      const auto rows = run_progressive_deletion(spec);
      io::write_csv(to_table(rows), main_csv);
      double gap = kNegInf;
      for (const CurveRow& r : rows)
        if (r.x >= 0.2 - 1e-12 && r.x <= 0.8 + 1e-12) gap = std::max(gap, r.sdr_legacy_db - r.si_sdr_db);
      summary << describe_peaks(rows, "proportion") << "; max legacy-SI gap in [0.2,0.8]="
              << io::format_real(gap) << " dB";
      break;
    }
    case ExperimentKind::kBandstopSweep: {
      const auto rows = run_bandstop_sweep(spec);
      io::write_csv(to_table(rows), main_csv);
      summary << describe_peaks(rows, "gain");
      break;
    }
    case ExperimentKind::kAdversarial: {
      const AdversarialRun run = run_adversarial(spec);
      io::write_csv(to_table({run.final_row}), main_csv);

      io::CsvTable mask;
      mask.columns = {"bin", "frequency_hz", "weight", "mask"};
      const Signal speech = load_speech(spec);
      const double bin_hz = static_cast<double>(speech.sample_rate_hz()) /
                            static_cast<double>(spec.stft.fft_size());
      for (std::size_t f = 0; f < run.result.weights.size(); ++f) {
        mask.rows.push_back({{"bin", static_cast<std::int64_t>(f)},
                             {"frequency_hz", bin_hz * static_cast<double>(f)},
                             {"weight", run.result.weights[f]},
                             {"mask", run.result.mask[f]}});
      }
      io::write_csv(mask, out_dir / "mask.csv");
      out.files.push_back(out_dir / "mask.csv");

      io::CsvTable trajectory;
      trajectory.columns = {"iteration", "si_sdr_db"};
      for (std::size_t i = 0; i < run.result.trajectory.size(); ++i) {
        trajectory.rows.push_back({{"iteration", static_cast<std::int64_t>(i)},
                                   {"si_sdr_db", run.result.trajectory[i]}});
      }
      io::write_csv(trajectory, out_dir / "trajectory.csv");
      out.files.push_back(out_dir / "trajectory.csv");

      summary << "final si_sdr=" << io::format_real(run.result.final_si_sdr_db)
              << " dB, legacy sdr=" << io::format_real(run.result.final_legacy_sdr_db) << " dB";
      break;
    }
  }
  out.files.insert(out.files.begin(), main_csv);
  out.summary = summary.str();
  return out;
}

std::size_t argmax(const std::vector<double>& values) {
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (best == values.size() || values[i] > values[best]) best = i;
  }
  return best == values.size() ? 0 : best;
}

}  // namespace sepmetrics::experiments
