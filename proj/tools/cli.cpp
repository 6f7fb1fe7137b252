#include "cli.hpp"

#include <fnmatch.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sepmetrics/csv.hpp"
#include "sepmetrics/errors.hpp"
#include "sepmetrics/experiments.hpp"
#include "sepmetrics/fixture.hpp"
#include "sepmetrics/legacy_bss.hpp"
#include "sepmetrics/metrics.hpp"
#include "sepmetrics/parallel.hpp"
#include "sepmetrics/signal.hpp"
#include "sepmetrics/wav.hpp"

namespace sepmetrics::cli {
namespace {

namespace fs = std::filesystem;

struct EvalArgs {
  std::string ref;
  std::string est;
  std::vector<std::string> interf;
  bool zero_mean = false;
  bool truncate = false;
  std::optional<std::size_t> legacy_taps;
  std::string out;
};

struct EvalSetArgs {
  std::string refs;
  std::string ests;
  bool permute = false;
  std::string metric = "si-sdr";
  bool zero_mean = false;
  bool truncate = false;
  std::string out;
};

struct ExperimentArgs {
  std::string spec;
  std::string out_dir;
};

struct CompareArgs {
  std::string ref;
  std::vector<std::string> ests;
  double threshold = 5.0;
  std::size_t legacy_taps = 512;
  bool zero_mean = false;
  bool truncate = false;
  std::string out;
};

struct FixtureArgs {
  std::string out;
  std::uint64_t seed = 1;
  double duration_s = 2.0;
  int sample_rate_hz = 16000;
};

// A set of signals that must share a sample rate and (after the length
// policy) a length.
struct SignalSet {
  std::vector<std::string> names;
  std::vector<std::vector<double>> samples;
  int sample_rate_hz = 0;

  void add(const std::string& path) {
    const Signal s = io::read_wav(path);
    if (names.empty()) {
      sample_rate_hz = s.sample_rate_hz();
    } else if (s.sample_rate_hz() != sample_rate_hz) {
      throw InvalidArgumentError("sample rate mismatch: '" + path + "' is " +
                                 std::to_string(s.sample_rate_hz()) + " Hz, '" + names.front() +
                                 "' is " + std::to_string(sample_rate_hz) + " Hz");
    }
    names.push_back(path);
    samples.push_back(s.vec());
  }

  void align(bool truncate) {
    std::size_t shortest = samples.front().size();
    for (const auto& x : samples) shortest = std::min(shortest, x.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].size() == shortest) continue;
      if (!truncate) {
        throw LengthMismatchError("length mismatch: '" + names[i] + "' has " +
                                  std::to_string(samples[i].size()) + " samples, expected " +
                                  std::to_string(samples.front().size()) +
                                  " (use --truncate to cut to the shortest)");
      }
      samples[i].resize(shortest);
    }
  }

  void center() {
    for (auto& x : samples) x = remove_mean(x);
  }
};

void emit(const io::CsvTable& table, const std::string& out_path, std::ostream& out) {
  const std::string text = io::format_csv(table);
  if (out_path.empty() || out_path == "-") {
    out << text;
  } else {
    io::write_text(text, out_path);
  }
}

std::vector<std::vector<double>> others(const std::vector<std::vector<double>>& all, std::size_t skip) {
  std::vector<std::vector<double>> rest;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (i != skip) rest.push_back(all[i]);
  return rest;
}

io::CsvRecord metric_fields(const metrics::MetricReport& r) {
  return {{"snr_db", r.snr_db},
          {"si_sdr_db", r.si_sdr_db},
          {"sd_sdr_db", r.sd_sdr_db},
          {"si_sir_db", r.si_sir_db},
          {"si_sar_db", r.si_sar_db},
          {"min_snr_sdsdr_db", r.min_snr_sdsdr_db}};
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  SignalSet set;
  set.add(a.ref);
  set.add(a.est);
  for (const auto& p : a.interf) set.add(p);
  set.align(a.truncate);
  if (a.zero_mean) set.center();

  const auto& ref = set.samples[0];
  const auto& est = set.samples[1];
  const std::vector<std::vector<double>> interf(set.samples.begin() + 2, set.samples.end());
  const metrics::MetricReport report = metrics::evaluate(ref, interf, est);

  io::CsvRecord row{{"reference", a.ref}, {"estimate", a.est}};
  for (auto& f : metric_fields(report)) row.push_back(std::move(f));
  if (a.legacy_taps) {
    const legacy::FirProjector projector(ref, interf, legacy::FirProjectionConfig{*a.legacy_taps});
    const legacy::LegacyDecomposition d = projector.project(est);
    row.push_back({"sdr_legacy_db", legacy::legacy_sdr(d)});
    row.push_back({"sir_legacy_db", legacy::legacy_sir(d)});
    row.push_back({"sar_legacy_db", legacy::legacy_sar(d)});
  }
  emit(io::CsvTable::from_records({row}), a.out, out);
  return 0;
}

bool has_wildcard(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

bool is_wav(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav";
}

// A directory (all *.wav inside), a glob on the file name, or a single file.
std::vector<std::string> expand(const std::string& spec) {
  const fs::path path(spec);
  std::vector<std::string> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path, ec))
      if (entry.is_regular_file() && is_wav(entry.path())) files.push_back(entry.path().string());
  } else if (has_wildcard(path.filename().string())) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(dir, ec)) throw IoError("no such directory: '" + dir.string() + "'");
    const std::string pattern = path.filename().string();
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (!entry.is_regular_file()) continue;
      if (fnmatch(pattern.c_str(), entry.path().filename().c_str(), 0) == 0)
        files.push_back(path.has_parent_path() ? entry.path().string() : entry.path().filename().string());
    }
  } else if (fs::is_regular_file(path, ec)) {
    files.push_back(spec);
  } else {
    throw IoError("no such file or directory: '" + spec + "'");
  }
  if (files.empty()) throw IoError("no files match '" + spec + "'");
  std::sort(files.begin(), files.end());
  return files;
}

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

std::optional<double> median_of(std::vector<double> xs) {
  if (xs.empty()) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

metrics::Metric parse_metric(const std::string& name) {
  if (name == "si-sdr") return metrics::Metric::kSiSdr;
  if (name == "snr") return metrics::Metric::kSnr;
  return metrics::Metric::kSdSdr;
}

int cmd_eval_set(const EvalSetArgs& a, std::ostream& out) {
  const std::vector<std::string> ref_files = expand(a.refs);
  const std::vector<std::string> est_files = expand(a.ests);
  if (ref_files.size() != est_files.size()) {
    throw CountMismatchError("count mismatch: " + std::to_string(ref_files.size()) + " references vs " +
                             std::to_string(est_files.size()) + " estimates");
  }
  SignalSet set;
  for (const auto& f : ref_files) set.add(f);
  for (const auto& f : est_files) set.add(f);
  set.align(a.truncate);
  if (a.zero_mean) set.center();

  const std::size_t k = ref_files.size();
  const std::vector<std::vector<double>> refs(set.samples.begin(), set.samples.begin() + k);
  const std::vector<std::vector<double>> ests(set.samples.begin() + k, set.samples.end());

  metrics::PermutedEvaluation result;
  if (a.permute) {
    result = metrics::evaluate_permuted(refs, ests, parse_metric(a.metric));
  } else {
    result.assignment.resize(k);
    result.reports.resize(k);
    for (std::size_t r = 0; r < k; ++r) result.assignment[r] = r;
    parallel_for(k, [&](std::size_t r) { result.reports[r] = metrics::evaluate(refs[r], others(refs, r), ests[r]); });
  }

  std::string permutation;
  for (std::size_t r = 0; r < k; ++r) permutation += (r ? "," : "") + std::to_string(result.assignment[r]);

  io::CsvTable table;
  table.columns = {"kind",      "reference", "estimate",  "permutation",     "snr_db", "si_sdr_db",
                   "sd_sdr_db", "si_sir_db", "si_sar_db", "min_snr_sdsdr_db"};
  std::vector<std::vector<double>> finite(6);
  for (std::size_t r = 0; r < k; ++r) {
    const metrics::MetricReport& rep = result.reports[r];
    io::CsvRecord row{{"kind", std::string("pair")},
                      {"reference", ref_files[r]},
                      {"estimate", est_files[result.assignment[r]]},
                      {"permutation", permutation}};
    const io::CsvRecord fields = metric_fields(rep);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      row.push_back(fields[c]);
      const auto& v = fields[c].value;
      std::optional<double> x;
      if (const double* d = std::get_if<double>(&v)) x = *d;
      if (const auto* o = std::get_if<std::optional<double>>(&v)) x = *o;
      if (x && std::isfinite(*x)) finite[c].push_back(*x);
    }
    table.rows.push_back(std::move(row));
  }
  const std::vector<std::string> metric_columns(table.columns.begin() + 4, table.columns.end());
  for (const std::string kind : {"mean", "median"}) {
    io::CsvRecord row{{"kind", kind}, {"reference", std::string()}, {"estimate", std::string()},
                      {"permutation", permutation}};
    for (std::size_t c = 0; c < metric_columns.size(); ++c)
      row.push_back({metric_columns[c], kind == "mean" ? mean_of(finite[c]) : median_of(finite[c])});
    table.rows.push_back(std::move(row));
  }
  emit(table, a.out, out);
  return 0;
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  const experiments::ExperimentSpec spec = experiments::load_spec(a.spec);
  const experiments::ExperimentOutput result = experiments::run_experiment(spec, a.out_dir);
  out << result.summary << '\n';
  return 0;
}

double gap_db(double legacy_db, double si_sdr_db) {
  if (std::isinf(legacy_db) && legacy_db == si_sdr_db) return 0.0;
  return legacy_db - si_sdr_db;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  SignalSet set;
  set.add(a.ref);
  for (const auto& e : a.ests) set.add(e);
  set.align(a.truncate);
  if (a.zero_mean) set.center();

  const auto& ref = set.samples[0];
  const legacy::FirProjector projector(ref, {}, legacy::FirProjectionConfig{a.legacy_taps});
  io::CsvTable table;
  table.columns = {"estimate", "snr_db", "si_sdr_db", "sd_sdr_db", "sdr_legacy_db", "gap_db", "warn"};
  table.rows.resize(a.ests.size());
  parallel_for(a.ests.size(), [&](std::size_t i) {
    const auto& est = set.samples[i + 1];
    const metrics::MetricReport rep = metrics::evaluate(ref, {}, est);
    const double legacy_db = legacy::legacy_sdr(projector.project(est));
    const double gap = gap_db(legacy_db, rep.si_sdr_db);
    table.rows[i] = {{"estimate", a.ests[i]},
                     {"snr_db", rep.snr_db},
                     {"si_sdr_db", rep.si_sdr_db},
                     {"sd_sdr_db", rep.sd_sdr_db},
                     {"sdr_legacy_db", legacy_db},
                     {"gap_db", gap},
                     {"warn", std::string(gap > a.threshold ? "WARN" : "")}};
  });
  emit(table, a.out, out);
  return 0;
}

int cmd_fixture(const FixtureArgs& a) {
  experiments::SpeechFixtureConfig cfg;
  cfg.seed = a.seed;
  cfg.duration_s = a.duration_s;
  cfg.sample_rate_hz = a.sample_rate_hz;
  io::write_wav(Signal(experiments::make_speech_fixture(cfg), a.sample_rate_hz), a.out);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scale-aware and legacy source separation metrics"};
  app.name("sepmetrics");
  app.require_subcommand(1);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score one estimate against one reference");
  eval_cmd->add_option("--ref", eval.ref, "Reference WAV")->required();
  eval_cmd->add_option("--est", eval.est, "Estimate WAV")->required();
  eval_cmd->add_option("--interf", eval.interf, "Interfering source WAV (repeatable)");
  eval_cmd->add_flag("--zero-mean", eval.zero_mean, "Remove each signal's mean first");
  eval_cmd->add_flag("--truncate", eval.truncate, "Cut all signals to the shortest length");
  eval_cmd->add_option("--legacy-taps", eval.legacy_taps, "Also report legacy SDR/SIR/SAR with this FIR length")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval.out, "Output CSV (default: stdout)");

  EvalSetArgs set;
  auto* set_cmd = app.add_subcommand("eval-set", "Score matched sets of references and estimates");
  set_cmd->add_option("--refs", set.refs, "Directory or glob of reference WAVs")->required();
  set_cmd->add_option("--ests", set.ests, "Directory or glob of estimate WAVs")->required();
  set_cmd->add_flag("--permute", set.permute, "Search for the best reference/estimate pairing");
  set_cmd->add_option("--metric", set.metric, "Metric maximized by --permute")
      ->check(CLI::IsMember({"si-sdr", "snr", "sd-sdr"}));
  set_cmd->add_flag("--zero-mean", set.zero_mean, "Remove each signal's mean first");
  set_cmd->add_flag("--truncate", set.truncate, "Cut all signals to the shortest length");
  set_cmd->add_option("--out", set.out, "Output CSV (default: stdout)");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment described by a JSON spec");
  exp_cmd->add_option("--spec", exp.spec, "Experiment spec (JSON)")->required();
  exp_cmd->add_option("--out-dir", exp.out_dir, "Directory for the CSV outputs")->required();

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Flag estimates whose legacy SDR far exceeds SI-SDR");
  cmp_cmd->add_option("--ref", cmp.ref, "Reference WAV")->required();
  cmp_cmd->add_option("--est", cmp.ests, "Estimate WAV (repeatable)")->required();
  cmp_cmd->add_option("--threshold", cmp.threshold, "WARN when legacy SDR - SI-SDR exceeds this (dB)");
  cmp_cmd->add_option("--legacy-taps", cmp.legacy_taps, "Legacy FIR length")->check(CLI::PositiveNumber);
  cmp_cmd->add_flag("--zero-mean", cmp.zero_mean, "Remove each signal's mean first");
  cmp_cmd->add_flag("--truncate", cmp.truncate, "Cut all signals to the shortest length");
  cmp_cmd->add_option("--out", cmp.out, "Output CSV (default: stdout)");

  FixtureArgs fix;
  auto* fix_cmd = app.add_subcommand("fixture", "Write the built-in synthetic speech fixture");
  fix_cmd->add_option("--out", fix.out, "Output WAV (32-bit float)")->required();
  fix_cmd->add_option("--seed", fix.seed, "Generator seed");
  fix_cmd->add_option("--duration", fix.duration_s, "Length in seconds")->check(CLI::PositiveNumber);
  fix_cmd->add_option("--rate", fix.sample_rate_hz, "Sample rate in Hz")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*set_cmd) return cmd_eval_set(set, out);
    if (*exp_cmd) return cmd_experiment(exp, out);
    if (*cmp_cmd) return cmd_compare(cmp, out);
    if (*fix_cmd) return cmd_fixture(fix);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace sepmetrics::cli
