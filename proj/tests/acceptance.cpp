// Acceptance suite: one PASS/FAIL line per criterion with wall time.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sepmetrics/adversary.hpp"
#include "sepmetrics/experiments.hpp"
#include "sepmetrics/fixture.hpp"
#include "sepmetrics/legacy_bss.hpp"
#include "sepmetrics/metrics.hpp"
#include "sepmetrics/noise.hpp"
#include "sepmetrics/stft.hpp"

using namespace sepmetrics;
using experiments::CurveRow;
using experiments::ExperimentKind;
using experiments::ExperimentSpec;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double db(double r) { return 10.0 * std::log10(r); }

std::vector<double> column(const std::vector<CurveRow>& rows, double CurveRow::*field) {
  std::vector<double> out;
  for (const CurveRow& r : rows) out.push_back(r.*field);
  return out;
}

// Largest rise between consecutive entries.
double worst_rise(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::isinf(v[i]) && v[i] < 0) continue;
    worst = std::max(worst, v[i] - v[i - 1]);
  }
  return worst;
}

std::vector<double> fir(const std::vector<double>& h, const std::vector<double>& x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t t = 0; t < x.size(); ++t)
    for (std::size_t k = 0; k < h.size() && k <= t; ++k) y[t] += h[k] * x[t - k];
  return y;
}

void criterion1(Verdict& v) {
  const std::vector<double> s{3, 4}, est{2, 6};
  // Exact rationals: |s|^2 = 25, |s - est|^2 = 5, alpha = 30/25, |alpha s|^2 = 36, |alpha s - est|^2 = 4.
  const double snr = metrics::snr(s, est), si = metrics::si_sdr(s, est), sd = metrics::sd_sdr(s, est);
  v.detail << "snr=" << snr << " si_sdr=" << si << " sd_sdr=" << sd;
  v.require(std::abs(snr - 6.9897) < 1e-4 && std::abs(snr - db(25.0 / 5.0)) < 1e-6, "SNR");
  v.require(std::abs(si - 9.5424) < 1e-4 && std::abs(si - db(36.0 / 4.0)) < 1e-6, "SI-SDR");
  v.require(std::abs(sd - 8.5733) < 1e-4 && std::abs(sd - db(36.0 / 5.0)) < 1e-6, "SD-SDR");
}

void criterion2(Verdict& v) {
  const auto rows = experiments::run_rescale_sweep(ExperimentSpec::defaults(ExperimentKind::kRescaleSweep));
  double snr_half = NAN, snr_one = NAN, si_lo = INFINITY, si_hi = -INFINITY;
  for (const CurveRow& r : rows) {
    if (std::abs(r.x - 0.5) < 1e-12) snr_half = r.snr_db;
    if (std::abs(r.x - 1.0) < 1e-12) snr_one = r.snr_db;
    si_lo = std::min(si_lo, r.si_sdr_db);
    si_hi = std::max(si_hi, r.si_sdr_db);
  }
  const double gain = snr_half - snr_one;
  v.detail << "snr(x/2)-snr(x)=" << gain << " dB, si_sdr spread=" << si_hi - si_lo << " dB";
  v.require(std::abs(gain - 3.0103) <= 1e-3, "SNR gain");
  v.require(si_hi - si_lo <= 1e-9, "SI-SDR constant");
}

void criterion3(Verdict& v) {
  const auto rows = experiments::run_rescale_sweep(ExperimentSpec::defaults(ExperimentKind::kRescaleSweep));
  double worst = 0.0, at100 = NAN;
  std::vector<double> sd;
  for (const CurveRow& r : rows) {
    const double mu = r.x;
    sd.push_back(r.sd_sdr_db);
    if (mu <= 5.0 + 1e-12) worst = std::max(worst, std::abs(r.sd_sdr_db - db(mu * mu / ((1 - mu) * (1 - mu) + mu * mu))));
    if (std::abs(mu - 100.0) < 1e-9) at100 = r.sd_sdr_db;
  }
  const double best_mu = rows[experiments::argmax(sd)].x;
  v.detail << "max |sd - closed form|=" << worst << " dB, argmax mu=" << best_mu << ", sd(100)=" << at100 << " dB";
  v.require(worst <= 1e-9, "closed form");
  v.require(std::abs(best_mu - 1.0) < 1e-9, "argmax");
  v.require(std::abs(at100 + 3.0103) <= 0.01, "asymptote at mu=100");
}

void criterion4(Verdict& v) {
  dsp::GaussianNoise rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 64 + static_cast<std::size_t>(rng.uniform() * 2000);
    const auto s = dsp::white_noise(n, 3 * trial + 1);
    const std::vector<std::vector<double>> interf{dsp::white_noise(n, 3 * trial + 2)};
    auto est = dsp::white_noise(n, 3 * trial + 3);
    const double a = rng(), b = rng(), c = 0.3 * rng();
    for (std::size_t i = 0; i < n; ++i) est[i] = a * s[i] + b * interf[0][i] + c * est[i];
    const metrics::Decomposition d = metrics::decompose(s, interf, est);
    const double lhs = std::pow(10.0, -metrics::si_sdr(s, est) / 10.0);
    const double rhs = std::pow(10.0, -metrics::si_sir(d) / 10.0) + std::pow(10.0, -metrics::si_sar(d) / 10.0);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  v.detail << "max relative error=" << worst;
  v.require(worst <= 1e-9, "identity");
}

void criterion5(Verdict& v) {
  const auto s = dsp::white_noise(16000, 5);
  const auto est = fir(dsp::white_noise(100, 6), s);
  const double legacy = legacy::legacy_sdr(legacy::fir_project(est, s, {}, {512}));
  const double si = metrics::si_sdr(s, est);
  v.detail << "legacy sdr=" << legacy << " dB, si_sdr=" << si << " dB";
  v.require(legacy >= 40.0, "legacy >= 40 dB");
  v.require(legacy - si >= 20.0, "gap >= 20 dB");
}

void criterion6(Verdict& v) {
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto s = dsp::white_noise(1000 + 10 * k, 2 * k + 100);
    auto est = dsp::white_noise(s.size(), 2 * k + 101);
    const double mix = 0.1 + 0.02 * static_cast<double>(k);
    for (std::size_t i = 0; i < s.size(); ++i) est[i] = s[i] + mix * est[i];
    const double legacy = legacy::legacy_sdr(legacy::fir_project(est, s, {}, {1}));
    worst = std::max(worst, std::abs(legacy - metrics::si_sdr(s, est)));
  }
  v.detail << "max |legacy - si_sdr|=" << worst << " dB";
  v.require(worst <= 1e-9, "bridge");
}

void criterion7(Verdict& v) {
  const ExperimentSpec spec = ExperimentSpec::defaults(ExperimentKind::kAdversarial);
  const auto run = experiments::run_adversarial(spec);
  const double si = run.result.final_si_sdr_db, legacy = run.result.final_legacy_sdr_db;

  const auto clean = experiments::make_speech_fixture();
  const adversary::MaskingProblem problem(clean, spec.stft);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto w = dsp::white_noise(problem.bins(), 700 + seed);
    for (double& x : w) x *= 2.0;
    const auto g = problem.gradient(w);
    double num = 0.0, den = 0.0;
    for (std::size_t f = 0; f < w.size(); ++f) {
      auto plus = w, minus = w;
      plus[f] += h;
      minus[f] -= h;
      const double fd = (problem.objective(plus) - problem.objective(minus)) / (2.0 * h);
      num += (fd - g[f]) * (fd - g[f]);
      den += fd * fd;
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  v.detail << "final si_sdr=" << si << " dB, legacy sdr=" << legacy << " dB, gap=" << legacy - si
           << " dB, gradient rel err=" << worst;
  v.require(si < 0.0, "SI-SDR < 0");
  v.require(legacy - si >= 10.0, "gap >= 10 dB");
  v.require(worst < 1e-4, "gradient check");
}

void criterion8(Verdict& v) {
  const auto rows =
      experiments::run_progressive_deletion(ExperimentSpec::defaults(ExperimentKind::kProgressiveDeletion));
  const double snr = worst_rise(column(rows, &CurveRow::snr_db));
  const double si = worst_rise(column(rows, &CurveRow::si_sdr_db));
  const double sd = worst_rise(column(rows, &CurveRow::sd_sdr_db));
  double gap = -INFINITY;
  for (const CurveRow& r : rows)
    if (r.x >= 0.2 - 1e-12 && r.x <= 0.8 + 1e-12) gap = std::max(gap, r.sdr_legacy_db - r.si_sdr_db);
  v.detail << "worst rise snr=" << snr << " si=" << si << " sd=" << sd << " dB, max gap in [0.2,0.8]=" << gap
           << " dB";
  v.require(snr <= 0.05 && si <= 0.05 && sd <= 0.05, "monotone");
  v.require(gap >= 5.0, "gap >= 5 dB");
}

void criterion9(Verdict& v) {
  const auto rows = experiments::run_bandstop_sweep(ExperimentSpec::defaults(ExperimentKind::kBandstopSweep));
  const double snr_peak = rows[experiments::argmax(column(rows, &CurveRow::snr_db))].x;
  const double si_peak = rows[experiments::argmax(column(rows, &CurveRow::si_sdr_db))].x;
  const double sd_peak = rows[experiments::argmax(column(rows, &CurveRow::sd_sdr_db))].x;
  const double legacy_rise = worst_rise(column(rows, &CurveRow::sdr_legacy_db));
  v.detail << "argmax gain snr=" << snr_peak << " si=" << si_peak << " sd=" << sd_peak
           << ", legacy worst rise=" << legacy_rise << " dB";
  v.require(snr_peak >= 0.4 - 1e-12 && snr_peak <= 0.6 + 1e-12, "SNR peak in [0.4,0.6]");
  v.require(si_peak >= 0.4 - 1e-12 && si_peak <= 0.6 + 1e-12, "SI-SDR peak in [0.4,0.6]");
  v.require(legacy_rise <= 0.05, "legacy monotone");
  v.require(sd_peak >= si_peak, "SD-SDR peak >= SI-SDR peak");
}

void criterion10(Verdict& v) {
  const dsp::StftConfig cfg;
  dsp::GaussianNoise rng(10);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 512 + static_cast<std::size_t>(rng.uniform() * 40000);
    const auto x = dsp::white_noise(n, 1000 + k);
    const auto y = dsp::istft(dsp::stft(x, cfg));
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err += (y[i] - x[i]) * (y[i] - x[i]);
      ref += x[i] * x[i];
    }
    worst = std::max(worst, std::sqrt(err / ref));
  }
  v.detail << "max relative error=" << worst;
  v.require(worst <= 1e-8, "round trip");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion11(Verdict& v) {
  const auto root = std::filesystem::temp_directory_path() /
                    ("sepmetrics_acceptance_" + std::to_string(std::random_device{}()));
  std::size_t compared = 0;
  for (ExperimentKind kind : {ExperimentKind::kRescaleSweep, ExperimentKind::kProgressiveDeletion,
                              ExperimentKind::kBandstopSweep, ExperimentKind::kAdversarial}) {
    const ExperimentSpec spec = ExperimentSpec::defaults(kind);
    const auto a = experiments::run_experiment(spec, root / "a");
    const auto b = experiments::run_experiment(spec, root / "b");
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      ++compared;
      v.require(slurp(a.files[i]) == slurp(b.files[i]), a.files[i].filename().string());
    }
  }
  std::filesystem::remove_all(root);
  v.detail << compared << " CSV pairs compared";
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: unbounded
  std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form metric oracle", 1.0, criterion1},
      {2, "SNR rescaling gain", 1.0, criterion2},
      {3, "SD-SDR rescale curve", 1.0, criterion3},
      {4, "SI-SIR/SI-SAR identity", 5.0, criterion4},
      {5, "legacy FIR forgiveness", 10.0, criterion5},
      {6, "single-tap legacy equals SI-SDR", 5.0, criterion6},
      {7, "adversarial mask gap", 120.0, criterion7},
      {8, "progressive deletion", 60.0, criterion8},
      {9, "bandstop sweep", 60.0, criterion9},
      {10, "STFT round trip", 5.0, criterion10},
      {11, "determinism", 0.0, criterion11},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) v.require(false, "runtime budget");
    if (!v.pass) ++failures;
    std::printf("%s criterion %d: %s (%.3f s) %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
