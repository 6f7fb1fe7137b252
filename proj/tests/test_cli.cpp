#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "sepmetrics/adversary.hpp"
#include "sepmetrics/fixture.hpp"
#include "sepmetrics/signal.hpp"
#include "sepmetrics/wav.hpp"
#include "test_support.hpp"

using namespace sepmetrics;
using testing_support::TempDir;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

// In-process invocation.
Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "sepmetrics");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

// Runs the installed binary and returns its exit status.
int exec(const std::string& args) {
  const std::string cmd = std::string(SEPMETRICS_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const std::filesystem::path& p, const std::vector<double>& x) {
  io::write_wav(Signal(x, 16000), p);
}

std::vector<double> scaled(std::vector<double> x, double a) {
  for (double& v : x) v *= a;
  return x;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    s0 = testing_support::randn(4000, 1);
    s1 = testing_support::randn(4000, 2);
    for (auto* v : {&s0, &s1})
      for (double& x : *v) x = static_cast<float>(0.1 * x);
    write(dir / "s0.wav", s0);
    write(dir / "s1.wav", s1);
    write(dir / "half.wav", scaled(s0, 0.5));
    write(dir / "short.wav", std::vector<double>(s0.begin(), s0.begin() + 3000));
  }
  TempDir dir{"cli"};
  std::vector<double> s0, s1;
};

}  // namespace

TEST_F(Cli, EvalIdentityIsInfinite) {
  const Outcome o = call({"eval", "--ref", (dir / "s0.wav").string(), "--est", (dir / "s0.wav").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')),
            "reference,estimate,snr_db,si_sdr_db,sd_sdr_db,si_sir_db,si_sar_db,min_snr_sdsdr_db");
  EXPECT_NE(o.out.find(",inf,inf,inf,,,inf\n"), std::string::npos);
}

TEST_F(Cli, StdoutMatchesOutFile) {
  const std::vector<std::string> base{"eval",     "--ref",    (dir / "s0.wav").string(),
                                      "--est",    (dir / "half.wav").string(),
                                      "--interf", (dir / "s1.wav").string(),
                                      "--legacy-taps", "16"};
  const Outcome printed = call(base);
  ASSERT_EQ(printed.code, 0) << printed.err;
  auto to_file = base;
  to_file.insert(to_file.end(), {"--out", (dir / "eval.csv").string()});
  ASSERT_EQ(call(to_file).code, 0);
  EXPECT_EQ(printed.out, slurp(dir / "eval.csv"));
  EXPECT_NE(printed.out.find("sdr_legacy_db,sir_legacy_db,sar_legacy_db"), std::string::npos);
}

TEST_F(Cli, LengthMismatchAndTruncate) {
  const std::string ref = (dir / "s0.wav").string(), est = (dir / "short.wav").string();
  EXPECT_EQ(call({"eval", "--ref", ref, "--est", est}).code, 3);
  EXPECT_EQ(call({"eval", "--ref", ref, "--est", est, "--truncate"}).code, 0);
}

TEST_F(Cli, EvalSetPermutation) {
  std::filesystem::create_directories(dir / "refs");
  std::filesystem::create_directories(dir / "ests");
  write(dir / "refs" / "a.wav", s0);
  write(dir / "refs" / "b.wav", s1);
  write(dir / "ests" / "a.wav", s1);
  write(dir / "ests" / "b.wav", s0);
  const Outcome o = call({"eval-set", "--refs", (dir / "refs").string(), "--ests", (dir / "ests").string(),
                          "--permute"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("\"1,0\""), std::string::npos);
  EXPECT_NE(o.out.find("\nmean,"), std::string::npos);
  EXPECT_NE(o.out.find("\nmedian,"), std::string::npos);

  std::filesystem::remove(dir / "ests" / "b.wav");
  EXPECT_EQ(call({"eval-set", "--refs", (dir / "refs").string(), "--ests", (dir / "ests").string()}).code, 3);
}

TEST_F(Cli, CompareFlagsAdversarialEstimate) {
  const auto speech = experiments::make_speech_fixture({16000, 1.0, 1});
  adversary::AdversaryConfig cfg;
  cfg.iterations = 200;
  cfg.legacy_taps = 512;
  const auto result = adversary::optimize(speech, cfg);
  write(dir / "speech.wav", speech);
  write(dir / "masked.wav", result.masked_signal);
  const Outcome o = call({"compare", "--ref", (dir / "speech.wav").string(), "--est",
                          (dir / "speech.wav").string(), "--est", (dir / "masked.wav").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream lines(o.out);
  std::string header, same, masked;
  std::getline(lines, header);
  std::getline(lines, same);
  std::getline(lines, masked);
  EXPECT_EQ(header, "estimate,snr_db,si_sdr_db,sd_sdr_db,sdr_legacy_db,gap_db,warn");
  EXPECT_NE(same.find(",inf,inf,inf,inf,0,"), std::string::npos) << same;
  EXPECT_EQ(masked.substr(masked.size() - 5), ",WARN") << masked;
}

TEST_F(Cli, ExperimentWritesCsv) {
  std::ofstream(dir / "spec.json") << R"({"kind": "rescale-sweep", "mu": [0.5, 1.0], "length": 2000, "legacy_taps": 8})";
  const Outcome o =
      call({"experiment", "--spec", (dir / "spec.json").string(), "--out-dir", (dir / "out").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "rescale-sweep.csv"));
  EXPECT_EQ(o.out.rfind("rescale-sweep: ", 0), 0u);
}

TEST_F(Cli, FixtureRoundTrip) {
  ASSERT_EQ(call({"fixture", "--out", (dir / "fx.wav").string(), "--duration", "0.5"}).code, 0);
  const Signal fx = io::read_wav(dir / "fx.wav");
  EXPECT_EQ(fx.size(), 8000u);
  const auto ref = experiments::make_speech_fixture({16000, 0.5, 1});
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(fx[i], static_cast<float>(ref[i]));
}

TEST_F(Cli, BinaryExitCodes) {
  const std::string s0w = (dir / "s0.wav").string();
  EXPECT_EQ(exec("--help"), 0);
  EXPECT_EQ(exec(""), 2);
  EXPECT_EQ(exec("eval --ref " + s0w + " --est " + s0w), 0);
  EXPECT_EQ(exec("eval --ref " + s0w + " --est " + (dir / "missing.wav").string()), 2);
  EXPECT_EQ(exec("eval --ref " + s0w + " --est " + (dir / "short.wav").string()), 3);
  std::ofstream(dir / "bad.json") << R"({"kind": "bogus"})";
  EXPECT_EQ(exec("experiment --spec " + (dir / "bad.json").string() + " --out-dir " + (dir / "o").string()), 2);
  std::ofstream(dir / "noinput.json") << R"({"kind": "bandstop-sweep", "input": "/nonexistent/x.wav"})";
  EXPECT_EQ(exec("experiment --spec " + (dir / "noinput.json").string() + " --out-dir " + (dir / "o").string()), 2);
  const std::vector<double> silent(4000, 0.0);
  write(dir / "silent.wav", silent);
  EXPECT_EQ(exec("eval --ref " + (dir / "silent.wav").string() + " --est " + s0w), 3);
}
