#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sepmetrics/csv.hpp"
#include "sepmetrics/errors.hpp"
#include "sepmetrics/signal.hpp"
#include "sepmetrics/wav.hpp"
#include "test_support.hpp"

using namespace sepmetrics;
using testing_support::TempDir;
using testing_support::WavBuilder;

TEST(Signal, RejectsEmptyNonFiniteAndBadRate) {
  EXPECT_THROW(Signal({}, 16000), EmptySignalError);
  EXPECT_THROW(Signal({0.0, std::nan("")}, 16000), FormatError);
  EXPECT_THROW(Signal({std::numeric_limits<double>::infinity()}, 16000), FormatError);
  EXPECT_THROW(Signal({1.0}, 0), InvalidArgumentError);
  const Signal s({0.25, -0.5}, 8000);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.sample_rate_hz(), 8000);
  EXPECT_EQ(s[1], -0.5);
}

TEST(Signal, AlignLengths) {
  std::vector<double> a{1, 2, 3}, b{1, 2};
  EXPECT_THROW(align_lengths(a, b, LengthPolicy::kStrict), LengthMismatchError);
  align_lengths(a, b, LengthPolicy::kTruncate);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(a[1], 2.0);
}

TEST(Signal, RemoveMean) {
  const std::vector<double> x{1.0, 2.0, 6.0};
  const auto y = remove_mean(x);
  EXPECT_DOUBLE_EQ(y[0], -2.0);
  EXPECT_DOUBLE_EQ(y[1], -1.0);
  EXPECT_DOUBLE_EQ(y[2], 3.0);
}

TEST(Wav, Pcm16Scaling) {
  TempDir dir("wav");
  WavBuilder().format(1, 1, 16000, 16).pcm16({0, 16384, -32768}).write(dir / "a.wav");
  const Signal s = io::read_wav(dir / "a.wav");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_EQ(s[1], 0.5);
  EXPECT_EQ(s[2], -1.0);
  EXPECT_EQ(s.sample_rate_hz(), 16000);
}

TEST(Wav, StereoChannelSelection) {
  TempDir dir("wav");
  WavBuilder().format(1, 2, 8000, 16).pcm16({100, -200, 300, -400}).write(dir / "st.wav");
  const Signal left = io::read_wav(dir / "st.wav");
  const Signal right = io::read_wav(dir / "st.wav", 1);
  EXPECT_EQ(left[1], 300.0 / 32768.0);
  EXPECT_EQ(right[0], -200.0 / 32768.0);
  EXPECT_EQ(right[1], -400.0 / 32768.0);
  EXPECT_THROW((void)io::read_wav(dir / "st.wav", 2), FormatError);
}

TEST(Wav, UnsupportedEncodings) {
  TempDir dir("wav");
  WavBuilder().format(1, 1, 16000, 24).data({1, 2, 3, 4, 5, 6}).write(dir / "p24.wav");
  EXPECT_THROW((void)io::read_wav(dir / "p24.wav"), FormatError);
  WavBuilder().format(3, 1, 16000, 64).data(std::vector<std::uint8_t>(16, 0)).write(dir / "f64.wav");
  EXPECT_THROW((void)io::read_wav(dir / "f64.wav"), FormatError);
  std::ofstream(dir / "junk.wav") << "definitely not audio";
  EXPECT_THROW((void)io::read_wav(dir / "junk.wav"), FormatError);
}

TEST(Wav, EmptyAndMissing) {
  TempDir dir("wav");
  WavBuilder().format(1, 1, 16000, 16).pcm16({}).write(dir / "empty.wav");
  EXPECT_THROW((void)io::read_wav(dir / "empty.wav"), EmptySignalError);
  EXPECT_THROW((void)io::read_wav(dir / "missing.wav"), IoError);
}

TEST(Wav, ExtensibleAndExtraChunks) {
  TempDir dir("wav");
  WavBuilder()
      .format(1, 1, 44100, 32)
      .extensible(3)
      .extra_chunk("LIST", "odd")
      .float32({0.125f, -0.75f})
      .write(dir / "ext.wav");
  const Signal s = io::read_wav(dir / "ext.wav");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], 0.125);
  EXPECT_EQ(s[1], -0.75);
  EXPECT_EQ(s.sample_rate_hz(), 44100);
}

TEST(Wav, FloatRoundTripIsExact) {
  TempDir dir("wav");
  auto x = testing_support::randn(1000, 5);
  for (double& v : x) v = static_cast<float>(v * 0.3);  // float-representable payload
  x[10] = 1.5;                                           // above full scale, kept as-is
  io::write_wav(Signal(x, 22050), dir / "rt.wav");
  const Signal back = io::read_wav(dir / "rt.wav");
  EXPECT_EQ(back.vec(), x);
  EXPECT_EQ(back.sample_rate_hz(), 22050);
}

TEST(Wav, UnwritablePath) {
  TempDir dir("wav");
  EXPECT_THROW(io::write_wav(Signal({0.0}, 16000), dir / "no" / "such" / "dir.wav"), IoError);
}

TEST(Csv, FormatsRealsAndSentinels) {
  EXPECT_EQ(io::format_real(3.0103), "3.0103");
  EXPECT_EQ(io::format_real(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::format_real(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::format_real(std::nan("")), "nan");
  EXPECT_EQ(io::format_real(-0.0), "0");
  EXPECT_EQ(io::format_cell(std::optional<double>{}), "");
  EXPECT_EQ(io::format_cell(std::int64_t{42}), "42");
  EXPECT_EQ(io::format_cell(std::string("a,b")), "\"a,b\"");
}

TEST(Csv, OneRowAndHeaderOnly) {
  const auto table = io::CsvTable::from_records({{{"gain", 0.5}, {"snr_db", 3.0103}}});
  EXPECT_EQ(io::format_csv(table), "gain,snr_db\n0.5,3.0103\n");
  io::CsvTable empty;
  empty.columns = {"x", "y"};
  EXPECT_EQ(io::format_csv(empty), "x,y\n");
}

TEST(Csv, RejectsMismatchedRows) {
  io::CsvTable t;
  t.columns = {"a", "b"};
  t.rows.push_back({{"a", 1.0}});
  EXPECT_THROW((void)io::format_csv(t), InvalidArgumentError);
  t.rows = {{{"b", 1.0}, {"a", 2.0}}};
  EXPECT_THROW((void)io::format_csv(t), InvalidArgumentError);
}

TEST(Csv, WriteFileAndIoError) {
  TempDir dir("csv");
  const auto table = io::CsvTable::from_records({{{"si_sdr_db", std::numeric_limits<double>::infinity()}}});
  io::write_csv(table, dir / "t.csv");
  std::ifstream in(dir / "t.csv");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "si_sdr_db\ninf\n");
  EXPECT_THROW(io::write_csv(table, dir / "missing" / "t.csv"), IoError);
}
