#include "sepmetrics/wav.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "sepmetrics/errors.hpp"

namespace sepmetrics::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T load(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void store(std::vector<std::uint8_t>& out, T v) {
  std::array<std::uint8_t, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &v, sizeof(T));
  out.insert(out.end(), bytes.begin(), bytes.end());
}

void store_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

Signal read_wav(const std::filesystem::path& path, int channel) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  const std::string where = "'" + path.string() + "': ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(where + "not a RIFF/WAVE file");
  }

  std::optional<FormatChunk> fmt;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = load<std::uint32_t>(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) throw FormatError(where + "truncated fmt chunk");
      FormatChunk f;
      f.format = load<std::uint16_t>(chunk + 8);
      f.channels = load<std::uint16_t>(chunk + 10);
      f.sample_rate = load<std::uint32_t>(chunk + 12);
      f.block_align = load<std::uint16_t>(chunk + 20);
      f.bits = load<std::uint16_t>(chunk + 22);
      if (f.format == kFormatExtensible) {
        if (size < 40) throw FormatError(where + "truncated WAVE_FORMAT_EXTENSIBLE header");
        // First two bytes of the subformat GUID carry the format tag.
        f.format = load<std::uint16_t>(chunk + 8 + 24);
      }
      fmt = f;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Streaming writers sometimes leave the size unset; clamp to the file.
      data_size = std::min<std::size_t>(size, available);
    }
    pos = body + size + (size & 1u);
  }

  if (!fmt) throw FormatError(where + "missing fmt chunk");
  if (data == nullptr) throw FormatError(where + "missing data chunk");
  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
  const bool float32 = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !float32) {
    throw FormatError(where + "unsupported encoding (format " + std::to_string(fmt->format) +
                      ", " + std::to_string(fmt->bits) +
                      " bits); only 16-bit PCM and 32-bit float are read");
  }
  if (fmt->channels == 0) throw FormatError(where + "zero channels");
  if (fmt->sample_rate == 0) throw FormatError(where + "zero sample rate");
  if (channel < 0 || channel >= fmt->channels) {
    throw FormatError(where + "channel " + std::to_string(channel) + " out of range (file has " +
                      std::to_string(fmt->channels) + ")");
  }

  const std::size_t sample_bytes = fmt->bits / 8;
  const std::size_t frame_bytes = sample_bytes * fmt->channels;
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) throw EmptySignalError(where + "no audio frames");

  std::vector<double> samples(frames);
  const std::size_t offset = sample_bytes * static_cast<std::size_t>(channel);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* p = data + i * frame_bytes + offset;
    if (pcm16) {
      samples[i] = static_cast<double>(load<std::int16_t>(p)) / 32768.0;
    } else {
      const float v = load<float>(p);
      if (!std::isfinite(v)) {
        throw FormatError(where + "non-finite float sample at frame " + std::to_string(i));
      }
      samples[i] = static_cast<double>(v);
    }
  }
  return Signal(std::move(samples), static_cast<int>(fmt->sample_rate));
}

void write_wav(const Signal& signal, const std::filesystem::path& path) {
  const auto n = static_cast<std::uint32_t>(signal.size());
  const std::uint32_t data_bytes = n * 4u;
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  store_tag(out, "RIFF");
  store<std::uint32_t>(out, 36u + data_bytes);
  store_tag(out, "WAVE");
  store_tag(out, "fmt ");
  store<std::uint32_t>(out, 16);
  store<std::uint16_t>(out, kFormatFloat);
  store<std::uint16_t>(out, 1);
  store<std::uint32_t>(out, static_cast<std::uint32_t>(signal.sample_rate_hz()));
  store<std::uint32_t>(out, static_cast<std::uint32_t>(signal.sample_rate_hz()) * 4u);
  store<std::uint16_t>(out, 4);
  store<std::uint16_t>(out, 32);
  store_tag(out, "data");
  store<std::uint32_t>(out, data_bytes);
  for (double v : signal.samples()) store<float>(out, static_cast<float>(v));

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace sepmetrics::io
