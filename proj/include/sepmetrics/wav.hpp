#pragma once

#include <filesystem>

#include "sepmetrics/signal.hpp"

namespace sepmetrics::io {

/// Reads one channel of a RIFF/WAVE file.
///
/// Supported payloads are 16-bit integer PCM (scaled by 1/32768) and 32-bit
/// IEEE float, including WAVE_FORMAT_EXTENSIBLE wrappers of either. Any other
/// encoding raises FormatError; a file without samples raises
/// EmptySignalError; an out-of-range channel raises FormatError.
[[nodiscard]] Signal read_wav(const std::filesystem::path& path, int channel = 0);

/// Writes a mono 32-bit float WAV. Samples are stored as-is (no clipping);
/// values that are exactly representable in binary32 round-trip bit-exactly.
void write_wav(const Signal& signal, const std::filesystem::path& path);

}  // namespace sepmetrics::io
