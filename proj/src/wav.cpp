// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace dasp {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatIeeeFloat = 3;
constexpr Index kMaxChannels = 8;

template <typename T>
void write_le(std::ostream& os, T value) {
  // Little-endian host assumed (x86/arm); bytes written in memory order.
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

WavFormat wav_format_from_string(const std::string& name) {
  if (name == "pcm16") return WavFormat::Pcm16;
  if (name == "float32") return WavFormat::Float32;
  if (name == "float64") return WavFormat::Float64;
  throw InvalidArgument("unknown wav format '" + name +
                        "' (expected pcm16, float32 or float64)");
}

std::string to_string(WavFormat f) {
  switch (f) {
    case WavFormat::Pcm16: return "pcm16";
    case WavFormat::Float32: return "float32";
    case WavFormat::Float64: return "float64";
  }
  return "?";
}

MultichannelSignal read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open wav file: " + path);

  char tag[4];
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "RIFF", 4) != 0)
    throw DataError("not a RIFF file: " + path);
  read_le<uint32_t>(is);  // riff size, unused
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "WAVE", 4) != 0)
    throw DataError("not a WAVE file: " + path);

  uint16_t format_code = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  std::vector<char> data;
  bool have_fmt = false, have_data = false;

  while (is.read(tag, 4)) {
    const uint32_t chunk_size = read_le<uint32_t>(is);
    if (!is) break;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format_code = read_le<uint16_t>(is);
      channels = read_le<uint16_t>(is);
      sample_rate = read_le<uint32_t>(is);
      read_le<uint32_t>(is);  // byte rate
      read_le<uint16_t>(is);  // block align
      bits = read_le<uint16_t>(is);
      if (chunk_size > 16) is.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data.resize(chunk_size);
      is.read(data.data(), chunk_size);
      if (static_cast<uint32_t>(is.gcount()) != chunk_size)
        throw DataError("truncated wav data chunk: " + path);
      have_data = true;
    } else {
      is.ignore(chunk_size + (chunk_size & 1));
    }
  }
  if (!have_fmt || !have_data) throw DataError("missing fmt/data chunk: " + path);
  if (channels < 1 || channels > kMaxChannels)
    throw DataError("unsupported channel count " + std::to_string(channels) + ": " + path);

  const bool pcm16 = format_code == kFormatPcm && bits == 16;
  const bool f32 = format_code == kFormatIeeeFloat && bits == 32;
  const bool f64 = format_code == kFormatIeeeFloat && bits == 64;
  if (!pcm16 && !f32 && !f64)
    throw DataError("unsupported wav encoding (format " + std::to_string(format_code) +
                    ", " + std::to_string(bits) + " bit): " + path);

  const Index bytes_per_sample = bits / 8;
  const Index frames = static_cast<Index>(data.size()) / (bytes_per_sample * channels);

  MultichannelSignal out = MultichannelSignal::zeros(frames, channels, sample_rate);
  const char* p = data.data();
  for (Index n = 0; n < frames; ++n) {
    for (Index m = 0; m < channels; ++m) {
      Scalar v = 0.0;
      if (pcm16) {
        int16_t s;
        std::memcpy(&s, p, 2);
        v = static_cast<Scalar>(s) / 32768.0;
      } else if (f32) {
        float s;
        std::memcpy(&s, p, 4);
        v = s;
      } else {
        double s;
        std::memcpy(&s, p, 8);
        v = s;
      }
      out.samples(n, m) = v;
      p += bytes_per_sample;
    }
  }
  return out;
}

void write_wav(const std::string& path, const MultichannelSignal& signal,
               WavFormat format) {
  if (signal.channel_count() < 1 || signal.channel_count() > kMaxChannels)
    throw DataError("wav write supports 1..8 channels, got " +
                    std::to_string(signal.channel_count()));
  if (signal.sample_rate <= 0) throw DataError("wav write: sample rate not set");

  const uint16_t channels = static_cast<uint16_t>(signal.channel_count());
  const uint16_t bits = format == WavFormat::Pcm16 ? 16 : format == WavFormat::Float32 ? 32 : 64;
  const uint16_t code = format == WavFormat::Pcm16 ? kFormatPcm : kFormatIeeeFloat;
  const uint32_t rate = static_cast<uint32_t>(std::lround(signal.sample_rate));
  const uint32_t block_align = channels * bits / 8;
  const uint32_t data_size = static_cast<uint32_t>(signal.length()) * block_align;

  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot create wav file: " + path);

  os.write("RIFF", 4);
  write_le<uint32_t>(os, 36 + data_size);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  write_le<uint32_t>(os, 16);
  write_le<uint16_t>(os, code);
  write_le<uint16_t>(os, channels);
  write_le<uint32_t>(os, rate);
  write_le<uint32_t>(os, rate * block_align);
  write_le<uint16_t>(os, static_cast<uint16_t>(block_align));
  write_le<uint16_t>(os, bits);
  os.write("data", 4);
  write_le<uint32_t>(os, data_size);

  for (Index n = 0; n < signal.length(); ++n) {
    for (Index m = 0; m < channels; ++m) {
      const Scalar v = signal.samples(n, m);
      if (format == WavFormat::Pcm16) {
        const long q = std::lrint(v * 32768.0);
        write_le<int16_t>(os, static_cast<int16_t>(std::clamp<long>(q, -32768, 32767)));
      } else if (format == WavFormat::Float32) {
        write_le<float>(os, static_cast<float>(v));
      } else {
        write_le<double>(os, v);
      }
    }
  }
  if (!os) throw DataError("wav write failed: " + path);
}

}  // namespace dasp
