// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_WAV_HPP
#define DASP_WAV_HPP

#include <string>

#include "dasp/stft.hpp"
#include "dasp/types.hpp"

namespace dasp {

enum class WavFormat { Pcm16, Float32, Float64 };

WavFormat wav_format_from_string(const std::string& name);
std::string to_string(WavFormat f);

/// Reads a RIFF/WAVE file: 16-bit PCM or IEEE float (32/64 bit), 1..8
/// channels, any sample rate. Samples are scaled to [-1, 1).
MultichannelSignal read_wav(const std::string& path);

/// Writes a RIFF/WAVE file. Pcm16 rounds and clips to 16 bits; the float
/// formats are lossless at their precision (Float64 exactly round-trips the
/// in-memory samples).
void write_wav(const std::string& path, const MultichannelSignal& signal,
               WavFormat format = WavFormat::Pcm16);

}  // namespace dasp

#endif  // DASP_WAV_HPP
