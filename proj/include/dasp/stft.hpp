// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_STFT_HPP
#define DASP_STFT_HPP

#include <string>
#include <vector>

#include "dasp/types.hpp"

namespace dasp {

enum class Window { SqrtHann, Hann, Rect };

Window window_from_string(const std::string& name);
std::string to_string(Window w);

/// Analysis/synthesis framing. sqrt-hann is applied on both sides (WOLA
/// pair); hann and rect are analysis-only windows with plain overlap-add.
/// Construction-time validation checks the overlap-add normalization is
/// constant over the interior, so any accepted configuration reconstructs
/// interior samples exactly.
struct StftConfig {
  Index frame_length = 512;
  Index hop_length = 256;
  Index fft_size = 512;
  Window window = Window::SqrtHann;
  Scalar sample_rate = 16000.0;

  Index bins() const { return fft_size / 2 + 1; }
  Scalar bin_hz(Index k) const {
    return static_cast<Scalar>(k) * sample_rate / static_cast<Scalar>(fft_size);
  }
  Scalar hop_seconds() const { return static_cast<Scalar>(hop_length) / sample_rate; }

  /// Throws InvalidArgument on bad sizes or a non-COLA window/hop pair.
  void validate() const;
};

Vec make_window(Window w, Index length);

/// Time-domain samples, one column per channel.
struct MultichannelSignal {
  Mat samples;  // length x channels
  Scalar sample_rate = 0.0;

  Index channel_count() const { return samples.cols(); }
  Index length() const { return samples.rows(); }
  auto channel(Index m) { return samples.col(m); }
  auto channel(Index m) const { return samples.col(m); }

  static MultichannelSignal zeros(Index length, Index channels, Scalar sample_rate);
  static MultichannelSignal from_mono(Vec mono, Scalar sample_rate);
};

/// One-sided complex STFT coefficients, one (bins x frames) matrix per
/// channel. bins = fft_size/2 + 1.
struct SpectrogramTensor {
  std::vector<CMat> channels;
  Scalar sample_rate = 0.0;

  Index channel_count() const { return static_cast<Index>(channels.size()); }
  Index frames() const { return channels.empty() ? 0 : channels.front().cols(); }
  Index bins() const { return channels.empty() ? 0 : channels.front().rows(); }
};

/// Frames, windows and transforms every channel. The tail is zero-padded so
/// the final partial frame is covered; with hop dividing (length -
/// frame_length) evenly the frame count is 1 + (length - frame_length)/hop.
SpectrogramTensor analyze(const MultichannelSignal& signal, const StftConfig& cfg);

/// Overlap-add inverse of analyze(). `length` trims or zero-pads the result;
/// pass a negative value to keep the full covered span.
MultichannelSignal synthesize(const SpectrogramTensor& spec, const StftConfig& cfg,
                              Index length = -1);

}  // namespace dasp

#endif  // DASP_STFT_HPP
