// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/stft.hpp"

#include <algorithm>
#include <cmath>

#include "dasp/fft.hpp"

namespace dasp {

Window window_from_string(const std::string& name) {
  if (name == "sqrt-hann") return Window::SqrtHann;
  if (name == "hann") return Window::Hann;
  if (name == "rect") return Window::Rect;
  throw InvalidArgument("unknown window '" + name +
                        "' (expected sqrt-hann, hann or rect)");
}

std::string to_string(Window w) {
  switch (w) {
    case Window::SqrtHann: return "sqrt-hann";
    case Window::Hann: return "hann";
    case Window::Rect: return "rect";
  }
  return "?";
}

Vec make_window(Window w, Index length) {
  Vec win(length);
  for (Index n = 0; n < length; ++n) {
    const Scalar hann =
        0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<Scalar>(n) / static_cast<Scalar>(length));
    switch (w) {
      case Window::SqrtHann: win[n] = std::sqrt(hann); break;
      case Window::Hann: win[n] = hann; break;
      case Window::Rect: win[n] = 1.0; break;
    }
  }
  return win;
}

namespace {

Vec synthesis_window(const StftConfig& cfg) {
  // sqrt-hann forms a WOLA pair with itself; hann and rect resynthesize with
  // a flat window and rely on the overlap-add normalization.
  if (cfg.window == Window::SqrtHann) return make_window(Window::SqrtHann, cfg.frame_length);
  return Vec::Ones(cfg.frame_length);
}

// Per-sample overlap-add normalizer sum_l wa[n - lH] ws[n - lH] over one hop
// period of the interior.
Vec cola_profile(const Vec& wa, const Vec& ws, Index hop) {
  Vec profile = Vec::Zero(hop);
  for (Index n = 0; n < hop; ++n)
    for (Index j = n; j < wa.size(); j += hop) profile[n] += wa[j] * ws[j];
  return profile;
}

}  // namespace

void StftConfig::validate() const {
  if (frame_length <= 0) throw InvalidArgument("stft frame_length must be positive");
  if (hop_length <= 0 || hop_length > frame_length)
    throw InvalidArgument("stft hop_length must be in [1, frame_length]");
  if (fft_size < frame_length)
    throw InvalidArgument("stft fft_size must be >= frame_length");
  if (!Fft::is_power_of_two(fft_size))
    throw InvalidArgument("stft fft_size must be a power of two");
  if (sample_rate <= 0) throw InvalidArgument("stft sample_rate must be positive");

  const Vec wa = make_window(window, frame_length);
  const Vec profile = cola_profile(wa, synthesis_window(*this), hop_length);
  const Scalar lo = profile.minCoeff();
  const Scalar hi = profile.maxCoeff();
  if (lo <= 0.0 || (hi - lo) > 1e-6 * hi)
    throw InvalidArgument("window '" + to_string(window) + "' with hop " +
                          std::to_string(hop_length) + "/" + std::to_string(frame_length) +
                          " does not satisfy constant overlap-add");
}

MultichannelSignal MultichannelSignal::zeros(Index length, Index channels,
                                             Scalar sample_rate) {
  MultichannelSignal s;
  s.samples = Mat::Zero(length, channels);
  s.sample_rate = sample_rate;
  return s;
}

MultichannelSignal MultichannelSignal::from_mono(Vec mono, Scalar sample_rate) {
  MultichannelSignal s;
  s.samples = std::move(mono);
  s.sample_rate = sample_rate;
  return s;
}

namespace {

Index frame_count(Index length, const StftConfig& cfg) {
  if (length < cfg.frame_length) return 0;
  const Index tail = length - cfg.frame_length;
  return 1 + (tail + cfg.hop_length - 1) / cfg.hop_length;
}

}  // namespace

SpectrogramTensor analyze(const MultichannelSignal& signal, const StftConfig& cfg) {
  cfg.validate();
  if (signal.channel_count() < 1) throw InvalidArgument("analyze: no channels");
  if (signal.length() < cfg.frame_length)
    throw DataError("analyze: signal shorter than one frame (" +
                    std::to_string(signal.length()) + " < " +
                    std::to_string(cfg.frame_length) + " samples)");
  if (!signal.samples.allFinite())
    throw DataError("analyze: input contains non-finite samples");

  const Index frames = frame_count(signal.length(), cfg);
  const Index bins = cfg.bins();
  const Vec window = make_window(cfg.window, cfg.frame_length);
  const Fft fft(cfg.fft_size);

  SpectrogramTensor out;
  out.sample_rate = signal.sample_rate;
  out.channels.reserve(signal.channel_count());

  std::vector<Complex> buf(cfg.fft_size);
  for (Index m = 0; m < signal.channel_count(); ++m) {
    CMat spec(bins, frames);
    const auto x = signal.channel(m);
    for (Index l = 0; l < frames; ++l) {
      const Index start = l * cfg.hop_length;
      for (Index n = 0; n < cfg.frame_length; ++n) {
        const Index idx = start + n;
        const Scalar v = idx < signal.length() ? x[idx] : 0.0;
        buf[n] = Complex(window[n] * v, 0.0);
      }
      std::fill(buf.begin() + cfg.frame_length, buf.end(), Complex(0.0, 0.0));
      fft.analysis(buf);
      for (Index k = 0; k < bins; ++k) spec(k, l) = buf[k];
    }
    out.channels.push_back(std::move(spec));
  }
  return out;
}

MultichannelSignal synthesize(const SpectrogramTensor& spec, const StftConfig& cfg,
                              Index length) {
  cfg.validate();
  if (spec.channel_count() < 1) throw DataError("synthesize: empty tensor");
  if (spec.bins() != cfg.bins())
    throw DataError("synthesize: tensor has " + std::to_string(spec.bins()) +
                    " bins, config expects " + std::to_string(cfg.bins()));
  for (const CMat& ch : spec.channels)
    if (ch.rows() != spec.bins() || ch.cols() != spec.frames())
      throw DataError("synthesize: inconsistent channel dimensions");

  const Index frames = spec.frames();
  const Index span = (frames - 1) * cfg.hop_length + cfg.frame_length;
  const Index out_length = length < 0 ? span : length;
  const Vec ws = synthesis_window(cfg);
  const Vec wa = make_window(cfg.window, cfg.frame_length);
  const Fft fft(cfg.fft_size);

  // Overlap-add normalizer; near-zero entries (frame edges of tapered
  // windows) are emitted as silence.
  Vec norm = Vec::Zero(span);
  for (Index l = 0; l < frames; ++l)
    for (Index n = 0; n < cfg.frame_length; ++n)
      norm[l * cfg.hop_length + n] += wa[n] * ws[n];

  MultichannelSignal out = MultichannelSignal::zeros(out_length, spec.channel_count(),
                                                     spec.sample_rate);
  std::vector<Complex> buf(cfg.fft_size);
  for (Index m = 0; m < spec.channel_count(); ++m) {
    Vec acc = Vec::Zero(span);
    const CMat& ch = spec.channels[m];
    for (Index l = 0; l < frames; ++l) {
      buf[0] = ch(0, l);
      buf[cfg.fft_size / 2] = ch(cfg.fft_size / 2, l);
      for (Index k = 1; k < cfg.fft_size / 2; ++k) {
        buf[k] = ch(k, l);
        buf[cfg.fft_size - k] = std::conj(ch(k, l));
      }
      fft.synthesis(buf);
      const Index start = l * cfg.hop_length;
      for (Index n = 0; n < cfg.frame_length; ++n)
        acc[start + n] += ws[n] * buf[n].real();
    }
    for (Index n = 0; n < std::min(span, out_length); ++n)
      out.samples(n, m) = norm[n] > 1e-10 ? acc[n] / norm[n] : 0.0;
  }
  return out;
}

}  // namespace dasp
