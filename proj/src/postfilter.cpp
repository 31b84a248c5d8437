// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/postfilter.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <iostream>
#include <limits>
#include <random>
#include <vector>

namespace dasp {

PostfilterKind postfilter_kind_from_string(const std::string& name) {
  if (name == "none") return PostfilterKind::None;
  if (name == "wiener") return PostfilterKind::Wiener;
  if (name == "external") return PostfilterKind::External;
  throw InvalidArgument("unknown postfilter '" + name +
                        "' (expected none, wiener or external)");
}

std::string to_string(PostfilterKind k) {
  switch (k) {
    case PostfilterKind::None: return "none";
    case PostfilterKind::Wiener: return "wiener";
    case PostfilterKind::External: return "external";
  }
  return "?";
}

void PostfilterSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("postfilter alpha must be in (0, 1)");
  if (gain_floor_db < -30.0 || gain_floor_db > 0.0)
    throw InvalidArgument("postfilter gain floor must be in [-30, 0] dB");
  if (kind == PostfilterKind::External && external_command.empty())
    throw InvalidArgument("postfilter kind=external requires a command template");
}

namespace {

// Sliding-minimum tracker over a fixed horizon, kept per bin: the classic
// subwindow simplification of minimum statistics.
class MinTracker {
 public:
  MinTracker(Index bins, Index subwindow_len, Index subwindows)
      : sub_len_(subwindow_len), max_subs_(subwindows),
        current_min_(Vec::Constant(bins, std::numeric_limits<Scalar>::max())),
        frames_in_sub_(0) {}

  void push(const Vec& value) {
    current_min_ = current_min_.cwiseMin(value);
    if (++frames_in_sub_ >= sub_len_) {
      history_.push_back(current_min_);
      if (static_cast<Index>(history_.size()) > max_subs_) history_.pop_front();
      current_min_.setConstant(std::numeric_limits<Scalar>::max());
      frames_in_sub_ = 0;
    }
  }

  Vec minimum() const {
    Vec m = current_min_;
    for (const Vec& h : history_) m = m.cwiseMin(h);
    return m;
  }

 private:
  Index sub_len_, max_subs_;
  Vec current_min_;
  Index frames_in_sub_;
  std::deque<Vec> history_;
};

}  // namespace

MultichannelSignal apply_wiener_baseline(const MultichannelSignal& signal,
                                         const StftConfig& cfg,
                                         const PostfilterSpec& spec) {
  spec.validate();
  if (signal.channel_count() != 1)
    throw InvalidArgument("wiener postfilter expects a single channel");

  SpectrogramTensor stft = analyze(signal, cfg);
  CMat& x = stft.channels.front();
  const Index bins = stft.bins();
  const Index frames = stft.frames();

  const Scalar floor_gain = amplitude_from_db(spec.gain_floor_db);
  const Scalar min_stat_bias = 1.5;
  // Fixed tracker-input smoothing: fast enough to reach the floor inside
  // short speech pauses. spec.alpha drives the decision-directed recursion.
  const Scalar track_alpha = 0.85;
  // ~1.5 s minimum-statistics horizon split into 8 subwindows.
  const Index horizon = std::max<Index>(8, static_cast<Index>(1.5 / cfg.hop_seconds()));
  MinTracker tracker(bins, std::max<Index>(1, horizon / 8), 8);

  Vec smoothed = Vec::Zero(bins);
  Vec prev_gain = Vec::Ones(bins);
  Vec prev_mag2 = Vec::Zero(bins);
  constexpr Scalar tiny = 1e-30;

  for (Index l = 0; l < frames; ++l) {
    Vec mag2(bins);
    for (Index k = 0; k < bins; ++k) mag2[k] = std::norm(x(k, l));

    if (l == 0)
      smoothed = mag2;
    else
      smoothed = track_alpha * smoothed + (1.0 - track_alpha) * mag2;
    tracker.push(smoothed);
    const Vec noise = min_stat_bias * tracker.minimum().cwiseMax(0.0);

    for (Index k = 0; k < bins; ++k) {
      const Scalar n_est = noise[k];
      Scalar gain = floor_gain;
      if (n_est > tiny) {
        const Scalar snr_post = mag2[k] / n_est;
        const Scalar snr_prio = spec.alpha * (prev_gain[k] * prev_gain[k] * prev_mag2[k]) / n_est +
                                (1.0 - spec.alpha) * std::max(snr_post - 1.0, 0.0);
        gain = std::clamp(snr_prio / (1.0 + snr_prio), floor_gain, 1.0);
      } else if (mag2[k] > tiny) {
        gain = 1.0;  // no noise observed yet in this bin
      }
      prev_gain[k] = gain;
      prev_mag2[k] = mag2[k];
      x(k, l) *= gain;
    }
  }
  return synthesize(stft, cfg, signal.length());
}

namespace {

std::string substitute_placeholders(const std::string& tmpl, const std::string& in_path,
                                    const std::string& out_path) {
  if (tmpl.find("{in}") == std::string::npos || tmpl.find("{out}") == std::string::npos)
    throw InvalidArgument("external command must contain {in} and {out} placeholders: " +
                          tmpl);
  std::string cmd = tmpl;
  for (std::string::size_type p; (p = cmd.find("{in}")) != std::string::npos;)
    cmd.replace(p, 4, in_path);
  for (std::string::size_type p; (p = cmd.find("{out}")) != std::string::npos;)
    cmd.replace(p, 5, out_path);
  return cmd;
}

std::filesystem::path temp_directory() {
  if (const char* env = std::getenv("DASP_TMPDIR"); env && *env)
    return std::filesystem::path(env);
  return std::filesystem::temp_directory_path();
}

struct TempPair {
  std::filesystem::path in, out;
  ~TempPair() {
    std::error_code ec;
    std::filesystem::remove(in, ec);
    std::filesystem::remove(out, ec);
  }
};

std::atomic<uint64_t> g_temp_counter{0};

TempPair make_temp_pair() {
  const auto dir = temp_directory();
  std::random_device rd;
  const uint64_t tag = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  const std::string stem = "dasp_pf_" + std::to_string(::getpid()) + "_" +
                           std::to_string(g_temp_counter.fetch_add(1)) + "_" +
                           std::to_string(tag);
  return {dir / (stem + "_in.wav"), dir / (stem + "_out.wav")};
}

}  // namespace

MultichannelSignal apply_external(const MultichannelSignal& signal,
                                  const PostfilterSpec& spec) {
  spec.validate();
  if (signal.channel_count() != 1)
    throw InvalidArgument("external postfilter expects a single channel");

  const TempPair tmp = make_temp_pair();
  write_wav(tmp.in.string(), signal, spec.exchange_format);

  const std::string cmd =
      substitute_placeholders(spec.external_command, tmp.in.string(), tmp.out.string());
  std::string captured;
  {
    FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) throw Error("failed to launch external enhancer: " + cmd);
    char buf[512];
    while (size_t n = std::fread(buf, 1, sizeof(buf), pipe)) captured.append(buf, n);
    const int status = ::pclose(pipe);
    if (status != 0) {
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : status;
      throw Error("external enhancer failed (exit " + std::to_string(code) + "): " + cmd +
                  (captured.empty() ? "" : "\n" + captured));
    }
  }
  if (!std::filesystem::exists(tmp.out))
    throw Error("external enhancer produced no output file: " + cmd +
                (captured.empty() ? "" : "\n" + captured));

  MultichannelSignal out = read_wav(tmp.out.string());
  if (out.channel_count() != 1)
    throw DataError("external enhancer returned " + std::to_string(out.channel_count()) +
                    " channels, expected mono");
  if (out.sample_rate != signal.sample_rate)
    throw DataError("external enhancer changed the sample rate: " +
                    std::to_string(out.sample_rate) + " vs " +
                    std::to_string(signal.sample_rate));
  if (out.length() != signal.length()) {
    std::cerr << "warning: external enhancer changed the length (" << out.length()
              << " vs " << signal.length() << " samples), padding/truncating\n";
    Mat fixed = Mat::Zero(signal.length(), 1);
    const Index n = std::min(out.length(), signal.length());
    fixed.topRows(n) = out.samples.topRows(n);
    out.samples = std::move(fixed);
  }
  return out;
}

MultichannelSignal apply_postfilter(const MultichannelSignal& signal, const StftConfig& cfg,
                                    const PostfilterSpec& spec) {
  switch (spec.kind) {
    case PostfilterKind::None: return signal;
    case PostfilterKind::Wiener: return apply_wiener_baseline(signal, cfg, spec);
    case PostfilterKind::External: return apply_external(signal, spec);
  }
  throw InvalidArgument("unhandled postfilter kind");
}

}  // namespace dasp
