// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_POSTFILTER_HPP
#define DASP_POSTFILTER_HPP

#include <string>

#include "dasp/stft.hpp"
#include "dasp/types.hpp"
#include "dasp/wav.hpp"

namespace dasp {

enum class PostfilterKind { None, Wiener, External };

PostfilterKind postfilter_kind_from_string(const std::string& name);
std::string to_string(PostfilterKind k);

struct PostfilterSpec {
  PostfilterKind kind = PostfilterKind::None;
  std::string external_command;  // template with {in} and {out} placeholders
  Scalar alpha = 0.98;           // decision-directed a priori SNR smoothing
  Scalar gain_floor_db = -15.0;
  WavFormat exchange_format = WavFormat::Pcm16;
  void validate() const;
};

/// Decision-directed Wiener gain with a minimum-statistics noise tracker.
/// Per-bin gains never exceed 1 and never drop below the floor.
MultichannelSignal apply_wiener_baseline(const MultichannelSignal& signal,
                                         const StftConfig& cfg,
                                         const PostfilterSpec& spec);

/// Runs an external enhancer as a subprocess: the input is written as a mono
/// WAV to a temp path, {in}/{out} in the command template are substituted,
/// and the output WAV is read back. Temp dir honors $DASP_TMPDIR.
MultichannelSignal apply_external(const MultichannelSignal& signal,
                                  const PostfilterSpec& spec);

/// Dispatch on spec.kind; None returns the input untouched.
MultichannelSignal apply_postfilter(const MultichannelSignal& signal, const StftConfig& cfg,
                                    const PostfilterSpec& spec);

}  // namespace dasp

#endif  // DASP_POSTFILTER_HPP
