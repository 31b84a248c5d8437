// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_SYNTH_HPP
#define DASP_SYNTH_HPP

#include <cstdint>
#include <optional>

#include "dasp/geometry.hpp"
#include "dasp/stft.hpp"
#include "dasp/types.hpp"

namespace dasp {

/// Shifts x by `delay_samples` (positive = later) with a frequency-domain
/// phase ramp; the signal is zero-padded before the transform so nothing
/// wraps around.
Vec fractional_delay(const Vec& x, Scalar delay_samples);

/// Far-field plane-wave rendering: channel m is the source delayed by
/// tau_m = -(r_m . kappa)/c, i.e. microphones toward the source receive it
/// earlier. No inter-channel attenuation.
MultichannelSignal render_plane_wave(const Vec& source, Scalar sample_rate,
                                     const ArrayGeometry& geom, Scalar azimuth_deg);

/// Parametric rotor egonoise: per rotor, a harmonic stack at the blade
/// passage frequency with a slowly drifting RPM, rendered from the rotor's
/// near-field position by per-mic propagation delays, plus a spatially white
/// broadband floor.
struct RotorNoiseModel {
  Index rotor_count = 4;
  Scalar base_rpm = 4500.0;
  Vec detune;                      // per-rotor fractional offset; defaults below
  Index blade_count = 2;
  Index harmonic_count = 20;
  Scalar harmonic_decay_db = 4.0;  // per harmonic step
  Scalar rpm_jitter_bw_hz = 2.0;
  Scalar rpm_jitter_depth = 0.03;  // fractional RPM excursion
  Scalar broadband_floor_db = -25.0;  // relative to the strongest harmonic
  Mat rotor_positions;             // 3 x rotor_count; defaults below

  /// Fills detune/rotor_positions when left empty: detunes of a few percent,
  /// rotors at radius 0.10 m, z = 0.03 m, azimuths 45/135/225/315 deg.
  void fill_defaults();
  void validate() const;
};

MultichannelSignal generate_rotor_noise(const RotorNoiseModel& model,
                                        const ArrayGeometry& geom, Scalar duration_s,
                                        uint64_t seed);

/// Deterministic speech-shaped test signal: voiced syllables with pitch
/// drift and formant coloring, fricative bursts, and genuine silent gaps.
/// Peak-normalized to 1.
Vec speech_like(Scalar duration_s, Scalar sample_rate, uint64_t seed);

struct ScenarioSpec {
  Scalar source_azimuth_deg = 180.0;
  Scalar target_snr_db = -10.0;
  Scalar noise_clip_s = 4.0;
  Scalar speech_segment_s = 2.0;
  std::optional<Scalar> insertion_offset_s;  // nullopt = random from seed
  uint64_t seed = 0;
};

struct MixResult {
  MultichannelSignal mixture;  // clean + noise, bit-exact sum
  MultichannelSignal clean;    // scaled speech placed on the clip timeline
  MultichannelSignal noise;
  Scalar gain = 0.0;           // scale applied to the speech
  Index segment_begin = 0;     // speech-active sample range on the timeline
  Index segment_length = 0;
};

/// Places the speech segment inside the noise clip and scales it so the
/// segment SNR on reference channel 0 hits target_snr_db exactly.
MixResult mix_at_snr(const MultichannelSignal& speech, const MultichannelSignal& noise,
                     const ScenarioSpec& spec);

}  // namespace dasp

#endif  // DASP_SYNTH_HPP
