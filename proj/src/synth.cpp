// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dasp/fft.hpp"

namespace dasp {

Vec fractional_delay(const Vec& x, Scalar delay_samples) {
  const Index len = x.size();
  if (len == 0) return x;
  Index padded = 1;
  const Index margin = static_cast<Index>(std::ceil(std::abs(delay_samples))) + 64;
  while (padded < len + margin) padded <<= 1;

  std::vector<Complex> buf(padded, Complex(0.0, 0.0));
  for (Index n = 0; n < len; ++n) buf[n] = Complex(x[n], 0.0);

  const Fft fft(padded);
  fft.analysis(buf);
  // Delay under the positive-exponent kernel multiplies bin k by
  // exp(+j 2 pi k tau / N); the mirror half follows by conjugate symmetry.
  for (Index k = 1; k < padded / 2; ++k) {
    const Scalar phase = 2.0 * kPi * static_cast<Scalar>(k) * delay_samples /
                         static_cast<Scalar>(padded);
    const Complex rot(std::cos(phase), std::sin(phase));
    buf[k] *= rot;
    buf[padded - k] = std::conj(buf[k]);
  }
  buf[padded / 2] *= std::cos(kPi * delay_samples);
  fft.synthesis(buf);

  Vec out(len);
  for (Index n = 0; n < len; ++n) out[n] = buf[n].real();
  return out;
}

MultichannelSignal render_plane_wave(const Vec& source, Scalar sample_rate,
                                     const ArrayGeometry& geom, Scalar azimuth_deg) {
  geom.validate();
  if (sample_rate <= 0) throw InvalidArgument("render_plane_wave: bad sample rate");
  if (!source.allFinite()) throw DataError("render_plane_wave: non-finite source");

  const Vec advance = arrival_advances_s(geom, azimuth_deg);
  MultichannelSignal out = MultichannelSignal::zeros(source.size(), geom.mic_count(),
                                                     sample_rate);
  for (Index m = 0; m < geom.mic_count(); ++m) {
    const Scalar delay_samples = -advance[m] * sample_rate;
    out.samples.col(m) = fractional_delay(source, delay_samples);
  }
  return out;
}

void RotorNoiseModel::fill_defaults() {
  if (detune.size() == 0) {
    detune = Vec(rotor_count);
    for (Index r = 0; r < rotor_count; ++r)
      detune[r] = 0.02 * (static_cast<Scalar>(r) - 0.5 * static_cast<Scalar>(rotor_count - 1));
  }
  if (rotor_positions.size() == 0) {
    rotor_positions = Mat::Zero(3, rotor_count);
    for (Index r = 0; r < rotor_count; ++r) {
      const Scalar az = deg_to_rad(45.0 + 90.0 * static_cast<Scalar>(r));
      rotor_positions(0, r) = 0.10 * std::cos(az);
      rotor_positions(1, r) = 0.10 * std::sin(az);
      rotor_positions(2, r) = 0.03;
    }
  }
}

void RotorNoiseModel::validate() const {
  if (rotor_count < 1) throw InvalidArgument("rotor model: rotor_count must be >= 1");
  if (base_rpm <= 0) throw InvalidArgument("rotor model: base_rpm must be positive");
  if (blade_count < 1) throw InvalidArgument("rotor model: blade_count must be >= 1");
  if (harmonic_count < 0) throw InvalidArgument("rotor model: harmonic_count must be >= 0");
  if (detune.size() != rotor_count || rotor_positions.cols() != rotor_count)
    throw InvalidArgument("rotor model: detune/rotor_positions not sized to rotor_count");
}

namespace {

// One-pole smoothed white noise, normalized to unit peak: the fractional RPM
// drift trajectory.
Vec jitter_trajectory(Index length, Scalar sample_rate, Scalar bandwidth_hz,
                      std::mt19937_64& rng) {
  Vec traj = Vec::Zero(length);
  if (bandwidth_hz <= 0) return traj;
  std::normal_distribution<Scalar> gauss(0.0, 1.0);
  const Scalar alpha = std::exp(-2.0 * kPi * bandwidth_hz / sample_rate);
  Scalar state = 0.0;
  for (Index n = 0; n < length; ++n) {
    state = alpha * state + (1.0 - alpha) * gauss(rng);
    traj[n] = state;
  }
  const Scalar peak = traj.cwiseAbs().maxCoeff();
  if (peak > 0) traj /= peak;
  return traj;
}

}  // namespace

MultichannelSignal generate_rotor_noise(const RotorNoiseModel& input_model,
                                        const ArrayGeometry& geom, Scalar duration_s,
                                        uint64_t seed) {
  RotorNoiseModel model = input_model;
  model.fill_defaults();
  model.validate();
  geom.validate();
  if (duration_s <= 0) throw InvalidArgument("rotor noise: duration must be positive");

  const Scalar fs = geom.sample_rate;
  const Index length = static_cast<Index>(std::llround(duration_s * fs));
  const Index mics = geom.mic_count();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> uniform(0.0, 2.0 * kPi);
  std::normal_distribution<Scalar> gauss(0.0, 1.0);

  Mat acc = Mat::Zero(length, mics);
  Scalar strongest_harmonic = 0.0;

  for (Index r = 0; r < model.rotor_count; ++r) {
    const Vec jitter = jitter_trajectory(length, fs, model.rpm_jitter_bw_hz, rng);
    // Instantaneous blade passage frequency and its phase integral.
    Vec phase(length);
    Scalar accum = 0.0;
    const Scalar f_base = model.base_rpm * (1.0 + model.detune[r]) / 60.0 *
                          static_cast<Scalar>(model.blade_count);
    for (Index n = 0; n < length; ++n) {
      const Scalar f_inst = f_base * (1.0 + model.rpm_jitter_depth * jitter[n]);
      accum += 2.0 * kPi * f_inst / fs;
      phase[n] = accum;
    }

    Vec rotor_signal = Vec::Zero(length);
    for (Index h = 1; h <= model.harmonic_count; ++h) {
      const Scalar amp = amplitude_from_db(-model.harmonic_decay_db *
                                           static_cast<Scalar>(h - 1));
      const Scalar h_f_max = f_base * (1.0 + model.rpm_jitter_depth) * static_cast<Scalar>(h);
      if (h_f_max >= fs / 2.0) break;
      strongest_harmonic = std::max(strongest_harmonic, amp);
      const Scalar phi0 = uniform(rng);
      for (Index n = 0; n < length; ++n)
        rotor_signal[n] += amp * std::sin(static_cast<Scalar>(h) * phase[n] + phi0);
    }

    // Near-field rendering: plain propagation delay from the rotor position
    // to each mic, no distance attenuation.
    for (Index m = 0; m < mics; ++m) {
      const Scalar dist = (model.rotor_positions.col(r) - geom.positions.col(m)).norm();
      const Scalar delay_samples = dist / geom.speed_of_sound * fs;
      acc.col(m) += fractional_delay(rotor_signal, delay_samples);
    }
  }

  if (strongest_harmonic == 0.0) strongest_harmonic = 1.0;
  const Scalar floor_rms = strongest_harmonic * amplitude_from_db(model.broadband_floor_db);
  for (Index m = 0; m < mics; ++m)
    for (Index n = 0; n < length; ++n) acc(n, m) += floor_rms * gauss(rng);

  const Scalar peak = acc.cwiseAbs().maxCoeff();
  if (peak > 0) acc *= 0.5 / peak;

  MultichannelSignal out;
  out.samples = std::move(acc);
  out.sample_rate = fs;
  return out;
}

Vec speech_like(Scalar duration_s, Scalar sample_rate, uint64_t seed) {
  if (duration_s <= 0 || sample_rate <= 0)
    throw InvalidArgument("speech_like: duration and sample rate must be positive");
  const Index length = static_cast<Index>(std::llround(duration_s * sample_rate));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
  std::normal_distribution<Scalar> gauss(0.0, 1.0);

  // Formant-ish spectral envelope used to weight voiced harmonics.
  const auto envelope = [](Scalar f) {
    const Scalar tilt = std::pow(10.0, -f / 6000.0);  // gentle high-frequency roll-off
    Scalar g = 0.0;
    const Scalar centers[3] = {500.0, 1500.0, 2500.0};
    const Scalar widths[3] = {180.0, 280.0, 420.0};
    const Scalar gains[3] = {1.0, 0.8, 0.55};
    for (int i = 0; i < 3; ++i) {
      const Scalar d = (f - centers[i]) / widths[i];
      g += gains[i] * std::exp(-0.5 * d * d);
    }
    return (0.05 + g) * tilt;
  };

  Vec out = Vec::Zero(length);
  Index pos = 0;
  while (pos < length) {
    // Silent gap, then a syllable.
    const Index gap = static_cast<Index>((0.03 + 0.09 * unit(rng)) * sample_rate);
    pos += gap;
    if (pos >= length) break;
    const Index syllable = static_cast<Index>((0.12 + 0.13 * unit(rng)) * sample_rate);
    const Index end = std::min(length, pos + syllable);
    const Index n_syl = end - pos;
    const bool fricative = unit(rng) < 0.3;

    if (fricative) {
      // Band-passed noise burst around 2..5 kHz via a modulated resonator.
      const Scalar f_c = 2000.0 + 3000.0 * unit(rng);
      const Scalar bw = 800.0;
      const Scalar r = std::exp(-kPi * bw / sample_rate);
      const Scalar w0 = 2.0 * kPi * std::min(f_c, 0.45 * sample_rate) / sample_rate;
      Scalar y1 = 0.0, y2 = 0.0;
      for (Index n = 0; n < n_syl; ++n) {
        const Scalar y = gauss(rng) + 2.0 * r * std::cos(w0) * y1 - r * r * y2;
        y2 = y1;
        y1 = y;
        out[pos + n] = 0.15 * y;
      }
    } else {
      const Scalar f0_start = 90.0 + 90.0 * unit(rng);
      const Scalar f0_slope = (unit(rng) - 0.5) * 0.4;  // fractional drift over the syllable
      Scalar phase = unit(rng) * 2.0 * kPi;
      std::vector<Scalar> harmonic_phase(64);
      for (auto& p : harmonic_phase) p = unit(rng) * 2.0 * kPi;
      for (Index n = 0; n < n_syl; ++n) {
        const Scalar t = static_cast<Scalar>(n) / static_cast<Scalar>(n_syl);
        const Scalar f0 = f0_start * (1.0 + f0_slope * t);
        phase += 2.0 * kPi * f0 / sample_rate;
        Scalar v = 0.0;
        for (Index h = 1; h * f0 < 4000.0 && h < 64; ++h)
          v += envelope(static_cast<Scalar>(h) * f0) *
               std::sin(static_cast<Scalar>(h) * phase + harmonic_phase[h]);
        out[pos + n] = v;
      }
    }
    // Raised-cosine onset/offset ramps, ~20 ms.
    const Index ramp = std::min<Index>(static_cast<Index>(0.02 * sample_rate), n_syl / 2);
    for (Index n = 0; n < ramp; ++n) {
      const Scalar g = 0.5 - 0.5 * std::cos(kPi * static_cast<Scalar>(n) /
                                            static_cast<Scalar>(ramp));
      out[pos + n] *= g;
      out[end - 1 - n] *= g;
    }
    pos = end;
  }

  const Scalar peak = out.cwiseAbs().maxCoeff();
  if (peak > 0) out /= peak;
  return out;
}

MixResult mix_at_snr(const MultichannelSignal& speech, const MultichannelSignal& noise,
                     const ScenarioSpec& spec) {
  if (speech.channel_count() != noise.channel_count())
    throw DataError("mix: channel count mismatch");
  if (speech.sample_rate != noise.sample_rate)
    throw DataError("mix: sample rate mismatch");
  if (speech.length() > noise.length())
    throw DataError("mix: speech segment longer than the noise clip");

  const Index seg_len = speech.length();
  const Index max_offset = noise.length() - seg_len;
  Index offset = 0;
  if (spec.insertion_offset_s.has_value()) {
    offset = static_cast<Index>(std::llround(*spec.insertion_offset_s * speech.sample_rate));
    if (offset < 0 || offset > max_offset)
      throw DataError("mix: insertion offset puts the segment outside the clip");
  } else {
    std::mt19937_64 rng(spec.seed);
    offset = max_offset > 0
                 ? static_cast<Index>(std::uniform_int_distribution<long long>(
                       0, max_offset)(rng))
                 : 0;
  }

  const Scalar speech_energy = speech.channel(0).squaredNorm();
  const Scalar noise_energy = noise.channel(0).segment(offset, seg_len).squaredNorm();
  if (speech_energy <= 0) throw DataError("mix: speech has zero energy");
  if (noise_energy <= 0) throw DataError("mix: noise has zero energy over the segment");

  const Scalar gain =
      std::sqrt(power_from_db(spec.target_snr_db) * noise_energy / speech_energy);

  MixResult res;
  res.clean = MultichannelSignal::zeros(noise.length(), noise.channel_count(),
                                        noise.sample_rate);
  res.clean.samples.middleRows(offset, seg_len) = gain * speech.samples;
  res.noise = noise;
  res.mixture.sample_rate = noise.sample_rate;
  res.mixture.samples = res.clean.samples + res.noise.samples;
  res.gain = gain;
  res.segment_begin = offset;
  res.segment_length = seg_len;
  return res;
}

}  // namespace dasp
