// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/scenario.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace dasp {

namespace {

using nlohmann::json;

// Decorrelates the per-purpose RNG streams drawn from one scenario seed.
uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + stream * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void apply_rotor_overrides(RotorNoiseModel& model, const json& j) {
  if (j.contains("rotor_count")) model.rotor_count = j["rotor_count"].get<Index>();
  if (j.contains("base_rpm")) model.base_rpm = j["base_rpm"].get<Scalar>();
  if (j.contains("blade_count")) model.blade_count = j["blade_count"].get<Index>();
  if (j.contains("harmonic_count")) model.harmonic_count = j["harmonic_count"].get<Index>();
  if (j.contains("harmonic_decay_db"))
    model.harmonic_decay_db = j["harmonic_decay_db"].get<Scalar>();
  if (j.contains("rpm_jitter_bw_hz"))
    model.rpm_jitter_bw_hz = j["rpm_jitter_bw_hz"].get<Scalar>();
  if (j.contains("rpm_jitter_depth"))
    model.rpm_jitter_depth = j["rpm_jitter_depth"].get<Scalar>();
  if (j.contains("broadband_floor_db"))
    model.broadband_floor_db = j["broadband_floor_db"].get<Scalar>();
}

}  // namespace

MixBatch MixBatch::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open batch file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed batch json in " + path + ": " + e.what());
  }

  MixBatch batch;
  try {
    if (j.contains("sample_rate")) batch.sample_rate = j["sample_rate"].get<Scalar>();
    if (j.contains("rotor")) apply_rotor_overrides(batch.rotor, j["rotor"]);
    if (!j.contains("scenarios") || !j["scenarios"].is_array() || j["scenarios"].empty())
      throw DataError("batch file has no scenarios: " + path);
    for (const json& sc : j["scenarios"]) {
      BatchScenario s;
      s.id = sc.at("id").get<std::string>();
      s.spec.source_azimuth_deg = sc.at("azimuth_deg").get<Scalar>();
      s.spec.target_snr_db = sc.at("snr_db").get<Scalar>();
      s.spec.seed = sc.at("seed").get<uint64_t>();
      if (sc.contains("noise_clip_s")) s.spec.noise_clip_s = sc["noise_clip_s"].get<Scalar>();
      if (sc.contains("speech_segment_s"))
        s.spec.speech_segment_s = sc["speech_segment_s"].get<Scalar>();
      if (sc.contains("offset_s") && !sc["offset_s"].is_string())
        s.spec.insertion_offset_s = sc["offset_s"].get<Scalar>();
      if (sc.contains("speech_wav")) s.speech_wav = sc["speech_wav"].get<std::string>();
      if (sc.contains("noise_wav")) s.noise_wav = sc["noise_wav"].get<std::string>();
      batch.scenarios.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw DataError("bad batch entry in " + path + ": " + e.what());
  }
  return batch;
}

RenderedScenario render_scenario(const BatchScenario& scenario, const MixBatch& batch,
                                 const ArrayGeometry& geom) {
  const ScenarioSpec& spec = scenario.spec;
  if (spec.speech_segment_s > spec.noise_clip_s)
    throw DataError("scenario " + scenario.id + ": speech segment longer than the clip");
  const Scalar fs = batch.sample_rate;
  const Index seg_len = static_cast<Index>(std::llround(spec.speech_segment_s * fs));

  Vec source;
  if (scenario.speech_wav.has_value()) {
    const MultichannelSignal s = read_wav(*scenario.speech_wav);
    if (s.channel_count() != 1)
      throw DataError("speech wav must be mono: " + *scenario.speech_wav);
    if (s.sample_rate != fs)
      throw DataError("speech wav sample rate " + std::to_string(s.sample_rate) +
                      " does not match batch rate " + std::to_string(fs) +
                      " (no resampling): " + *scenario.speech_wav);
    if (s.length() < seg_len)
      throw DataError("speech wav shorter than the segment: " + *scenario.speech_wav);
    source = s.channel(0).head(seg_len);
  } else {
    source = speech_like(spec.speech_segment_s, fs, derive_seed(spec.seed, 1));
  }

  MultichannelSignal noise;
  if (scenario.noise_wav.has_value()) {
    noise = read_wav(*scenario.noise_wav);
    if (noise.channel_count() != geom.mic_count())
      throw DataError("noise wav channel count mismatch: " + *scenario.noise_wav);
    if (noise.sample_rate != fs)
      throw DataError("noise wav sample rate mismatch (no resampling): " +
                      *scenario.noise_wav);
    const Index clip_len = static_cast<Index>(std::llround(spec.noise_clip_s * fs));
    if (noise.length() < clip_len)
      throw DataError("noise wav shorter than the clip: " + *scenario.noise_wav);
    noise.samples = noise.samples.topRows(clip_len).eval();
  } else {
    noise = generate_rotor_noise(batch.rotor, geom, spec.noise_clip_s,
                                 derive_seed(spec.seed, 2));
  }

  const MultichannelSignal speech_mc =
      render_plane_wave(source, fs, geom, spec.source_azimuth_deg);

  RenderedScenario out;
  out.mix = mix_at_snr(speech_mc, noise, spec);
  out.clean_ref = Vec::Zero(noise.length());
  out.clean_ref.segment(out.mix.segment_begin, out.mix.segment_length) =
      out.mix.gain * source;
  return out;
}

std::string run_mix_batch(const MixBatch& batch, const ArrayGeometry& geom,
                          const std::string& out_dir, WavFormat format) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  json scenarios = json::array();
  for (const BatchScenario& sc : batch.scenarios) {
    const RenderedScenario r = render_scenario(sc, batch, geom);
    const fs::path dir = fs::path(out_dir) / sc.id;
    fs::create_directories(dir);
    write_wav((dir / "mixture.wav").string(), r.mix.mixture, format);
    write_wav((dir / "clean.wav").string(), r.mix.clean, format);
    write_wav((dir / "noise.wav").string(), r.mix.noise, format);
    write_wav((dir / "clean_ref.wav").string(),
              MultichannelSignal::from_mono(r.clean_ref, batch.sample_rate), format);

    scenarios.push_back(json{
        {"id", sc.id},
        {"azimuth_deg", wrap_azimuth_deg(sc.spec.source_azimuth_deg)},
        {"target_snr_db", sc.spec.target_snr_db},
        {"seed", sc.spec.seed},
        {"segment_begin", r.mix.segment_begin},
        {"segment_length", r.mix.segment_length},
        {"gain", r.mix.gain},
        {"mixture", sc.id + "/mixture.wav"},
        {"clean", sc.id + "/clean.wav"},
        {"clean_ref", sc.id + "/clean_ref.wav"},
        {"noise", sc.id + "/noise.wav"},
    });
  }

  const json manifest{{"sample_rate", batch.sample_rate},
                      {"mic_count", geom.mic_count()},
                      {"scenarios", scenarios}};
  const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
  std::ofstream os(manifest_path);
  if (!os) throw DataError("cannot create manifest: " + manifest_path.string());
  os << manifest.dump(2) << '\n';
  if (!os) throw DataError("failed writing manifest: " + manifest_path.string());
  return manifest_path.string();
}

}  // namespace dasp
