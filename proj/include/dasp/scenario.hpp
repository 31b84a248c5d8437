// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_SCENARIO_HPP
#define DASP_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "dasp/synth.hpp"
#include "dasp/wav.hpp"

namespace dasp {

/// One entry of a mix batch: where the speech and noise come from and how
/// they are mixed. Without explicit files, speech is the built-in
/// speech-shaped generator and noise the parametric rotor model, both seeded.
struct BatchScenario {
  std::string id;
  ScenarioSpec spec;
  std::optional<std::string> speech_wav;
  std::optional<std::string> noise_wav;
};

struct MixBatch {
  Scalar sample_rate = 16000.0;
  RotorNoiseModel rotor;
  std::vector<BatchScenario> scenarios;

  static MixBatch from_file(const std::string& path);
};

struct RenderedScenario {
  MixResult mix;
  Vec clean_ref;  // scaled source at the array center, on the clip timeline
};

RenderedScenario render_scenario(const BatchScenario& scenario, const MixBatch& batch,
                                 const ArrayGeometry& geom);

/// Renders every scenario and writes <id>/{mixture,clean,clean_ref,noise}.wav
/// plus manifest.json under out_dir. Returns the manifest path.
std::string run_mix_batch(const MixBatch& batch, const ArrayGeometry& geom,
                          const std::string& out_dir,
                          WavFormat format = WavFormat::Float32);

}  // namespace dasp

#endif  // DASP_SCENARIO_HPP
