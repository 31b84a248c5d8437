// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Test helper: scales a wav file by a constant gain, preserving the sample
// encoding. Used as a stand-in external enhancer.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "dasp/wav.hpp"

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: wav_gain GAIN IN OUT\n");
    return 2;
  }
  try {
    const double gain = std::stod(argv[1]);
    dasp::MultichannelSignal s = dasp::read_wav(argv[2]);
    s.samples *= gain;
    dasp::write_wav(argv[3], s, dasp::WavFormat::Float64);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wav_gain: %s\n", e.what());
    return 1;
  }
  return 0;
}
