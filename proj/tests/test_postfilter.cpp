// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "dasp/postfilter.hpp"
#include "dasp/synth.hpp"
#include "dasp/wav.hpp"
#include "oracles.hpp"

using namespace dasp;

TEST_SUITE_BEGIN("postfilter");

namespace {

MultichannelSignal wav_roundtrip(const MultichannelSignal& s, WavFormat fmt) {
  const auto path = std::filesystem::temp_directory_path() / "dasp_pf_roundtrip.wav";
  write_wav(path.string(), s, fmt);
  MultichannelSignal out = read_wav(path.string());
  std::filesystem::remove(path);
  return out;
}

}  // namespace

TEST_CASE("spec validation") {
  PostfilterSpec spec;
  CHECK_NOTHROW(spec.validate());
  SUBCASE("alpha out of range") {
    spec.alpha = 1.0;
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  }
  SUBCASE("floor out of range") {
    spec.gain_floor_db = -40.0;
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  }
  SUBCASE("external without a command") {
    spec.kind = PostfilterKind::External;
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  }
}

TEST_CASE("kind none is a bit-exact pass-through") {
  StftConfig cfg;
  const auto x = MultichannelSignal::from_mono(oracle::gaussian_vector(9000, 1), 16000);
  const auto y = apply_postfilter(x, cfg, PostfilterSpec{});
  CHECK((y.samples - x.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("wiener baseline behavior") {
  StftConfig cfg;
  PostfilterSpec spec;
  spec.kind = PostfilterKind::Wiener;

  SUBCASE("clean speech passes with less than 1 dB energy loss") {
    const Vec speech = speech_like(3.0, 16000, 77);
    const auto x = MultichannelSignal::from_mono(speech, 16000);
    const auto y = apply_wiener_baseline(x, cfg, spec);
    const Scalar ratio =
        db_from_power(y.samples.squaredNorm() / x.samples.squaredNorm());
    CHECK(ratio >= -1.0);
    CHECK(ratio <= 0.1);
  }

  SUBCASE("stationary noise is pushed toward the gain floor") {
    const Vec noise = oracle::gaussian_vector(64000, 9);
    const auto x = MultichannelSignal::from_mono(noise, 16000);
    const auto y = apply_wiener_baseline(x, cfg, spec);
    // after the minimum-statistics tracker converges (last 2 s)
    const Scalar in_tail = x.samples.col(0).tail(32000).squaredNorm();
    const Scalar out_tail = y.samples.col(0).tail(32000).squaredNorm();
    CHECK(db_from_power(out_tail / in_tail) <= spec.gain_floor_db + 3.0);
  }

  SUBCASE("silence stays silence") {
    const auto x = MultichannelSignal::zeros(16000, 1, 16000);
    const auto y = apply_wiener_baseline(x, cfg, spec);
    CHECK(y.samples.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("never amplifies") {
    const Vec mix = speech_like(2.0, 16000, 5) + 0.3 * oracle::gaussian_vector(32000, 6);
    const auto x = MultichannelSignal::from_mono(mix, 16000);
    const auto y = apply_wiener_baseline(x, cfg, spec);
    CHECK(y.samples.squaredNorm() <= x.samples.squaredNorm() * (1.0 + 1e-12));
  }

  SUBCASE("multichannel input is rejected") {
    const auto x = MultichannelSignal::zeros(16000, 2, 16000);
    CHECK_THROWS_AS(apply_wiener_baseline(x, cfg, spec), InvalidArgument);
  }
}

TEST_CASE("external hook") {
  PostfilterSpec spec;
  spec.kind = PostfilterKind::External;
  const auto x = MultichannelSignal::from_mono(
      0.8 * speech_like(1.0, 16000, 21), 16000);

  SUBCASE("identity command round-trips the exchange file") {
    spec.external_command = "cp {in} {out}";
    const auto y = apply_external(x, spec);
    const auto want = wav_roundtrip(x, spec.exchange_format);
    CHECK((y.samples - want.samples).cwiseAbs().maxCoeff() == 0.0);
    CHECK(y.length() == x.length());
    CHECK(y.sample_rate == x.sample_rate);
  }

  SUBCASE("float64 exchange is lossless end to end") {
    spec.external_command = "cp {in} {out}";
    spec.exchange_format = WavFormat::Float64;
    const auto y = apply_external(x, spec);
    CHECK((y.samples - x.samples).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("gain command scales the samples") {
    const char* helper = std::getenv("DASP_WAV_GAIN");
    REQUIRE_MESSAGE(helper != nullptr, "DASP_WAV_GAIN not set");
    spec.external_command = std::string(helper) + " 0.5 {in} {out}";
    spec.exchange_format = WavFormat::Float64;
    const auto y = apply_external(x, spec);
    CHECK((y.samples - 0.5 * x.samples).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("missing command names the command in the error") {
    spec.external_command = "/no/such/enhancer {in} {out}";
    CHECK_THROWS_WITH_AS(apply_external(x, spec),
                         doctest::Contains("/no/such/enhancer"), Error);
  }

  SUBCASE("nonzero exit carries the captured output") {
    spec.external_command = "sh -c 'echo boom >&2; false' {in} {out}";
    CHECK_THROWS_WITH_AS(apply_external(x, spec), doctest::Contains("boom"), Error);
  }

  SUBCASE("command that writes nothing") {
    spec.external_command = "true {in} {out}";
    CHECK_THROWS_WITH_AS(apply_external(x, spec),
                         doctest::Contains("no output file"), Error);
  }

  SUBCASE("template without placeholders is rejected") {
    spec.external_command = "cat";
    CHECK_THROWS_AS(apply_external(x, spec), InvalidArgument);
  }
}

TEST_SUITE_END();
