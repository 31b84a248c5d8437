// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <random>

#include "dasp/fft.hpp"
#include "dasp/stft.hpp"
#include "oracles.hpp"

using namespace dasp;

TEST_SUITE_BEGIN("stft");

namespace {

// Frame-wise one-sided spectral energy matching the unnormalized analysis
// kernel: sum|x|^2 = (|X_0|^2 + |X_N/2|^2 + 2 sum |X_k|^2) / N.
Scalar spectral_energy(const CMat& spec, Index frame, Index fft_size) {
  Scalar e = std::norm(spec(0, frame)) + std::norm(spec(spec.rows() - 1, frame));
  for (Index k = 1; k < spec.rows() - 1; ++k) e += 2.0 * std::norm(spec(k, frame));
  return e / static_cast<Scalar>(fft_size);
}

}  // namespace

TEST_CASE("fft matches the naive dft on random data") {
  std::mt19937_64 rng(42);
  std::normal_distribution<Scalar> g;
  for (Index n : {8, 64, 512}) {
    std::vector<Complex> x(n);
    for (auto& v : x) v = Complex(g(rng), g(rng));
    std::vector<Complex> got = x;
    Fft fft(n);
    fft.analysis(got);
    const std::vector<Complex> want = oracle::naive_dft(x);
    Scalar worst = 0;
    for (Index k = 0; k < n; ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
    CHECK(worst < 1e-12 * std::sqrt(static_cast<Scalar>(n)));

    fft.synthesis(got);
    worst = 0;
    for (Index k = 0; k < n; ++k) worst = std::max(worst, std::abs(got[k] - x[k]));
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("config validation") {
  StftConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  SUBCASE("fft size must be a power of two") {
    cfg.fft_size = 500;
    cfg.frame_length = 500;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  }
  SUBCASE("hop larger than frame") {
    cfg.hop_length = 600;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  }
  SUBCASE("fft smaller than frame") {
    cfg.fft_size = 256;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  }
  SUBCASE("non-cola hop is rejected") {
    cfg.window = Window::Rect;
    cfg.hop_length = 300;  // alternating 1/2-frame coverage
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  }
  SUBCASE("hann at 50% overlap-adds to a constant") {
    cfg.window = Window::Hann;
    CHECK_NOTHROW(cfg.validate());
  }
  SUBCASE("rect at full hop") {
    cfg.window = Window::Rect;
    cfg.hop_length = 512;
    CHECK_NOTHROW(cfg.validate());
  }
}

TEST_CASE("all-zero signal analyzes to an all-zero tensor") {
  StftConfig cfg;
  const auto spec = analyze(MultichannelSignal::zeros(4096, 2, 16000), cfg);
  CHECK(spec.channel_count() == 2);
  for (const CMat& ch : spec.channels) CHECK(ch.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("frame count follows the hop formula when the tail divides evenly") {
  StftConfig cfg;
  const auto spec = analyze(MultichannelSignal::zeros(512 + 7 * 256, 1, 16000), cfg);
  CHECK(spec.frames() == 8);
  CHECK(spec.bins() == 257);
}

TEST_CASE("bin-centered sinusoid with rect window concentrates in one bin") {
  StftConfig cfg;
  cfg.window = Window::Rect;
  const Index k0 = 37;
  const Vec x = oracle::exact_bin_sinusoid(4096, k0, cfg.fft_size);
  const auto spec = analyze(MultichannelSignal::from_mono(x, cfg.sample_rate), cfg);
  const CMat& ch = spec.channels.front();

  // Closed form: X[k0] = -+ j A N / 2 at the tone bin, zero elsewhere.
  Scalar peak = 0.0, spur = 0.0;
  for (Index l = 0; l < spec.frames() - 1; ++l) {
    for (Index k = 0; k < spec.bins(); ++k) {
      const Scalar mag = std::abs(ch(k, l));
      if (k == k0) peak = (l == 0) ? mag : std::min(peak, mag);
      else spur = std::max(spur, mag);
    }
  }
  CHECK(peak == doctest::Approx(256.0).epsilon(1e-12));
  CHECK(db_from_amplitude(spur / peak) <= -300.0);
}

TEST_CASE("unit impulse at frame center has a flat magnitude-1 spectrum") {
  StftConfig cfg;
  cfg.window = Window::Rect;
  MultichannelSignal s = MultichannelSignal::zeros(512, 1, 16000);
  s.samples(256, 0) = 1.0;
  const auto spec = analyze(s, cfg);
  REQUIRE(spec.frames() == 1);
  for (Index k = 0; k < spec.bins(); ++k)
    CHECK(std::abs(spec.channels[0](k, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analyze rejects short and non-finite input") {
  StftConfig cfg;
  CHECK_THROWS_AS(analyze(MultichannelSignal::zeros(100, 1, 16000), cfg), DataError);
  MultichannelSignal bad = MultichannelSignal::zeros(1024, 1, 16000);
  bad.samples(17, 0) = std::numeric_limits<Scalar>::quiet_NaN();
  CHECK_THROWS_AS(analyze(bad, cfg), DataError);
}

TEST_CASE("synthesize rejects dimension mismatches") {
  StftConfig cfg;
  SpectrogramTensor spec;
  spec.sample_rate = 16000;
  spec.channels.assign(1, CMat::Zero(100, 4));  // wrong bin count
  CHECK_THROWS_AS(synthesize(spec, cfg), DataError);
}

TEST_CASE("all-zero tensor synthesizes to silence") {
  StftConfig cfg;
  SpectrogramTensor spec;
  spec.sample_rate = 16000;
  spec.channels.assign(1, CMat::Zero(257, 6));
  const auto y = synthesize(spec, cfg);
  CHECK(y.samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("round trip reconstructs interior samples") {
  std::mt19937_64 rng(7);
  std::normal_distribution<Scalar> g;

  const auto check_roundtrip = [](const Vec& x, const StftConfig& cfg) {
    const auto s = MultichannelSignal::from_mono(x, cfg.sample_rate);
    const auto y = synthesize(analyze(s, cfg), cfg, s.length());
    Scalar err = 0.0, peak = 0.0;
    for (Index n = cfg.frame_length; n < s.length() - cfg.frame_length; ++n) {
      err = std::max(err, std::abs(y.samples(n, 0) - x[n]));
      peak = std::max(peak, std::abs(x[n]));
    }
    return err / peak;
  };

  StftConfig cfg;
  SUBCASE("white noise, sqrt-hann") {
    Vec x(16000);
    for (auto& v : x) v = g(rng);
    CHECK(check_roundtrip(x, cfg) < 1e-6);
  }
  SUBCASE("length not a multiple of the hop still covers the tail") {
    Vec x(16001 + 137);
    for (auto& v : x) v = g(rng);
    const auto s = MultichannelSignal::from_mono(x, 16000);
    const auto y = synthesize(analyze(s, cfg), cfg, s.length());
    Scalar err = 0.0;
    for (Index n = s.length() - 256; n < s.length() - 16; ++n)
      err = std::max(err, std::abs(y.samples(n, 0) - x[n]));
    CHECK(err < 1e-6);
  }
  SUBCASE("chirp, hann analysis-only") {
    cfg.window = Window::Hann;
    Vec x(16000);
    for (Index n = 0; n < x.size(); ++n) {
      const Scalar t = static_cast<Scalar>(n) / 16000.0;
      x[n] = std::sin(2.0 * kPi * (200.0 * t + 1800.0 * t * t));
    }
    CHECK(check_roundtrip(x, cfg) < 1e-6);
  }
  SUBCASE("impulse train, rect") {
    cfg.window = Window::Rect;
    Vec x = Vec::Zero(8192);
    for (Index n = 100; n < x.size(); n += 777) x[n] = 1.0;
    CHECK(check_roundtrip(x, cfg) < 1e-6);
  }
}

TEST_CASE("parseval per frame") {
  StftConfig cfg;
  std::mt19937_64 rng(11);
  std::normal_distribution<Scalar> g;
  Vec x(4096);
  for (auto& v : x) v = g(rng);
  const auto spec = analyze(MultichannelSignal::from_mono(x, 16000), cfg);
  const Vec window = make_window(cfg.window, cfg.frame_length);
  for (Index l = 0; l + 1 < spec.frames(); ++l) {
    Scalar time_energy = 0.0;
    for (Index n = 0; n < cfg.frame_length; ++n) {
      const Scalar v = window[n] * x[l * cfg.hop_length + n];
      time_energy += v * v;
    }
    const Scalar freq_energy = spectral_energy(spec.channels[0], l, cfg.fft_size);
    CHECK(std::abs(freq_energy - time_energy) <= 1e-9 * time_energy);
  }
}

TEST_CASE("linearity") {
  StftConfig cfg;
  std::mt19937_64 rng(13);
  std::normal_distribution<Scalar> g;
  Vec x(2048), y(2048);
  for (Index n = 0; n < 2048; ++n) {
    x[n] = g(rng);
    y[n] = g(rng);
  }
  const Scalar a = 1.7, b = -0.4;
  const auto sx = analyze(MultichannelSignal::from_mono(x, 16000), cfg);
  const auto sy = analyze(MultichannelSignal::from_mono(y, 16000), cfg);
  const auto sxy = analyze(MultichannelSignal::from_mono(a * x + b * y, 16000), cfg);
  const CMat want = a * sx.channels[0] + b * sy.channels[0];
  const Scalar scale = want.cwiseAbs().maxCoeff();
  CHECK((sxy.channels[0] - want).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_SUITE_END();
