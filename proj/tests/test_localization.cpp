// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "dasp/localization.hpp"
#include "dasp/metrics.hpp"
#include "dasp/synth.hpp"
#include "oracles.hpp"

using namespace dasp;

TEST_SUITE_BEGIN("localization");

namespace {

const ArrayGeometry kGeom = ArrayGeometry::uniform_circular();

Scalar angle_error_deg(Scalar got, Scalar want) {
  Scalar d = std::abs(wrap_azimuth_deg(got) - wrap_azimuth_deg(want));
  return std::min(d, 360.0 - d);
}

MultichannelSignal noise_from(const Vec& src, Scalar azimuth) {
  return render_plane_wave(src, 16000.0, kGeom, azimuth);
}

}  // namespace

TEST_CASE("single plane wave is found exactly on the grid") {
  StftConfig cfg;
  const Vec src = speech_like(1.0, 16000, 3);
  const auto x = noise_from(src, 180.0);
  const auto profile = steered_power_scan(analyze(x, cfg), kGeom, cfg, LocalizationParams{});
  CHECK(profile.estimated_doa_deg == 180.0);
  CHECK(profile.power.minCoeff() >= 0.0);
  Index argmax;
  profile.power.maxCoeff(&argmax);
  CHECK(profile.estimated_doa_deg == profile.angles_deg[argmax]);
}

TEST_CASE("spatially white noise gives a flat profile") {
  StftConfig cfg;
  std::mt19937_64 rng(4);
  std::normal_distribution<Scalar> g;
  MultichannelSignal x = MultichannelSignal::zeros(512 + 99 * 256, 6, 16000);  // 100 frames
  for (Index m = 0; m < 6; ++m)
    for (Index n = 0; n < x.length(); ++n) x.samples(n, m) = g(rng);
  const auto profile = steered_power_scan(analyze(x, cfg), kGeom, cfg, LocalizationParams{});
  CHECK(db_from_power(profile.power.maxCoeff() / profile.power.minCoeff()) <= 3.0);
  CHECK_FALSE(profile.has_dominant_peak(3.0));
}

TEST_CASE("two equal-power sources produce maxima at both angles") {
  StftConfig cfg;
  const Vec s1 = oracle::gaussian_vector(32000, 21);
  const Vec s2 = oracle::gaussian_vector(32000, 22);
  MultichannelSignal x = noise_from(s1, 90.0);
  x.samples += noise_from(s2, 270.0).samples;

  LocalizationParams params;
  const auto profile = steered_power_scan(analyze(x, cfg), kGeom, cfg, params);

  // Oracle: the expected profile from the beampattern sum over both steering
  // vectors; its local maxima mark where the measured maxima must lie.
  const Index n_angles = profile.angles_deg.size();
  Vec expected = Vec::Zero(n_angles);
  for (Index k = 0; k < cfg.bins(); ++k) {
    const Scalar f = cfg.bin_hz(k);
    if (f < params.band_low_hz || f > params.band_high_hz) continue;
    const CVec a1 = steering_vector(kGeom, 90.0, f);
    const CVec a2 = steering_vector(kGeom, 270.0, f);
    for (Index i = 0; i < n_angles; ++i) {
      const CVec w = steering_vector(kGeom, profile.angles_deg[i], f) / 6.0;
      expected[i] += std::norm(w.dot(a1)) + std::norm(w.dot(a2));
    }
  }
  Index e1;
  expected.maxCoeff(&e1);
  const bool oracle_peak_at_source =
      angle_error_deg(profile.angles_deg[e1], 90.0) <= 1.0 ||
      angle_error_deg(profile.angles_deg[e1], 270.0) <= 1.0;
  CHECK(oracle_peak_at_source);

  const auto is_local_max = [&](const Vec& p, Index i) {
    const Index prev = (i + n_angles - 1) % n_angles, next = (i + 1) % n_angles;
    return p[i] >= p[prev] && p[i] >= p[next];
  };
  bool found90 = false, found270 = false;
  for (Index i = 0; i < n_angles; ++i) {
    if (!is_local_max(profile.power, i)) continue;
    if (angle_error_deg(profile.angles_deg[i], 90.0) <= 2.0) found90 = true;
    if (angle_error_deg(profile.angles_deg[i], 270.0) <= 2.0) found270 = true;
  }
  CHECK(found90);
  CHECK(found270);
}

TEST_CASE("empty band is rejected") {
  StftConfig cfg;
  LocalizationParams params;
  params.band_low_hz = 3010.0;  // no bin center between 3010 and 3020 Hz
  params.band_high_hz = 3020.0;
  const auto x = MultichannelSignal::zeros(4096, 6, 16000);
  CHECK_THROWS_AS(steered_power_scan(analyze(x, cfg), kGeom, cfg, params), InvalidArgument);
  params.band_high_hz = 2000.0;
  CHECK_THROWS_AS(params.validate(), InvalidArgument);
}

TEST_CASE("rotation equivariance within one grid step") {
  StftConfig cfg;
  LocalizationParams params;
  params.grid_step_deg = 2.0;
  const Vec src = oracle::gaussian_vector(24000, 31);
  const auto base = steered_power_scan(analyze(noise_from(src, 50.0), cfg), kGeom, cfg, params);
  for (Scalar delta : {60.0, 144.0, 262.0}) {
    const auto rotated =
        steered_power_scan(analyze(noise_from(src, 50.0 + delta), cfg), kGeom, cfg, params);
    const Scalar want = wrap_azimuth_deg(base.estimated_doa_deg + delta);
    CHECK(angle_error_deg(rotated.estimated_doa_deg, want) <= params.grid_step_deg);
  }
}

TEST_CASE("scaling the input does not move the argmax") {
  StftConfig cfg;
  const Vec src = oracle::gaussian_vector(24000, 32);
  const auto x = noise_from(src, 117.0);
  MultichannelSignal scaled = x;
  scaled.samples *= 37.5;
  const auto p1 = steered_power_scan(analyze(x, cfg), kGeom, cfg, LocalizationParams{});
  const auto p2 = steered_power_scan(analyze(scaled, cfg), kGeom, cfg, LocalizationParams{});
  CHECK(p1.estimated_doa_deg == p2.estimated_doa_deg);
  CHECK(p1.peak_to_median_db == doctest::Approx(p2.peak_to_median_db).epsilon(1e-9));
}

TEST_CASE("halving the grid step never increases the error") {
  StftConfig cfg;
  const Scalar truth = 123.4;  // off-grid on purpose
  const Vec src = oracle::gaussian_vector(24000, 33);
  const auto spec = analyze(noise_from(src, truth), cfg);
  Scalar prev_err = 1e9;
  for (Scalar step : {4.0, 2.0, 1.0}) {
    LocalizationParams params;
    params.grid_step_deg = step;
    const auto p = steered_power_scan(spec, kGeom, cfg, params);
    const Scalar err = angle_error_deg(p.estimated_doa_deg, truth);
    CHECK(err <= prev_err + 1e-9);
    prev_err = err;
  }
}

TEST_CASE("localize_then_enhance on a clean target") {
  // Composition of verified parts: bin-centered tones with the rect window
  // keep the blocked branch at exactly zero, so the output is the source.
  StftConfig cfg;
  cfg.window = Window::Rect;
  const Index length = 16000;
  Vec src = Vec::Zero(length);
  MultichannelSignal x = MultichannelSignal::zeros(length, 6, 16000);
  for (Index k0 : {40, 56, 88}) {
    const Scalar f0 = cfg.bin_hz(k0);
    x.samples += oracle::closed_form_plane_wave(kGeom, 180.0, f0, length, 0.3).samples;
    for (Index n = 0; n < length; ++n)
      src[n] += 0.3 * std::sin(2.0 * kPi * f0 * static_cast<Scalar>(n) / 16000.0);
  }
  const auto res =
      localize_then_enhance(x, kGeom, cfg, LocalizationParams{}, RlsParams{});
  CHECK(res.doa_deg == 180.0);
  CHECK(res.enhanced.length() == x.length());
  const Scalar err = (res.enhanced.samples.col(0).segment(1024, length - 2048) -
                      src.segment(1024, length - 2048))
                         .norm();
  CHECK(err <= 1e-6 * src.norm());
}

TEST_CASE("wideband speech keeps most of its energy through the gsc") {
  // With a tapered window the blocked branch carries a little target leakage
  // and the canceller eats some of it; the output must still be dominated by
  // the source.
  StftConfig cfg;
  const Vec src = speech_like(1.5, 16000, 8);
  const auto x = noise_from(src, 180.0);
  const auto res =
      localize_then_enhance(x, kGeom, cfg, LocalizationParams{}, RlsParams{});
  CHECK(res.doa_deg == 180.0);
  const Vec out = res.enhanced.samples.col(0);
  CHECK(snr_db(src, out) >= 6.0);
}

TEST_CASE("silence reports no dominant peak") {
  StftConfig cfg;
  const auto x = MultichannelSignal::zeros(16000, 6, 16000);
  CHECK_THROWS_AS(
      localize_then_enhance(x, kGeom, cfg, LocalizationParams{}, RlsParams{}),
      DataError);
}

TEST_CASE("rotor noise at -10 dB localizes within 5 degrees") {
  StftConfig cfg;
  for (int i = 0; i < 5; ++i) {
    ScenarioSpec spec;
    spec.source_azimuth_deg = 180.0;
    spec.target_snr_db = -10.0;
    spec.seed = 100 + i;
    const Vec speech = speech_like(2.0, 16000, 500 + i);
    const auto speech_mc = noise_from(speech, 180.0);
    const auto noise = generate_rotor_noise(RotorNoiseModel{}, kGeom, 4.0, 900 + i);
    const auto mix = mix_at_snr(speech_mc, noise, spec);
    const auto profile =
        steered_power_scan(analyze(mix.mixture, cfg), kGeom, cfg, LocalizationParams{});
    CHECK(angle_error_deg(profile.estimated_doa_deg, 180.0) <= 5.0);
  }
}

TEST_CASE("profile csv export is normalized to 0 dB peak") {
  StftConfig cfg;
  const Vec src = oracle::gaussian_vector(16000, 40);
  const auto profile =
      steered_power_scan(analyze(noise_from(src, 200.0), cfg), kGeom, cfg,
                         LocalizationParams{});
  const auto path = std::filesystem::temp_directory_path() / "dasp_profile_test.csv";
  write_profile_csv(path.string(), profile);

  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  CHECK(header == "angle_deg,power_db");
  Scalar max_db = -1e9;
  std::string line;
  Index rows = 0;
  while (std::getline(is, line)) {
    Scalar angle, db;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &angle, &db) == 2);
    max_db = std::max(max_db, db);
    ++rows;
  }
  CHECK(rows == profile.angles_deg.size());
  CHECK(max_db == doctest::Approx(0.0).epsilon(1e-9));
  std::filesystem::remove(path);
}

TEST_SUITE_END();
