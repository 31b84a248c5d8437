// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/localization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

namespace dasp {

void LocalizationParams::validate() const {
  if (grid_step_deg <= 0 || grid_step_deg > 120)
    throw InvalidArgument("localization: grid_step_deg must be in (0, 120]");
  if (band_low_hz < 0 || band_high_hz <= band_low_hz)
    throw InvalidArgument("localization: need 0 <= band_low_hz < band_high_hz");
  if (peak_threshold_db < 0)
    throw InvalidArgument("localization: peak_threshold_db must be >= 0");
}

SrpProfile steered_power_scan(const SpectrogramTensor& spec, const ArrayGeometry& geom,
                              const StftConfig& cfg, const LocalizationParams& params) {
  params.validate();
  cfg.validate();
  geom.validate();
  if (spec.channel_count() != geom.mic_count())
    throw DataError("steered_power_scan: channel/microphone count mismatch");
  if (params.band_high_hz > cfg.sample_rate / 2.0 + 1e-9)
    throw InvalidArgument("steered_power_scan: band exceeds Nyquist");

  const Index k_lo = static_cast<Index>(
      std::ceil(params.band_low_hz * cfg.fft_size / cfg.sample_rate));
  const Index k_hi = std::min<Index>(
      cfg.bins() - 1,
      static_cast<Index>(std::floor(params.band_high_hz * cfg.fft_size / cfg.sample_rate)));
  if (k_lo > k_hi)
    throw InvalidArgument("steered_power_scan: empty frequency band " +
                          std::to_string(params.band_low_hz) + ".." +
                          std::to_string(params.band_high_hz) + " Hz");

  const Index n_angles = static_cast<Index>(std::llround(360.0 / params.grid_step_deg));
  const Index mics = geom.mic_count();
  const Index frames = spec.frames();

  SrpProfile profile;
  profile.angles_deg = Vec(n_angles);
  profile.power = Vec::Zero(n_angles);
  profile.band_low_hz = params.band_low_hz;
  profile.band_high_hz = params.band_high_hz;
  for (Index i = 0; i < n_angles; ++i)
    profile.angles_deg[i] = static_cast<Scalar>(i) * params.grid_step_deg;

  // Per angle: arrival advances are frequency-independent, so precompute
  // them and build the per-bin delay-and-sum weight on the fly.
  Mat advances(mics, n_angles);
  for (Index i = 0; i < n_angles; ++i)
    advances.col(i) = arrival_advances_s(geom, profile.angles_deg[i]);

  CMat x_bin(mics, frames);
  CVec w(mics);
  for (Index k = k_lo; k <= k_hi; ++k) {
    for (Index m = 0; m < mics; ++m) x_bin.row(m) = spec.channels[m].row(k);
    const Scalar omega = 2.0 * kPi * cfg.bin_hz(k);
    for (Index i = 0; i < n_angles; ++i) {
      for (Index m = 0; m < mics; ++m) {
        const Scalar phase = -omega * advances(m, i);
        w[m] = Complex(std::cos(phase), std::sin(phase));
      }
      w /= static_cast<Scalar>(mics);
      profile.power[i] += (w.adjoint() * x_bin).squaredNorm();
    }
  }

  Index argmax = 0;
  profile.power.maxCoeff(&argmax);
  profile.estimated_doa_deg = profile.angles_deg[argmax];

  std::vector<Scalar> sorted(profile.power.begin(), profile.power.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const Scalar median = sorted[sorted.size() / 2];
  profile.peak_to_median_db =
      median > 0 ? db_from_power(profile.power[argmax] / median)
                 : (profile.power[argmax] > 0 ? 1e9 : 0.0);
  return profile;
}

LocalizeEnhanceResult localize_then_enhance(const MultichannelSignal& signal,
                                            const ArrayGeometry& geom,
                                            const StftConfig& cfg,
                                            const LocalizationParams& loc_params,
                                            const RlsParams& rls_params) {
  const SpectrogramTensor spec = analyze(signal, cfg);
  SrpProfile profile = steered_power_scan(spec, geom, cfg, loc_params);
  if (!profile.has_dominant_peak(loc_params.peak_threshold_db))
    throw DataError("no dominant peak in the steered power profile (peak-to-median " +
                    std::to_string(profile.peak_to_median_db) + " dB < " +
                    std::to_string(loc_params.peak_threshold_db) + " dB)");

  GscTensorResult gsc = gsc_process_tensor(spec, profile.estimated_doa_deg, geom, cfg,
                                           rls_params);
  LocalizeEnhanceResult res;
  res.doa_deg = profile.estimated_doa_deg;
  res.enhanced = synthesize(gsc.output, cfg, signal.length());
  res.profile = std::move(profile);
  res.diagnostics = std::move(gsc.diagnostics);
  return res;
}

void write_profile_csv(const std::string& path, const SrpProfile& profile) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot create profile csv: " + path);
  os << "angle_deg,power_db\n";
  const Scalar peak = profile.power.maxCoeff();
  const Scalar ref = peak > 0 ? peak : 1.0;
  char line[64];
  for (Index i = 0; i < profile.angles_deg.size(); ++i) {
    const Scalar p = profile.power[i] > 0 ? db_from_power(profile.power[i] / ref) : -999.0;
    std::snprintf(line, sizeof(line), "%.3f,%.6f\n", profile.angles_deg[i], p);
    os << line;
  }
  if (!os) throw DataError("failed writing profile csv: " + path);
}

}  // namespace dasp
