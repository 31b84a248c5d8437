// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_LOCALIZATION_HPP
#define DASP_LOCALIZATION_HPP

#include <string>

#include "dasp/geometry.hpp"
#include "dasp/gsc.hpp"
#include "dasp/stft.hpp"
#include "dasp/types.hpp"

namespace dasp {

struct LocalizationParams {
  Scalar grid_step_deg = 1.0;
  Scalar band_low_hz = 1000.0;  // below: blade-passage harmonics dominate
  Scalar band_high_hz = 4000.0; // above: spatial aliasing for a 3.5 cm radius
  Scalar peak_threshold_db = 3.0;  // min peak-to-median ratio to accept a source
  void validate() const;
};

/// Steered response power over the azimuth grid. Power is linear and
/// non-negative; estimated_doa_deg is the grid argmax.
struct SrpProfile {
  Vec angles_deg;
  Vec power;
  Scalar estimated_doa_deg = 0.0;
  Scalar peak_to_median_db = 0.0;
  Scalar band_low_hz = 0.0;
  Scalar band_high_hz = 0.0;

  bool has_dominant_peak(Scalar threshold_db) const {
    return peak_to_median_db >= threshold_db;
  }
};

/// P(theta) = sum over frames and in-band bins of |w_c(theta,k)^H x(l,k)|^2
/// with the delay-and-sum weights of the fixed branch. Independent of any
/// adaptive state.
SrpProfile steered_power_scan(const SpectrogramTensor& spec, const ArrayGeometry& geom,
                              const StftConfig& cfg, const LocalizationParams& params);

struct LocalizeEnhanceResult {
  Scalar doa_deg = 0.0;
  MultichannelSignal enhanced;
  SrpProfile profile;
  GscDiagnostics diagnostics;
};

/// Scans for the source, steers the GSC at the argmax and runs it. Throws
/// DataError when no dominant peak clears the threshold.
LocalizeEnhanceResult localize_then_enhance(const MultichannelSignal& signal,
                                            const ArrayGeometry& geom,
                                            const StftConfig& cfg,
                                            const LocalizationParams& loc_params,
                                            const RlsParams& rls_params);

/// CSV export (angle_deg, power_db), normalized so the peak sits at 0 dB.
void write_profile_csv(const std::string& path, const SrpProfile& profile);

}  // namespace dasp

#endif  // DASP_LOCALIZATION_HPP
