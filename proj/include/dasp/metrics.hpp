// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_METRICS_HPP
#define DASP_METRICS_HPP

#include <limits>
#include <string>
#include <vector>

#include "dasp/types.hpp"

namespace dasp {

/// +-infinity sentinels are capped here so aggregates stay finite.
inline constexpr Scalar kMetricCapDb = 100.0;

/// 10 log10(||s||^2 / ||shat - s||^2). Capped at +-kMetricCapDb.
Scalar snr_db(const Vec& clean, const Vec& estimate);
Scalar snr_db(const Vec& clean, const Vec& estimate, Index segment_begin,
              Index segment_length);

/// Scale-invariant SDR: the estimate is projected onto the clean reference,
/// s_t = (<shat, s>/||s||^2) s, and the ratio ||s_t||^2/||shat - s_t||^2 is
/// reported in dB. Capped at +-kMetricCapDb.
Scalar si_sdr_db(const Vec& clean, const Vec& estimate);
Scalar si_sdr_db(const Vec& clean, const Vec& estimate, Index segment_begin,
                 Index segment_length);

/// Effective detection distance r_eff = 10^delta with
/// delta = (L_source(1m) - L_drone - SNR_th) / 20.
Scalar detection_distance_m(Scalar l_source_1m_db, Scalar l_drone_db, Scalar snr_th_db);

struct ScenarioRow {
  std::string id;
  Scalar input_snr_db = 0.0;  // target SNR of the condition
  Scalar doa_true_deg = 0.0;
  Scalar doa_est_deg = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar snr_in = 0.0, snr_out = 0.0, d_snr = 0.0;
  Scalar si_sdr_in = 0.0, si_sdr_out = 0.0, d_si_sdr = 0.0;
  bool ok = false;
  std::string error;
};

struct ConditionAggregate {
  Scalar input_snr_db = 0.0;
  Index count = 0;
  Scalar mean_d_snr = 0.0, std_d_snr = 0.0;
  Scalar mean_d_si_sdr = 0.0, std_d_si_sdr = 0.0;
};

struct BatchReport {
  std::vector<ScenarioRow> rows;
  std::vector<ConditionAggregate> aggregates;  // grouped by input SNR
};

/// Scores every scenario of a mix manifest against the enhanced files in
/// `enhanced_dir` (<id>.wav, optional <id>.json diagnostics for the DOA
/// estimate). Missing or broken files produce error rows; the batch
/// continues.
BatchReport evaluate_batch(const std::string& manifest_path,
                           const std::string& enhanced_dir);

void write_report_csv(const std::string& path, const BatchReport& report);
void write_report_json(const std::string& path, const BatchReport& report);

}  // namespace dasp

#endif  // DASP_METRICS_HPP
