// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "dasp/wav.hpp"

namespace dasp {

namespace {

Scalar capped_ratio_db(Scalar num, Scalar den) {
  if (den <= 0.0) return kMetricCapDb;
  if (num <= 0.0) return -kMetricCapDb;
  return std::clamp(db_from_power(num / den), -kMetricCapDb, kMetricCapDb);
}

void check_pair(const Vec& clean, const Vec& estimate) {
  if (clean.size() == 0) throw InvalidArgument("metric: empty segment");
  if (clean.size() != estimate.size())
    throw InvalidArgument("metric: clean and estimate lengths differ (" +
                          std::to_string(clean.size()) + " vs " +
                          std::to_string(estimate.size()) + ")");
  if (clean.squaredNorm() <= 0.0)
    throw InvalidArgument("metric: clean reference has zero energy");
}

}  // namespace

Scalar snr_db(const Vec& clean, const Vec& estimate) {
  check_pair(clean, estimate);
  return capped_ratio_db(clean.squaredNorm(), (estimate - clean).squaredNorm());
}

Scalar snr_db(const Vec& clean, const Vec& estimate, Index segment_begin,
              Index segment_length) {
  return snr_db(clean.segment(segment_begin, segment_length),
                estimate.segment(segment_begin, segment_length));
}

Scalar si_sdr_db(const Vec& clean, const Vec& estimate) {
  check_pair(clean, estimate);
  const Scalar scale = estimate.dot(clean) / clean.squaredNorm();
  const Vec target = scale * clean;
  return capped_ratio_db(target.squaredNorm(), (estimate - target).squaredNorm());
}

Scalar si_sdr_db(const Vec& clean, const Vec& estimate, Index segment_begin,
                 Index segment_length) {
  return si_sdr_db(clean.segment(segment_begin, segment_length),
                   estimate.segment(segment_begin, segment_length));
}

Scalar detection_distance_m(Scalar l_source_1m_db, Scalar l_drone_db, Scalar snr_th_db) {
  if (!std::isfinite(l_source_1m_db) || !std::isfinite(l_drone_db) ||
      !std::isfinite(snr_th_db))
    throw InvalidArgument("detection distance: non-finite input");
  const Scalar delta = (l_source_1m_db - l_drone_db - snr_th_db) / 20.0;
  return std::pow(10.0, delta);
}

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open json file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed json in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

BatchReport evaluate_batch(const std::string& manifest_path,
                           const std::string& enhanced_dir) {
  const json manifest = load_json(manifest_path);
  if (!manifest.contains("scenarios") || !manifest["scenarios"].is_array())
    throw DataError("manifest has no scenarios array: " + manifest_path);
  const auto base = std::filesystem::path(manifest_path).parent_path();
  const auto enh = std::filesystem::path(enhanced_dir);

  BatchReport report;
  for (const json& sc : manifest["scenarios"]) {
    ScenarioRow row;
    try {
      row.id = sc.at("id").get<std::string>();
      row.input_snr_db = sc.at("target_snr_db").get<Scalar>();
      row.doa_true_deg = sc.at("azimuth_deg").get<Scalar>();
      const Index seg_begin = sc.at("segment_begin").get<Index>();
      const Index seg_len = sc.at("segment_length").get<Index>();

      const MultichannelSignal mixture =
          read_wav((base / sc.at("mixture").get<std::string>()).string());
      const MultichannelSignal clean_ref =
          read_wav((base / sc.at("clean_ref").get<std::string>()).string());
      const MultichannelSignal enhanced = read_wav((enh / (row.id + ".wav")).string());
      if (enhanced.channel_count() != 1)
        throw DataError("enhanced file is not mono: " + row.id);
      if (enhanced.length() != mixture.length())
        throw DataError("enhanced length differs from the mixture: " + row.id);

      // One reference for both sides of the delta: the source as seen at the
      // array center, which is what the beamformer reconstructs. Identity
      // "enhancement" then gives exactly d = 0.
      const Vec mix_ch0 = mixture.channel(0);
      const Vec ref = clean_ref.channel(0);
      const Vec est = enhanced.channel(0);

      row.snr_in = snr_db(ref, mix_ch0, seg_begin, seg_len);
      row.snr_out = snr_db(ref, est, seg_begin, seg_len);
      row.d_snr = row.snr_out - row.snr_in;
      row.si_sdr_in = si_sdr_db(ref, mix_ch0, seg_begin, seg_len);
      row.si_sdr_out = si_sdr_db(ref, est, seg_begin, seg_len);
      row.d_si_sdr = row.si_sdr_out - row.si_sdr_in;

      const auto diag_path = enh / (row.id + ".json");
      if (std::filesystem::exists(diag_path)) {
        const json diag = load_json(diag_path.string());
        if (diag.contains("doa_deg")) row.doa_est_deg = diag["doa_deg"].get<Scalar>();
      }
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    } catch (const json::exception& e) {
      row.ok = false;
      row.error = std::string("manifest entry: ") + e.what();
    }
    report.rows.push_back(std::move(row));
  }

  std::map<Scalar, std::vector<const ScenarioRow*>> by_snr;
  for (const ScenarioRow& row : report.rows)
    if (row.ok) by_snr[row.input_snr_db].push_back(&row);
  for (const auto& [snr, rows] : by_snr) {
    ConditionAggregate agg;
    agg.input_snr_db = snr;
    agg.count = static_cast<Index>(rows.size());
    for (const ScenarioRow* r : rows) {
      agg.mean_d_snr += r->d_snr;
      agg.mean_d_si_sdr += r->d_si_sdr;
    }
    agg.mean_d_snr /= static_cast<Scalar>(agg.count);
    agg.mean_d_si_sdr /= static_cast<Scalar>(agg.count);
    for (const ScenarioRow* r : rows) {
      agg.std_d_snr += (r->d_snr - agg.mean_d_snr) * (r->d_snr - agg.mean_d_snr);
      agg.std_d_si_sdr +=
          (r->d_si_sdr - agg.mean_d_si_sdr) * (r->d_si_sdr - agg.mean_d_si_sdr);
    }
    agg.std_d_snr = std::sqrt(agg.std_d_snr / static_cast<Scalar>(agg.count));
    agg.std_d_si_sdr = std::sqrt(agg.std_d_si_sdr / static_cast<Scalar>(agg.count));
    report.aggregates.push_back(agg);
  }
  return report;
}

void write_report_csv(const std::string& path, const BatchReport& report) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot create report csv: " + path);
  os << "scenario_id,input_snr_db,doa_true,doa_est,snr_in,snr_out,d_snr,"
        "si_sdr_in,si_sdr_out,d_si_sdr\n";
  char buf[64];
  const auto num = [&](Scalar v) {
    if (std::isnan(v)) return std::string();
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  for (const ScenarioRow& r : report.rows) {
    os << r.id << ',' << num(r.input_snr_db) << ',' << num(r.doa_true_deg) << ','
       << num(r.doa_est_deg) << ',';
    if (r.ok) {
      os << num(r.snr_in) << ',' << num(r.snr_out) << ',' << num(r.d_snr) << ','
         << num(r.si_sdr_in) << ',' << num(r.si_sdr_out) << ',' << num(r.d_si_sdr);
    } else {
      os << ",,,,,";
    }
    os << '\n';
  }
  if (!os) throw DataError("failed writing report csv: " + path);
}

void write_report_json(const std::string& path, const BatchReport& report) {
  using nlohmann::json;
  json rows = json::array();
  for (const ScenarioRow& r : report.rows) {
    json row{{"scenario_id", r.id},
             {"input_snr_db", r.input_snr_db},
             {"doa_true", r.doa_true_deg},
             {"ok", r.ok}};
    if (!std::isnan(r.doa_est_deg)) row["doa_est"] = r.doa_est_deg;
    if (r.ok) {
      row["snr_in"] = r.snr_in;
      row["snr_out"] = r.snr_out;
      row["d_snr"] = r.d_snr;
      row["si_sdr_in"] = r.si_sdr_in;
      row["si_sdr_out"] = r.si_sdr_out;
      row["d_si_sdr"] = r.d_si_sdr;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(std::move(row));
  }
  json aggs = json::array();
  for (const ConditionAggregate& a : report.aggregates)
    aggs.push_back(json{{"input_snr_db", a.input_snr_db},
                        {"count", a.count},
                        {"mean_d_snr", a.mean_d_snr},
                        {"std_d_snr", a.std_d_snr},
                        {"mean_d_si_sdr", a.mean_d_si_sdr},
                        {"std_d_si_sdr", a.std_d_si_sdr}});
  std::ofstream os(path);
  if (!os) throw DataError("cannot create report json: " + path);
  os << json{{"rows", rows}, {"aggregates", aggs}}.dump(2) << '\n';
  if (!os) throw DataError("failed writing report json: " + path);
}

}  // namespace dasp
