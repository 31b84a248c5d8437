// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// dasp: localize a speech source and suppress drone rotor egonoise captured
// by a circular microphone array. Subcommands: mix, localize, enhance,
// evaluate, detect-range.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dasp/config.hpp"
#include "dasp/localization.hpp"
#include "dasp/metrics.hpp"
#include "dasp/postfilter.hpp"
#include "dasp/scenario.hpp"
#include "dasp/wav.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

using dasp::Index;
using dasp::Scalar;

struct CommonOptions {
  std::optional<std::string> config_path;

  dasp::PipelineConfig load() const {
    if (config_path.has_value()) return dasp::PipelineConfig::from_file(*config_path);
    return dasp::PipelineConfig{};
  }
};

nlohmann::json diagnostics_json(const dasp::GscDiagnostics& diag,
                                const dasp::PipelineConfig& cfg,
                                const std::string& doa_source,
                                const dasp::SrpProfile* profile) {
  nlohmann::json j;
  j["doa_deg"] = diag.theta_deg;
  j["doa_source"] = doa_source;
  j["frame_output_power"] =
      std::vector<Scalar>(diag.frame_output_power.begin(), diag.frame_output_power.end());
  j["frame_apriori_power"] =
      std::vector<Scalar>(diag.frame_apriori_power.begin(), diag.frame_apriori_power.end());
  j["final_weight_norms"] =
      std::vector<Scalar>(diag.final_weight_norms.begin(), diag.final_weight_norms.end());
  if (profile) j["peak_to_median_db"] = profile->peak_to_median_db;
  j["effective_config"] = cfg.to_json();
  return j;
}

int run_mix(const CommonOptions& common, const std::string& batch_path,
            const std::string& out_dir, const std::string& wav_format) {
  const dasp::PipelineConfig cfg = common.load();
  dasp::MixBatch batch = dasp::MixBatch::from_file(batch_path);
  dasp::PipelineConfig geom_cfg = cfg;
  geom_cfg.stft.sample_rate = batch.sample_rate;
  const dasp::ArrayGeometry geom = geom_cfg.make_geometry();
  const std::string manifest =
      dasp::run_mix_batch(batch, geom, out_dir, dasp::wav_format_from_string(wav_format));
  std::cout << "wrote " << batch.scenarios.size() << " scenarios, manifest: " << manifest
            << "\n";
  return 0;
}

int run_localize(const CommonOptions& common, const std::string& input,
                 const std::string& profile_csv) {
  const dasp::PipelineConfig cfg = common.load();
  const dasp::MultichannelSignal signal = dasp::read_wav(input);
  if (signal.sample_rate != cfg.stft.sample_rate)
    throw dasp::DataError("input sample rate " + std::to_string(signal.sample_rate) +
                          " does not match config rate " +
                          std::to_string(cfg.stft.sample_rate) + " (no resampling)");
  const dasp::ArrayGeometry geom = cfg.make_geometry();
  const dasp::SpectrogramTensor spec = dasp::analyze(signal, cfg.stft);
  const dasp::SrpProfile profile =
      dasp::steered_power_scan(spec, geom, cfg.stft, cfg.localization);
  if (!profile_csv.empty()) dasp::write_profile_csv(profile_csv, profile);
  if (!profile.has_dominant_peak(cfg.localization.peak_threshold_db)) {
    std::cerr << "no dominant peak (peak-to-median " << profile.peak_to_median_db
              << " dB below threshold " << cfg.localization.peak_threshold_db << " dB)\n";
    return kExitData;
  }
  std::cout << "doa_deg=" << profile.estimated_doa_deg
            << " peak_to_median_db=" << profile.peak_to_median_db << "\n";
  return 0;
}

int run_enhance(const CommonOptions& common, const std::string& input,
                const std::string& output, const std::string& theta,
                const std::string& diagnostics_path, const std::string& out_format,
                const std::optional<std::string>& postfilter,
                const std::optional<std::string>& external_cmd,
                const std::optional<Scalar> lambda, const std::optional<Scalar> delta_reg) {
  dasp::PipelineConfig cfg = common.load();
  if (postfilter) cfg.postfilter.kind = dasp::postfilter_kind_from_string(*postfilter);
  if (external_cmd) cfg.postfilter.external_command = *external_cmd;
  if (lambda) cfg.rls.lambda = *lambda;
  if (delta_reg) cfg.rls.delta_reg = *delta_reg;
  cfg.validate();

  const dasp::MultichannelSignal signal = dasp::read_wav(input);
  if (signal.sample_rate != cfg.stft.sample_rate)
    throw dasp::DataError("input sample rate " + std::to_string(signal.sample_rate) +
                          " does not match config rate " +
                          std::to_string(cfg.stft.sample_rate) + " (no resampling)");
  const dasp::ArrayGeometry geom = cfg.make_geometry();

  dasp::MultichannelSignal gsc_out;
  dasp::GscDiagnostics diag;
  std::optional<dasp::SrpProfile> profile;
  std::string doa_source;
  if (theta == "auto") {
    dasp::LocalizeEnhanceResult r = dasp::localize_then_enhance(
        signal, geom, cfg.stft, cfg.localization, cfg.rls);
    gsc_out = std::move(r.enhanced);
    diag = std::move(r.diagnostics);
    profile = std::move(r.profile);
    doa_source = "auto";
  } else {
    Scalar theta_deg = 0;
    try {
      theta_deg = std::stod(theta);
    } catch (const std::exception&) {
      throw dasp::InvalidArgument("--theta expects degrees or 'auto', got '" + theta + "'");
    }
    dasp::GscResult r = dasp::gsc_process(signal, theta_deg, geom, cfg.stft, cfg.rls);
    gsc_out = std::move(r.enhanced);
    diag = std::move(r.diagnostics);
    doa_source = "flag";
  }

  const dasp::MultichannelSignal enhanced =
      dasp::apply_postfilter(gsc_out, cfg.stft, cfg.postfilter);
  dasp::write_wav(output, enhanced, dasp::wav_format_from_string(out_format));

  if (!diagnostics_path.empty()) {
    nlohmann::json j =
        diagnostics_json(diag, cfg, doa_source, profile ? &*profile : nullptr);
    j["postfilter"] = dasp::to_string(cfg.postfilter.kind);
    std::ofstream os(diagnostics_path);
    if (!os) throw dasp::DataError("cannot create diagnostics json: " + diagnostics_path);
    os << j.dump(2) << '\n';
  }
  std::cout << "doa_deg=" << diag.theta_deg << " output=" << output << "\n";
  return 0;
}

int run_evaluate(const std::string& manifest, const std::string& enhanced_dir,
                 const std::string& csv, const std::string& json_path) {
  const dasp::BatchReport report = dasp::evaluate_batch(manifest, enhanced_dir);
  if (!csv.empty()) dasp::write_report_csv(csv, report);
  if (!json_path.empty()) dasp::write_report_json(json_path, report);
  for (const dasp::ConditionAggregate& a : report.aggregates)
    std::cout << "snr_db=" << a.input_snr_db << " n=" << a.count
              << " mean_d_snr=" << a.mean_d_snr << " mean_d_si_sdr=" << a.mean_d_si_sdr
              << "\n";
  Index failed = 0;
  for (const dasp::ScenarioRow& r : report.rows)
    if (!r.ok) {
      std::cerr << "scenario " << r.id << " failed: " << r.error << "\n";
      ++failed;
    }
  return failed == 0 ? 0 : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drone egonoise suppression and speaker localization"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--config", common.config_path, "pipeline config file (key = value)");

  auto* mix = app.add_subcommand("mix", "render scenario batch to wav triples + manifest");
  std::string batch_path, out_dir, mix_format = "float32";
  mix->add_option("--batch", batch_path, "batch description json")->required();
  mix->add_option("--out-dir", out_dir, "output directory")->required();
  mix->add_option("--wav-format", mix_format, "pcm16|float32|float64 (default float32)");

  auto* localize = app.add_subcommand("localize", "estimate the source direction");
  std::string loc_input, profile_csv;
  localize->add_option("input", loc_input, "multichannel wav")->required();
  localize->add_option("--profile-csv", profile_csv, "write the power-vs-angle profile");

  auto* enhance = app.add_subcommand("enhance", "run the GSC front end + postfilter");
  std::string enh_input, enh_output, theta = "auto", diagnostics, out_format = "float32";
  std::optional<std::string> postfilter, external_cmd;
  std::optional<Scalar> lambda, delta_reg;
  enhance->add_option("input", enh_input, "multichannel wav")->required();
  enhance->add_option("--out", enh_output, "enhanced mono wav")->required();
  enhance->add_option("--theta", theta, "look direction in degrees, or 'auto'");
  enhance->add_option("--diagnostics", diagnostics, "write diagnostics json");
  enhance->add_option("--output-format", out_format, "pcm16|float32|float64");
  enhance->add_option("--postfilter", postfilter, "none|wiener|external");
  enhance->add_option("--external-cmd", external_cmd,
                      "external enhancer template with {in} {out}");
  enhance->add_option("--lambda", lambda, "RLS forgetting factor");
  enhance->add_option("--delta-reg", delta_reg, "RLS initialization scale");

  auto* evaluate = app.add_subcommand("evaluate", "score enhanced files against a manifest");
  std::string manifest, enhanced_dir, report_csv, report_json;
  evaluate->add_option("--manifest", manifest, "manifest json from mix")->required();
  evaluate->add_option("--enhanced-dir", enhanced_dir, "directory with <id>.wav")->required();
  evaluate->add_option("--csv", report_csv, "write per-scenario csv");
  evaluate->add_option("--json", report_json, "write report json");

  auto* detect = app.add_subcommand("detect-range", "effective detection distance");
  Scalar l_source = 0, l_drone = 0, snr_th = 0;
  detect->add_option("--source-level-db", l_source, "source SPL at 1 m")->required();
  detect->add_option("--drone-level-db", l_drone, "egonoise SPL at the mic")->required();
  detect->add_option("--snr-threshold-db", snr_th, "input SNR threshold")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (mix->parsed()) return run_mix(common, batch_path, out_dir, mix_format);
    if (localize->parsed()) return run_localize(common, loc_input, profile_csv);
    if (enhance->parsed())
      return run_enhance(common, enh_input, enh_output, theta, diagnostics, out_format,
                         postfilter, external_cmd, lambda, delta_reg);
    if (evaluate->parsed()) return run_evaluate(manifest, enhanced_dir, report_csv, report_json);
    if (detect->parsed()) {
      std::cout << "r_eff_m=" << dasp::detection_distance_m(l_source, l_drone, snr_th)
                << "\n";
      return 0;
    }
  } catch (const dasp::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const dasp::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dasp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
