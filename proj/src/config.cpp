// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace dasp {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

Scalar parse_scalar(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const Scalar v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw InvalidArgument("config: '" + key + "' expects a number, got '" + value + "'");
  return v;
}

Index parse_index(const std::string& key, const std::string& value) {
  const Scalar v = parse_scalar(key, value);
  const Index i = static_cast<Index>(v);
  if (static_cast<Scalar>(i) != v)
    throw InvalidArgument("config: '" + key + "' expects an integer, got '" + value + "'");
  return i;
}

Mat parse_positions(const std::string& text) {
  std::vector<Eigen::Vector3d> mics;
  std::stringstream ss(text);
  std::string entry;
  while (std::getline(ss, entry, ';')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    Eigen::Vector3d p;
    std::stringstream es(entry);
    std::string coord;
    int i = 0;
    while (std::getline(es, coord, ',')) {
      if (i >= 3) throw InvalidArgument("config: geometry.positions entry '" + entry +
                                        "' has more than 3 coordinates");
      p[i++] = parse_scalar("geometry.positions", trim(coord));
    }
    if (i != 3)
      throw InvalidArgument("config: geometry.positions entry '" + entry +
                            "' needs 3 coordinates");
    mics.push_back(p);
  }
  if (mics.size() < 2)
    throw InvalidArgument("config: geometry.positions needs at least 2 microphones");
  Mat out(3, static_cast<Index>(mics.size()));
  for (Index m = 0; m < out.cols(); ++m) out.col(m) = mics[m];
  return out;
}

}  // namespace

ArrayGeometry PipelineConfig::make_geometry() const {
  if (geometry_positions.has_value())
    return ArrayGeometry::from_positions(parse_positions(*geometry_positions),
                                         speed_of_sound, stft.sample_rate);
  return ArrayGeometry::uniform_circular(geometry_mic_count, geometry_radius_m,
                                         speed_of_sound, stft.sample_rate);
}

void PipelineConfig::validate() const {
  stft.validate();
  rls.validate();
  localization.validate();
  postfilter.validate();
  make_geometry();  // throws on bad geometry values
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  return from_string(buffer.str());
}

PipelineConfig PipelineConfig::from_string(const std::string& text) {
  PipelineConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "sample_rate") cfg.stft.sample_rate = parse_scalar(key, value);
    else if (key == "stft.frame_length") cfg.stft.frame_length = parse_index(key, value);
    else if (key == "stft.hop_length") cfg.stft.hop_length = parse_index(key, value);
    else if (key == "stft.fft_size") cfg.stft.fft_size = parse_index(key, value);
    else if (key == "stft.window") cfg.stft.window = window_from_string(value);
    else if (key == "geometry.mic_count") cfg.geometry_mic_count = parse_index(key, value);
    else if (key == "geometry.radius_m") cfg.geometry_radius_m = parse_scalar(key, value);
    else if (key == "geometry.speed_of_sound") cfg.speed_of_sound = parse_scalar(key, value);
    else if (key == "geometry.positions") cfg.geometry_positions = value;
    else if (key == "rls.lambda") cfg.rls.lambda = parse_scalar(key, value);
    else if (key == "rls.delta_reg") cfg.rls.delta_reg = parse_scalar(key, value);
    else if (key == "localization.grid_step_deg")
      cfg.localization.grid_step_deg = parse_scalar(key, value);
    else if (key == "localization.band_low_hz")
      cfg.localization.band_low_hz = parse_scalar(key, value);
    else if (key == "localization.band_high_hz")
      cfg.localization.band_high_hz = parse_scalar(key, value);
    else if (key == "localization.peak_threshold_db")
      cfg.localization.peak_threshold_db = parse_scalar(key, value);
    else if (key == "postfilter.kind") cfg.postfilter.kind = postfilter_kind_from_string(value);
    else if (key == "postfilter.alpha") cfg.postfilter.alpha = parse_scalar(key, value);
    else if (key == "postfilter.gain_floor_db")
      cfg.postfilter.gain_floor_db = parse_scalar(key, value);
    else if (key == "postfilter.external_cmd") cfg.postfilter.external_command = value;
    else if (key == "postfilter.exchange_format")
      cfg.postfilter.exchange_format = wav_format_from_string(value);
    else
      throw InvalidArgument("config line " + std::to_string(line_no) + ": unknown key '" +
                            key + "'");
  }
  cfg.validate();
  return cfg;
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j;
  j["sample_rate"] = stft.sample_rate;
  j["stft"] = {{"frame_length", stft.frame_length},
               {"hop_length", stft.hop_length},
               {"fft_size", stft.fft_size},
               {"window", to_string(stft.window)}};
  j["geometry"] = {{"mic_count", geometry_mic_count},
                   {"radius_m", geometry_radius_m},
                   {"speed_of_sound", speed_of_sound}};
  if (geometry_positions.has_value()) j["geometry"]["positions"] = *geometry_positions;
  j["rls"] = {{"lambda", rls.lambda}, {"delta_reg", rls.delta_reg}};
  j["localization"] = {{"grid_step_deg", localization.grid_step_deg},
                       {"band_low_hz", localization.band_low_hz},
                       {"band_high_hz", localization.band_high_hz},
                       {"peak_threshold_db", localization.peak_threshold_db}};
  j["postfilter"] = {{"kind", to_string(postfilter.kind)},
                     {"alpha", postfilter.alpha},
                     {"gain_floor_db", postfilter.gain_floor_db},
                     {"external_cmd", postfilter.external_command},
                     {"exchange_format", to_string(postfilter.exchange_format)}};
  return j;
}

}  // namespace dasp
