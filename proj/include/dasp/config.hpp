// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_CONFIG_HPP
#define DASP_CONFIG_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "dasp/geometry.hpp"
#include "dasp/gsc.hpp"
#include "dasp/localization.hpp"
#include "dasp/postfilter.hpp"
#include "dasp/stft.hpp"

namespace dasp {

/// Defaults plus everything the `key = value` config file can override.
/// Unknown keys are rejected.
struct PipelineConfig {
  StftConfig stft;
  Index geometry_mic_count = 6;
  Scalar geometry_radius_m = 0.035;
  Scalar speed_of_sound = 343.0;
  std::optional<std::string> geometry_positions;  // "x,y,z; x,y,z; ..." overrides count/radius
  RlsParams rls;
  LocalizationParams localization;
  PostfilterSpec postfilter;

  ArrayGeometry make_geometry() const;
  void validate() const;

  /// Echo of every effective value, used for diagnostics round-trips.
  nlohmann::json to_json() const;

  static PipelineConfig from_file(const std::string& path);
  static PipelineConfig from_string(const std::string& text);
};

}  // namespace dasp

#endif  // DASP_CONFIG_HPP
