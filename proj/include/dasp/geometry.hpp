// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_GEOMETRY_HPP
#define DASP_GEOMETRY_HPP

#include "dasp/stft.hpp"
#include "dasp/types.hpp"

namespace dasp {

/// Microphone positions (meters, one column per mic) relative to the array
/// geometric center, which is the phase reference for all steering vectors.
struct ArrayGeometry {
  Mat positions;  // 3 x M
  Scalar speed_of_sound = 343.0;
  Scalar sample_rate = 16000.0;

  Index mic_count() const { return positions.cols(); }

  /// M mics uniformly spaced on a circle in the z = 0 plane, mic 0 at
  /// azimuth 0 (counterclockwise from +x).
  static ArrayGeometry uniform_circular(Index mics = 6, Scalar radius_m = 0.035,
                                        Scalar speed_of_sound = 343.0,
                                        Scalar sample_rate = 16000.0);
  static ArrayGeometry from_positions(Mat positions_3xM, Scalar speed_of_sound = 343.0,
                                      Scalar sample_rate = 16000.0);

  void validate() const;
};

/// Freefield plane-wave steering vector a(theta, f): entry m is
/// exp(j k . r_m) with wave vector k = -(omega/c) kappa and kappa the unit
/// vector from the array center toward the source. Entries have unit
/// modulus; a mic at the origin maps to 1 + 0j. Negative frequencies are
/// accepted (a(theta, -f) = conj(a(theta, f))); |f| above Nyquist throws.
CVec steering_vector(const ArrayGeometry& geom, Scalar azimuth_deg, Scalar frequency_hz);

/// steering_vector() evaluated at every one-sided bin center; M x bins.
CMat steering_matrix(const ArrayGeometry& geom, Scalar azimuth_deg, const StftConfig& cfg);

/// Arrival-time advance of mic m relative to the array center for a far-field
/// source at the given azimuth (positive toward the source).
Vec arrival_advances_s(const ArrayGeometry& geom, Scalar azimuth_deg);

}  // namespace dasp

#endif  // DASP_GEOMETRY_HPP
