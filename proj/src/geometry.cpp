// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/geometry.hpp"

#include <cmath>

namespace dasp {

ArrayGeometry ArrayGeometry::uniform_circular(Index mics, Scalar radius_m,
                                              Scalar speed_of_sound, Scalar sample_rate) {
  ArrayGeometry g;
  g.positions = Mat::Zero(3, mics);
  for (Index m = 0; m < mics; ++m) {
    const Scalar az = 2.0 * kPi * static_cast<Scalar>(m) / static_cast<Scalar>(mics);
    g.positions(0, m) = radius_m * std::cos(az);
    g.positions(1, m) = radius_m * std::sin(az);
  }
  g.speed_of_sound = speed_of_sound;
  g.sample_rate = sample_rate;
  g.validate();
  return g;
}

ArrayGeometry ArrayGeometry::from_positions(Mat positions_3xM, Scalar speed_of_sound,
                                            Scalar sample_rate) {
  ArrayGeometry g;
  g.positions = std::move(positions_3xM);
  g.speed_of_sound = speed_of_sound;
  g.sample_rate = sample_rate;
  g.validate();
  return g;
}

void ArrayGeometry::validate() const {
  if (positions.rows() != 3)
    throw InvalidArgument("geometry: positions must be 3 x M");
  if (mic_count() < 2) throw InvalidArgument("geometry: need at least 2 microphones");
  if (speed_of_sound <= 0) throw InvalidArgument("geometry: speed of sound must be positive");
  if (sample_rate <= 0) throw InvalidArgument("geometry: sample rate must be positive");
  for (Index i = 0; i < mic_count(); ++i)
    for (Index j = i + 1; j < mic_count(); ++j)
      if ((positions.col(i) - positions.col(j)).norm() < 1e-9)
        throw InvalidArgument("geometry: microphones " + std::to_string(i) + " and " +
                              std::to_string(j) + " coincide");
}

Vec arrival_advances_s(const ArrayGeometry& geom, Scalar azimuth_deg) {
  const Scalar az = deg_to_rad(wrap_azimuth_deg(azimuth_deg));
  Eigen::Vector3d look(std::cos(az), std::sin(az), 0.0);
  return (geom.positions.transpose() * look) / geom.speed_of_sound;
}

CVec steering_vector(const ArrayGeometry& geom, Scalar azimuth_deg, Scalar frequency_hz) {
  geom.validate();
  if (std::abs(frequency_hz) > geom.sample_rate / 2.0 + 1e-9)
    throw InvalidArgument("steering_vector: frequency " + std::to_string(frequency_hz) +
                          " Hz above Nyquist");
  const Scalar omega = 2.0 * kPi * frequency_hz;
  const Vec advance = arrival_advances_s(geom, azimuth_deg);
  CVec a(geom.mic_count());
  for (Index m = 0; m < geom.mic_count(); ++m) {
    // k . r_m = -(omega/c) kappa . r_m = -omega * advance_m
    const Scalar phase = -omega * advance[m];
    a[m] = Complex(std::cos(phase), std::sin(phase));
  }
  return a;
}

CMat steering_matrix(const ArrayGeometry& geom, Scalar azimuth_deg, const StftConfig& cfg) {
  geom.validate();
  cfg.validate();
  const Index bins = cfg.bins();
  const Vec advance = arrival_advances_s(geom, azimuth_deg);
  CMat table(geom.mic_count(), bins);
  for (Index k = 0; k < bins; ++k) {
    const Scalar omega = 2.0 * kPi * cfg.bin_hz(k);
    for (Index m = 0; m < geom.mic_count(); ++m) {
      const Scalar phase = -omega * advance[m];
      table(m, k) = Complex(std::cos(phase), std::sin(phase));
    }
  }
  return table;
}

}  // namespace dasp
