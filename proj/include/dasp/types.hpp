// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_TYPES_HPP
#define DASP_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dasp {

using Scalar = double;
using Complex = std::complex<Scalar>;
using Index = Eigen::Index;

using Vec = Eigen::VectorX<Scalar>;
using CVec = Eigen::VectorX<Complex>;
using Mat = Eigen::MatrixX<Scalar>;
using CMat = Eigen::MatrixX<Complex>;

inline constexpr Scalar kPi = 3.14159265358979323846;

inline Scalar deg_to_rad(Scalar deg) { return deg * kPi / 180.0; }
inline Scalar rad_to_deg(Scalar rad) { return rad * 180.0 / kPi; }

/// Wraps an azimuth into [0, 360) so that theta and theta + 360 map to the
/// same bit pattern everywhere downstream.
inline Scalar wrap_azimuth_deg(Scalar deg) {
  Scalar w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  return w;
}

inline Scalar db_from_power(Scalar p) { return 10.0 * std::log10(p); }
inline Scalar db_from_amplitude(Scalar a) { return 20.0 * std::log10(a); }
inline Scalar power_from_db(Scalar db) { return std::pow(10.0, db / 10.0); }
inline Scalar amplitude_from_db(Scalar db) { return std::pow(10.0, db / 20.0); }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad call arguments or malformed configuration (CLI exit code 2).
struct InvalidArgument : Error {
  using Error::Error;
};

/// Unusable input data: files, formats, degenerate signals (CLI exit code 3).
struct DataError : Error {
  using Error::Error;
};

/// Non-finite values in an adaptive recursion (CLI exit code 4).
struct DivergenceError : Error {
  explicit DivergenceError(const std::string& what, Index bin_index = -1)
      : Error(what), bin(bin_index) {}
  Index bin;
};

}  // namespace dasp

#endif  // DASP_TYPES_HPP
