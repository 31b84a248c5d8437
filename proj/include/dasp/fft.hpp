// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_FFT_HPP
#define DASP_FFT_HPP

#include <span>
#include <vector>

#include "dasp/types.hpp"

namespace dasp {

/// Radix-2 FFT over power-of-two sizes.
///
/// The analysis direction uses the positive-exponent kernel
///   X[k] = sum_n x[n] exp(+j 2 pi n k / N)
/// so that a plane wave arriving earlier at a microphone shows up with the
/// same phase sign as the freefield steering model a_m = exp(j k . r_m).
/// synthesis() inverts analysis() exactly (including the 1/N scale).
class Fft {
 public:
  explicit Fft(Index size);

  Index size() const { return size_; }

  /// In-place transform of size() complex points.
  void analysis(std::span<Complex> data) const { transform(data, +1); }
  void synthesis(std::span<Complex> data) const;

  static bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

 private:
  void transform(std::span<Complex> data, int kernel_sign) const;

  Index size_;
  std::vector<Index> bit_reversal_;
  std::vector<Complex> twiddles_;  // exp(+j 2 pi k / N), k in [0, N/2)
};

}  // namespace dasp

#endif  // DASP_FFT_HPP
