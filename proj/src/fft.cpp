// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/fft.hpp"

#include <cmath>

namespace dasp {

Fft::Fft(Index size) : size_(size) {
  if (!is_power_of_two(size))
    throw InvalidArgument("fft size must be a power of two, got " +
                          std::to_string(size));
  bit_reversal_.resize(size);
  Index log2n = 0;
  while ((Index{1} << log2n) < size) ++log2n;
  for (Index i = 0; i < size; ++i) {
    Index rev = 0;
    for (Index b = 0; b < log2n; ++b)
      if (i & (Index{1} << b)) rev |= Index{1} << (log2n - 1 - b);
    bit_reversal_[i] = rev;
  }
  // Twiddles computed per index (not by recurrence) to keep ulp-level phase
  // accuracy in the leakage-free test cases.
  twiddles_.resize(size / 2);
  for (Index k = 0; k < size / 2; ++k) {
    const Scalar angle = 2.0 * kPi * static_cast<Scalar>(k) / static_cast<Scalar>(size);
    twiddles_[k] = Complex(std::cos(angle), std::sin(angle));
  }
}

void Fft::transform(std::span<Complex> data, int kernel_sign) const {
  if (static_cast<Index>(data.size()) != size_)
    throw InvalidArgument("fft buffer size mismatch");
  for (Index i = 0; i < size_; ++i) {
    const Index j = bit_reversal_[i];
    if (j > i) std::swap(data[i], data[j]);
  }
  for (Index len = 2; len <= size_; len <<= 1) {
    const Index half = len >> 1;
    const Index stride = size_ / len;
    for (Index start = 0; start < size_; start += len) {
      for (Index k = 0; k < half; ++k) {
        Complex w = twiddles_[k * stride];
        if (kernel_sign < 0) w = std::conj(w);
        const Complex even = data[start + k];
        const Complex odd = data[start + k + half] * w;
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

void Fft::synthesis(std::span<Complex> data) const {
  transform(data, -1);
  const Scalar scale = 1.0 / static_cast<Scalar>(size_);
  for (auto& v : data) v *= scale;
}

}  // namespace dasp
