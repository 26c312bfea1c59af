// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cswarm {

std::size_t next_pow2(std::size_t n);

/// Iterative radix-2 complex FFT with precomputed twiddles and bit-reversal
/// table. Plans are immutable after construction and safe to share between
/// threads.
class FftPlan {
  public:
    explicit FftPlan(std::size_t n);  // n must be a power of two

    std::size_t size() const { return n_; }
    void forward(std::complex<double>* x) const;
    void inverse(std::complex<double>* x) const;  // includes the 1/n scale

  private:
    void transform(std::complex<double>* x, bool inv) const;

    std::size_t n_;
    std::vector<std::uint32_t> bitrev_;
    std::vector<std::complex<double>> twiddle_;  // n/2 forward roots
};

/// Shared plan cache (mutex-guarded lookup, lock-free use).
const FftPlan& fft_plan(std::size_t n);

/// Forward FFT of x zero-padded to n (n must be a power of two >= x.size()).
std::vector<std::complex<double>> fft_forward_padded(const std::vector<std::complex<double>>& x,
                                                     std::size_t n);

}  // namespace cswarm
