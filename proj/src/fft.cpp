// SPDX-License-Identifier: Apache-2.0
#include "cswarm/fft.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "cswarm/constants.hpp"

namespace cswarm {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("FftPlan: size must be a power of two");
    bitrev_.resize(n);
    int log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < log2n; ++b) r |= ((i >> b) & 1u) << (log2n - 1 - b);
        bitrev_[i] = static_cast<std::uint32_t>(r);
    }
    twiddle_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        twiddle_[k] = {std::cos(ang), std::sin(ang)};
    }
}

void FftPlan::transform(std::complex<double>* x, bool inv) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n_ / len;
        for (std::size_t base = 0; base < n_; base += len) {
            for (std::size_t k = 0; k < half; ++k) {
                std::complex<double> w = twiddle_[k * stride];
                if (inv) w = std::conj(w);
                const std::complex<double> u = x[base + k];
                const std::complex<double> v = x[base + k + half] * w;
                x[base + k] = u + v;
                x[base + k + half] = u - v;
            }
        }
    }
}

void FftPlan::forward(std::complex<double>* x) const { transform(x, false); }

void FftPlan::inverse(std::complex<double>* x) const {
    transform(x, true);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] *= scale;
}

const FftPlan& fft_plan(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
    return *it->second;
}

std::vector<std::complex<double>> fft_forward_padded(const std::vector<std::complex<double>>& x,
                                                     std::size_t n) {
    if (n < x.size()) throw std::invalid_argument("fft_forward_padded: n smaller than input");
    std::vector<std::complex<double>> buf(n, std::complex<double>{0.0, 0.0});
    std::copy(x.begin(), x.end(), buf.begin());
    fft_plan(n).forward(buf.data());
    return buf;
}

}  // namespace cswarm
