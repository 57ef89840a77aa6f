// Copyright 2026 The dfqpe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dfqpe/detail/dft.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "dfqpe/angles.hpp"

namespace dfqpe::detail {
namespace {

using cd = std::complex<double>;

// exp(-2*pi*i*k/N) for k = 0..N-1.
const std::vector<cd>& twiddles(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<std::vector<cd>>> cache;
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<std::vector<cd>>(n);
        auto& t = *slot;
        const double step = kTwoPi / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            double a = step * static_cast<double>(k);
            t[k] = cd(std::cos(a), -std::sin(a));
        }
    }
    return *slot;
}

void fft_radix2(std::vector<cd>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cd u = a[i + k];
                cd v = a[i + k + half] * tw[k * stride];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<cd> dft(std::span<const cd> x) {
    const std::size_t n = x.size();
    std::vector<cd> out(x.begin(), x.end());
    if (n <= 1) return out;
    if (is_power_of_two(n)) {
        fft_radix2(out);
        return out;
    }
    const auto& tw = twiddles(n);
    for (std::size_t k = 0; k < n; ++k) {
        cd acc = 0.0;
        std::size_t idx = 0;
        for (std::size_t m = 0; m < n; ++m) {
            acc += x[m] * tw[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace dfqpe::detail
