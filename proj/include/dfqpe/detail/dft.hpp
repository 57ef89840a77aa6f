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

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dfqpe::detail {

/// X_k = sum_n x_n exp(-2*pi*i*n*k/N).
///
/// Radix-2 FFT when N is a power of two, otherwise a direct O(N^2) sum over
/// an exact twiddle table (index n*k mod N). Twiddle tables are cached per
/// thread.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x);

bool is_power_of_two(std::size_t n);

}  // namespace dfqpe::detail
