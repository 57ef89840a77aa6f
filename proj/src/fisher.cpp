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

#include "dfqpe/fisher.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "dfqpe/angles.hpp"
#include "dfqpe/detail/dft.hpp"

namespace dfqpe {
namespace {

constexpr double kProbabilityFloor = 1e-14;
constexpr double kFisherFloor = 1e-12;
constexpr double kMaxExcludedFraction = 0.10;

}  // namespace

double fisher_information(const WindowVector& window, double phase) {
    const std::size_t n_points = window.n_points();
    const double n = static_cast<double>(n_points);
    const double theta0 = wrap_2pi(phase);

    // a_y  = sum_n w_n e^{i n phase} e^{-2 pi i n y / N}  = conj(e_y^H w)
    // b_y  = sum_n n w_n e^{i n phase} e^{-2 pi i n y / N} = w^H D e_y
    std::vector<std::complex<double>> x(n_points), xn(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        x[k] = window[k] * std::polar(1.0, theta0 * static_cast<double>(k));
        xn[k] = static_cast<double>(k) * x[k];
    }
    auto a = detail::dft(x);
    auto b = detail::dft(xn);

    double sum = 0.0;
    for (std::size_t y = 0; y < n_points; ++y) {
        const double power = std::norm(a[y]);
        if (power / n < kProbabilityFloor) continue;
        const double im = (std::conj(a[y]) * b[y]).imag();
        sum += im * im / power;
    }
    return 4.0 * sum / n;
}

double crb(const WindowVector& window, double phase, std::size_t n_shots) {
    if (n_shots == 0) throw std::invalid_argument("n_shots must be at least 1");
    const double fi = fisher_information(window, phase);
    if (fi < kFisherFloor) return std::numeric_limits<double>::infinity();
    return 1.0 / (static_cast<double>(n_shots) * fi);
}

std::vector<double> mid_grid_phases(std::size_t grid_size) {
    std::vector<double> phases(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        phases[i] = kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
    }
    return phases;
}

std::size_t effective_grid_size(std::size_t n_points, std::size_t grid_size) {
    if (grid_size == 0 || n_points == 0) return grid_size;
    // 2 pi (i + 1/2) / G hits a multiple of 2 pi / N for some i exactly when N
    // carries more factors of two than G.
    while (std::countr_zero(n_points) > std::countr_zero(grid_size)) grid_size *= 2;
    return grid_size;
}

double avg_inverse_fisher(const WindowVector& window, std::size_t grid_size) {
    if (grid_size < 16) throw std::invalid_argument("phase grid needs at least 16 points");
    grid_size = effective_grid_size(window.n_points(), grid_size);
    double sum = 0.0;
    std::size_t used = 0;
    for (double phase : mid_grid_phases(grid_size)) {
        const double fi = fisher_information(window, phase);
        if (fi < kFisherFloor) continue;
        sum += 1.0 / fi;
        ++used;
    }
    const std::size_t excluded = grid_size - used;
    if (static_cast<double>(excluded) > kMaxExcludedFraction * static_cast<double>(grid_size)) {
        throw std::domain_error(std::to_string(excluded) + " of " + std::to_string(grid_size) +
                                " phases have vanishing Fisher information");
    }
    return sum / static_cast<double>(used);
}

double avg_sqrt_crb(const WindowVector& window, std::size_t n_shots, std::size_t grid_size) {
    if (n_shots == 0) throw std::invalid_argument("n_shots must be at least 1");
    return std::sqrt(avg_inverse_fisher(window, grid_size) / static_cast<double>(n_shots));
}

CrbCurve crb_curve_vs_shots(const WindowVector& window, const std::vector<std::size_t>& shots,
                            std::size_t grid_size) {
    const double inv_fi = avg_inverse_fisher(window, grid_size);
    CrbCurve curve;
    curve.reserve(shots.size());
    for (std::size_t s : shots) {
        if (s == 0) throw std::invalid_argument("n_shots must be at least 1");
        curve.push_back({window.n_points(), s, static_cast<double>(s), std::string(to_string(window.kind())),
                         std::sqrt(inv_fi / static_cast<double>(s))});
    }
    return curve;
}

}  // namespace dfqpe
