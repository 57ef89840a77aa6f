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

#include <cstddef>
#include <string>
#include <vector>

#include "dfqpe/window.hpp"

namespace dfqpe {

/// Single-shot Fisher information of the phase for a window.
///
/// Evaluated through the rank-1 form
///   FI = (4/N) sum_y Im^2{(e_y^H a)(a^H D e_y)} / |e_y^H a|^2,
/// with e_y the phasor vector at phase - 2 pi y / N and D = diag(0..N-1).
/// Both inner products are one DFT each. Outcomes whose probability
/// |e_y^H a|^2 / N falls below 1e-14 contribute their limit, zero.
double fisher_information(const WindowVector& window, double phase);

/// Cramer-Rao bound on the MSE after n_shots independent shots,
/// 1 / (n_shots * FI). Returns +infinity when FI < 1e-12 (on-grid phase of
/// the rectangular window) and throws std::invalid_argument for n_shots == 0.
double crb(const WindowVector& window, double phase, std::size_t n_shots);

/// Phases 2 pi (i + 0.5) / G, i = 0..G-1, used for CRB averaging.
std::vector<double> mid_grid_phases(std::size_t grid_size);

/// Smallest G * 2^k whose mid-grid phases all avoid the lattice 2 pi k / N.
/// Equals grid_size whenever N has no more factors of two than grid_size.
std::size_t effective_grid_size(std::size_t n_points, std::size_t grid_size);

/// Phase-averaged bound sqrt(mean_i 1 / (n_shots FI(phase_i))) over
/// mid_grid_phases(effective_grid_size(N, grid_size)).
///
/// Points with FI < 1e-12 are dropped from the mean; more than 10% dropped
/// is a std::domain_error. grid_size must be at least 16.
double avg_sqrt_crb(const WindowVector& window, std::size_t n_shots, std::size_t grid_size = 256);

/// Phase-averaged single-shot 1/FI. avg_sqrt_crb(w, s, G) equals
/// sqrt(avg_inverse_fisher(w, G) / s); curves reuse this value across s.
double avg_inverse_fisher(const WindowVector& window, std::size_t grid_size = 256);

struct CrbRow {
    std::size_t n_points = 0;
    std::size_t n_shots = 0;
    double x = 0.0;  // N_s or N, whichever the curve sweeps
    std::string window;
    double sqrt_crb = 0.0;
};
using CrbCurve = std::vector<CrbRow>;

/// sqrt-CRB vs N_s at fixed window; x = N_s.
CrbCurve crb_curve_vs_shots(const WindowVector& window, const std::vector<std::size_t>& shots,
                            std::size_t grid_size = 256);

}  // namespace dfqpe
