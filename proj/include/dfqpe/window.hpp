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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dfqpe {

enum class WindowKind { kRectangular, kCosine, kBartlett, kCustom };

/// "rect" | "cosine" | "bartlett" | "custom".
std::string_view to_string(WindowKind kind);
/// Inverse of to_string; throws std::invalid_argument on unknown ids.
WindowKind parse_window_kind(std::string_view id);

/// Unit-norm real weight vector applied to the control register amplitudes.
///
/// Instances only come out of the make_* factories, so the unit-norm and
/// finiteness invariants hold for every value in circulation.
class WindowVector {
  public:
    std::size_t n_points() const { return weights_.size(); }
    std::span<const double> weights() const { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }
    WindowKind kind() const { return kind_; }

    friend WindowVector make_rectangular(std::size_t n_points);
    friend WindowVector make_cosine(std::size_t n_points);
    friend WindowVector make_bartlett(std::size_t n_points);
    friend WindowVector make_custom(std::span<const double> weights);

  private:
    WindowVector(WindowKind kind, std::vector<double> weights)
        : kind_(kind), weights_(std::move(weights)) {}

    WindowKind kind_;
    std::vector<double> weights_;
};

/// All weights 1/sqrt(N). Plain QPE.
WindowVector make_rectangular(std::size_t n_points);

/// weight_y = sqrt(2/N) * sin(pi*y/N) for y = 0..N-1. weight_0 is always 0.
WindowVector make_cosine(std::size_t n_points);

/// Triangle with zero endpoints, 1 - |y - (N-1)/2| / ((N-1)/2), l2-normalized.
/// The triangle is empty for N = 2; that case returns the rectangular profile.
WindowVector make_bartlett(std::size_t n_points);

/// Rescales arbitrary weights to unit l2 norm. Rejects fewer than two
/// entries, non-finite entries and the zero vector.
WindowVector make_custom(std::span<const double> weights);

/// Builds a non-custom window from its kind.
WindowVector make_window(WindowKind kind, std::size_t n_points);

}  // namespace dfqpe
