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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfqpe::cli {

/// Everything the subcommands read from the command line.
struct CliConfig {
    std::string subcommand;
    std::string experiment_kind;

    std::optional<int> qubits;
    std::optional<std::size_t> record_length;
    std::vector<int> qubits_list;
    std::vector<std::size_t> record_lengths;
    bool allow_any_n = false;

    std::string window = "rect";
    std::string weights_file;
    std::vector<std::string> windows;

    std::optional<double> phase_frac;
    std::optional<double> phase_rad;
    double offset_rad = 0.0;
    bool half_cell = false;

    std::size_t shots = 100;
    bool dual = false;
    std::vector<std::size_t> shots_list;
    std::string estimator = "df";
    std::vector<std::string> estimators;
    std::size_t trials = 0;  // 0: per-kind default
    std::uint64_t seed = 42;
    std::size_t threads = 0;
    std::size_t crb_grid = 256;
    std::size_t bins_kept = 8;
    std::size_t grid_min = 9;
    double grid_scale = 4.0;

    std::string phase_policy;  // "", "uniform", "cell", "fixed"
    long long cell = 10;
    std::vector<double> phases;

    std::string format = "csv";
    std::string output;
    std::string input;
    std::string input_format;
    bool cell_units = false;
    bool timing = false;
    std::string plot_data;
};

/// Bad or inconsistent arguments; dispatch maps it to exit code 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Resolves --qubits / --record-length into N. Exactly one must be set; N must
/// be a power of two unless allow_any_n.
std::size_t resolve_record_length(const CliConfig& config);

/// Runs `window`, `dist`, `sample`, `crb`, `estimate` or `experiment <kind>`.
/// Returns 0 on success, 2 on argument errors (usage on err), 1 on runtime
/// errors (diagnostic on err).
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dfqpe::cli
