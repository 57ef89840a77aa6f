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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfqpe/experiments.hpp"
#include "dfqpe/fisher.hpp"
#include "dfqpe/qpe_model.hpp"
#include "dfqpe/window.hpp"

namespace dfqpe::io {

// CSV: comma separated, one header row, LF line endings, floating point
// values with 17 significant digits. JSON: one object {"spec": ..., "rows": [...]}.

enum class Format { kCsv, kJson };
Format parse_format(const std::string& id);

/// printf("%.17g").
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::runtime_error when absent.
    std::size_t column(const std::string& name) const;
};

/// Parses a CSV stream. A first line that does not start with a number is
/// taken as the header. Blank lines are skipped; CR before LF is tolerated.
CsvTable read_csv(std::istream& in);

// Writers ------------------------------------------------------------------

void write_window(std::ostream& out, const WindowVector& window, Format format);
void write_distribution(std::ostream& out, const PhaseDistribution& dist,
                        std::string_view window_id, Format format);
void write_histogram(std::ostream& out, const Histogram& hist, Format format);
/// Rows (outcome, offset) for every set in order; seed is echoed in JSON.
void write_samples(std::ostream& out, const std::vector<SampleSet>& sets, std::uint64_t seed,
                   Format format);
void write_crb_curve(std::ostream& out, const CrbCurve& curve, Format format);
/// wall_time is only written when include_timing is set, so that reruns with
/// the same seed are byte-identical.
void write_experiment(std::ostream& out, const ExperimentTable& table, Format format,
                      bool include_timing = false);
/// cell_units rescales phases and errors by N / (2 pi).
void write_scatter(std::ostream& out, const ScatterTable& table, Format format,
                   bool cell_units = false);

// Readers ------------------------------------------------------------------

/// Weights from a one-column CSV (optional header), or the last column of a
/// window file written by write_window. JSON window files are accepted too.
std::vector<double> read_weights(std::istream& in, Format format);

/// The `value` column of a distribution or histogram file.
std::vector<double> read_values(std::istream& in, Format format);

/// Sample sets grouped by offset in order of first appearance. CSV files
/// carry no record length, so n_points must be given; for JSON it is read
/// from the spec and n_points = 0 accepts it as is.
std::vector<SampleSet> read_samples(std::istream& in, Format format, std::size_t n_points);

std::vector<ExperimentRow> read_experiment_rows(std::istream& in, Format format);
std::vector<ScatterRow> read_scatter_rows(std::istream& in, Format format);
CrbCurve read_crb_curve(std::istream& in, Format format);

/// ExperimentSpec <-> JSON text. Thread count is not part of the record.
std::string spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const std::string& text);

}  // namespace dfqpe::io
