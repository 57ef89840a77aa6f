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

#include "dfqpe/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "dfqpe/angles.hpp"

namespace dfqpe::io {
namespace {

using nlohmann::json;

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

void write_json(std::ostream& out, const json& spec, const json& rows) {
    json doc;
    doc["spec"] = spec;
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
}

json parse_json(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed JSON: ") + e.what());
    }
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::runtime_error("not a number: '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("not an unsigned integer: '" + s + "'");
    }
    if (used != s.size() || (!s.empty() && s[0] == '-')) {
        throw std::runtime_error("not an unsigned integer: '" + s + "'");
    }
    return v;
}

bool looks_numeric(const std::string& cell) {
    if (cell.empty()) return false;
    char c = cell.front();
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

json rows_of(const json& doc) {
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
        throw std::runtime_error("JSON document has no \"rows\" array");
    }
    return doc["rows"];
}

json config_to_json(const EstimatorConfig& c) {
    return {{"bins_kept", c.bins_kept},
            {"grid_min", c.grid_min},
            {"grid_scale", c.grid_scale},
            {"sinc_floor", c.sinc_floor}};
}

std::string_view policy_name(PhasePolicy::Kind k) {
    switch (k) {
        case PhasePolicy::Kind::kUniform: return "uniform";
        case PhasePolicy::Kind::kUniformInCell: return "uniform-in-cell";
        case PhasePolicy::Kind::kFixedList: return "fixed";
    }
    return "unknown";
}

json spec_json(const ExperimentSpec& spec) {
    json estimators = json::array();
    for (auto e : spec.estimators) estimators.push_back(std::string(to_string(e)));
    json windows = json::array();
    for (auto w : spec.windows) windows.push_back(std::string(to_string(w)));
    json policy = {{"kind", std::string(policy_name(spec.phase_policy.kind))}};
    if (spec.phase_policy.kind == PhasePolicy::Kind::kUniformInCell) {
        policy["cell"] = spec.phase_policy.cell;
    }
    if (spec.phase_policy.kind == PhasePolicy::Kind::kFixedList) {
        policy["phases"] = spec.phase_policy.phases;
    }
    return {{"kind", std::string(to_string(spec.kind))},
            {"estimators", estimators},
            {"windows", windows},
            {"n_list", spec.n_list},
            {"shots_list", spec.shots_list},
            {"trials", spec.trials},
            {"master_seed", spec.master_seed},
            {"phase_policy", policy},
            {"allow_any_n", spec.allow_any_n},
            {"crb_grid", spec.crb_grid},
            {"config", config_to_json(spec.config)}};
}

}  // namespace

Format parse_format(const std::string& id) {
    if (id == "csv") return Format::kCsv;
    if (id == "json") return Format::kJson;
    throw std::invalid_argument("unknown format '" + id + "' (expected csv or json)");
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::runtime_error("CSV has no column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first && !looks_numeric(cells.front())) {
            table.header = std::move(cells);
        } else {
            if (!table.header.empty() && cells.size() != table.header.size()) {
                throw std::runtime_error("CSV row has " + std::to_string(cells.size()) +
                                         " cells, header has " +
                                         std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(cells));
        }
        first = false;
    }
    return table;
}

void write_window(std::ostream& out, const WindowVector& window, Format format) {
    if (format == Format::kCsv) {
        write_csv_row(out, {"n", "weight"});
        for (std::size_t n = 0; n < window.n_points(); ++n) {
            write_csv_row(out, {std::to_string(n), format_double(window[n])});
        }
        return;
    }
    json rows = json::array();
    for (std::size_t n = 0; n < window.n_points(); ++n) {
        rows.push_back({{"n", n}, {"weight", window[n]}});
    }
    write_json(out, {{"window", std::string(to_string(window.kind()))},
                     {"n_points", window.n_points()}},
               rows);
}

void write_distribution(std::ostream& out, const PhaseDistribution& dist,
                        std::string_view window_id, Format format) {
    if (format == Format::kCsv) {
        write_csv_row(out, {"y", "value"});
        for (std::size_t y = 0; y < dist.probs.size(); ++y) {
            write_csv_row(out, {std::to_string(y), format_double(dist.probs[y])});
        }
        return;
    }
    json rows = json::array();
    for (std::size_t y = 0; y < dist.probs.size(); ++y) {
        rows.push_back({{"y", y}, {"value", dist.probs[y]}});
    }
    write_json(out, {{"window", std::string(window_id)},
                     {"n_points", dist.n_points},
                     {"phase", dist.phase},
                     {"offset", dist.offset}},
               rows);
}

void write_histogram(std::ostream& out, const Histogram& hist, Format format) {
    if (format == Format::kCsv) {
        write_csv_row(out, {"y", "value"});
        for (std::size_t y = 0; y < hist.counts.size(); ++y) {
            write_csv_row(out, {std::to_string(y), std::to_string(hist.counts[y])});
        }
        return;
    }
    json rows = json::array();
    for (std::size_t y = 0; y < hist.counts.size(); ++y) {
        rows.push_back({{"y", y}, {"value", hist.counts[y]}});
    }
    write_json(out, {{"n_points", hist.n_points}, {"total", hist.total}}, rows);
}

void write_samples(std::ostream& out, const std::vector<SampleSet>& sets, std::uint64_t seed,
                   Format format) {
    if (format == Format::kCsv) {
        write_csv_row(out, {"outcome", "offset"});
        for (const auto& set : sets) {
            const std::string offset = format_double(set.offset);
            for (auto y : set.outcomes) write_csv_row(out, {std::to_string(y), offset});
        }
        return;
    }
    json rows = json::array();
    json summary = json::array();
    std::size_t n_points = sets.empty() ? 0 : sets.front().n_points;
    for (const auto& set : sets) {
        summary.push_back({{"offset", set.offset}, {"n_shots", set.outcomes.size()}});
        for (auto y : set.outcomes) rows.push_back({{"outcome", y}, {"offset", set.offset}});
    }
    write_json(out, {{"n_points", n_points}, {"seed", seed}, {"sets", summary}}, rows);
}

void write_crb_curve(std::ostream& out, const CrbCurve& curve, Format format) {
    if (format == Format::kCsv) {
        write_csv_row(out, {"n_shots_or_N", "window", "sqrt_crb"});
        for (const auto& r : curve) {
            write_csv_row(out, {format_double(r.x), r.window, format_double(r.sqrt_crb)});
        }
        return;
    }
    json rows = json::array();
    for (const auto& r : curve) {
        rows.push_back({{"n_shots_or_N", r.x},
                        {"n_points", r.n_points},
                        {"n_shots", r.n_shots},
                        {"window", r.window},
                        {"sqrt_crb", r.sqrt_crb}});
    }
    write_json(out, {{"kind", "crb"}}, rows);
}

void write_experiment(std::ostream& out, const ExperimentTable& table, Format format,
                      bool include_timing) {
    if (format == Format::kCsv) {
        std::vector<std::string> header{"N", "N_s", "window", "estimator", "rmse", "sqrt_crb",
                                        "trials"};
        if (include_timing) header.push_back("wall_time");
        write_csv_row(out, header);
        for (const auto& r : table.rows) {
            std::vector<std::string> cells{std::to_string(r.n_points), std::to_string(r.n_shots),
                                           r.window, r.estimator, format_double(r.rmse),
                                           format_double(r.sqrt_crb), std::to_string(r.trials)};
            if (include_timing) cells.push_back(format_double(r.wall_time));
            write_csv_row(out, cells);
        }
        return;
    }
    json rows = json::array();
    for (const auto& r : table.rows) {
        json row = {{"N", r.n_points},       {"N_s", r.n_shots},   {"window", r.window},
                    {"estimator", r.estimator}, {"rmse", r.rmse}, {"sqrt_crb", r.sqrt_crb},
                    {"trials", r.trials},    {"below_crb", r.rmse < r.sqrt_crb}};
        if (include_timing) row["wall_time"] = r.wall_time;
        rows.push_back(std::move(row));
    }
    write_json(out, spec_json(table.spec), rows);
}

void write_scatter(std::ostream& out, const ScatterTable& table, Format format, bool cell_units) {
    auto scale = [&](const ScatterRow& r) {
        return cell_units ? static_cast<double>(r.n_points) / kTwoPi : 1.0;
    };
    if (format == Format::kCsv) {
        write_csv_row(out, {"N", "N_s", "estimator", "trial", "true_phase", "signed_error"});
        for (const auto& r : table.rows) {
            write_csv_row(out, {std::to_string(r.n_points), std::to_string(r.n_shots),
                                r.estimator, std::to_string(r.trial),
                                format_double(r.true_phase * scale(r)),
                                format_double(r.signed_error * scale(r))});
        }
        return;
    }
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"N", r.n_points},
                        {"N_s", r.n_shots},
                        {"estimator", r.estimator},
                        {"trial", r.trial},
                        {"true_phase", r.true_phase * scale(r)},
                        {"signed_error", r.signed_error * scale(r)}});
    }
    json spec = spec_json(table.spec);
    spec["units"] = cell_units ? "cells" : "radians";
    write_json(out, spec, rows);
}

std::vector<double> read_weights(std::istream& in, Format format) {
    std::vector<double> weights;
    if (format == Format::kJson) {
        for (const auto& row : rows_of(parse_json(in))) weights.push_back(row.at("weight").get<double>());
        return weights;
    }
    auto table = read_csv(in);
    for (const auto& row : table.rows) weights.push_back(to_double(row.back()));
    return weights;
}

std::vector<double> read_values(std::istream& in, Format format) {
    std::vector<double> values;
    if (format == Format::kJson) {
        for (const auto& row : rows_of(parse_json(in))) values.push_back(row.at("value").get<double>());
        return values;
    }
    auto table = read_csv(in);
    const std::size_t col = table.header.empty() ? 1 : table.column("value");
    for (const auto& row : table.rows) values.push_back(to_double(row.at(col)));
    return values;
}

std::vector<SampleSet> read_samples(std::istream& in, Format format, std::size_t n_points) {
    std::vector<SampleSet> sets;
    auto add = [&](std::uint64_t outcome, double offset) {
        auto it = std::find_if(sets.begin(), sets.end(),
                               [&](const SampleSet& s) { return s.offset == offset; });
        if (it == sets.end()) {
            sets.push_back({n_points, {}, offset});
            it = sets.end() - 1;
        }
        it->outcomes.push_back(static_cast<std::uint32_t>(outcome));
    };

    if (format == Format::kJson) {
        auto doc = parse_json(in);
        if (n_points == 0 && doc.contains("spec") && doc["spec"].contains("n_points")) {
            n_points = doc["spec"]["n_points"].get<std::size_t>();
        }
        for (const auto& row : rows_of(doc)) {
            add(row.at("outcome").get<std::uint64_t>(), row.value("offset", 0.0));
        }
    } else {
        auto table = read_csv(in);
        const std::size_t outcome_col = table.header.empty() ? 0 : table.column("outcome");
        std::optional<std::size_t> offset_col;
        if (!table.header.empty()) {
            for (std::size_t i = 0; i < table.header.size(); ++i) {
                if (table.header[i] == "offset") offset_col = i;
            }
        }
        for (const auto& row : table.rows) {
            add(to_u64(row.at(outcome_col)), offset_col ? to_double(row.at(*offset_col)) : 0.0);
        }
    }
    if (n_points == 0) throw std::invalid_argument("sample file needs a record length");
    for (auto& s : sets) {
        s.n_points = n_points;
        validate(s);
    }
    return sets;
}

std::vector<ExperimentRow> read_experiment_rows(std::istream& in, Format format) {
    std::vector<ExperimentRow> rows;
    if (format == Format::kJson) {
        for (const auto& r : rows_of(parse_json(in))) {
            rows.push_back({r.at("N").get<std::size_t>(), r.at("N_s").get<std::size_t>(),
                            r.at("window").get<std::string>(), r.at("estimator").get<std::string>(),
                            r.at("rmse").get<double>(), r.at("sqrt_crb").get<double>(),
                            r.at("trials").get<std::size_t>(), r.value("wall_time", 0.0)});
        }
        return rows;
    }
    auto t = read_csv(in);
    const auto cN = t.column("N"), cS = t.column("N_s"), cW = t.column("window"),
               cE = t.column("estimator"), cR = t.column("rmse"), cC = t.column("sqrt_crb"),
               cT = t.column("trials");
    std::optional<std::size_t> cWall;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i] == "wall_time") cWall = i;
    }
    for (const auto& r : t.rows) {
        rows.push_back({to_u64(r[cN]), to_u64(r[cS]), r[cW], r[cE], to_double(r[cR]),
                        to_double(r[cC]), to_u64(r[cT]), cWall ? to_double(r[*cWall]) : 0.0});
    }
    return rows;
}

std::vector<ScatterRow> read_scatter_rows(std::istream& in, Format format) {
    std::vector<ScatterRow> rows;
    if (format == Format::kJson) {
        for (const auto& r : rows_of(parse_json(in))) {
            rows.push_back({r.at("N").get<std::size_t>(), r.at("N_s").get<std::size_t>(),
                            r.at("estimator").get<std::string>(), r.at("trial").get<std::size_t>(),
                            r.at("true_phase").get<double>(), r.at("signed_error").get<double>()});
        }
        return rows;
    }
    auto t = read_csv(in);
    const auto cN = t.column("N"), cS = t.column("N_s"), cE = t.column("estimator"),
               cT = t.column("trial"), cP = t.column("true_phase"), cErr = t.column("signed_error");
    for (const auto& r : t.rows) {
        rows.push_back({to_u64(r[cN]), to_u64(r[cS]), r[cE], to_u64(r[cT]), to_double(r[cP]),
                        to_double(r[cErr])});
    }
    return rows;
}

CrbCurve read_crb_curve(std::istream& in, Format format) {
    CrbCurve curve;
    if (format == Format::kJson) {
        for (const auto& r : rows_of(parse_json(in))) {
            curve.push_back({r.value("n_points", std::size_t{0}), r.value("n_shots", std::size_t{0}),
                             r.at("n_shots_or_N").get<double>(), r.at("window").get<std::string>(),
                             r.at("sqrt_crb").get<double>()});
        }
        return curve;
    }
    auto t = read_csv(in);
    const auto cX = t.column("n_shots_or_N"), cW = t.column("window"), cC = t.column("sqrt_crb");
    for (const auto& r : t.rows) {
        curve.push_back({0, 0, to_double(r[cX]), r[cW], to_double(r[cC])});
    }
    return curve;
}

std::string spec_to_json(const ExperimentSpec& spec) { return spec_json(spec).dump(); }

ExperimentSpec spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed JSON: ") + e.what());
    }
    ExperimentSpec spec;
    spec.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    for (const auto& e : j.value("estimators", json::array())) {
        spec.estimators.push_back(parse_estimator_id(e.get<std::string>()));
    }
    for (const auto& w : j.value("windows", json::array())) {
        spec.windows.push_back(parse_window_kind(w.get<std::string>()));
    }
    spec.n_list = j.at("n_list").get<std::vector<std::size_t>>();
    spec.shots_list = j.at("shots_list").get<std::vector<std::size_t>>();
    spec.trials = j.at("trials").get<std::size_t>();
    spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    spec.allow_any_n = j.value("allow_any_n", false);
    spec.crb_grid = j.value("crb_grid", std::size_t{256});
    if (j.contains("phase_policy")) {
        const auto& p = j["phase_policy"];
        const auto kind = p.at("kind").get<std::string>();
        if (kind == "uniform") {
            spec.phase_policy.kind = PhasePolicy::Kind::kUniform;
        } else if (kind == "uniform-in-cell") {
            spec.phase_policy.kind = PhasePolicy::Kind::kUniformInCell;
            spec.phase_policy.cell = p.value("cell", std::int64_t{0});
        } else if (kind == "fixed") {
            spec.phase_policy.kind = PhasePolicy::Kind::kFixedList;
            spec.phase_policy.phases = p.at("phases").get<std::vector<double>>();
        } else {
            throw std::invalid_argument("unknown phase policy '" + kind + "'");
        }
    }
    if (j.contains("config")) {
        const auto& c = j["config"];
        spec.config.bins_kept = c.value("bins_kept", spec.config.bins_kept);
        spec.config.grid_min = c.value("grid_min", spec.config.grid_min);
        spec.config.grid_scale = c.value("grid_scale", spec.config.grid_scale);
        spec.config.sinc_floor = c.value("sinc_floor", spec.config.sinc_floor);
    }
    return spec;
}

}  // namespace dfqpe::io
