// railwave: link-level coverage simulation for rail corridors
// Copyright (C) 2026 The railwave authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "railwave/sweep.hpp"
#include "railwave/error.hpp"
#include "railwave/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace railwave::sweep {

std::string to_string(Architecture architecture)
{
    switch (architecture) {
    case Architecture::lcx_single: return "lcx-single";
    case Architecture::lcx_double: return "lcx-double";
    case Architecture::lcx_segmented: return "lcx-segmented";
    case Architecture::pass_fix: return "pass-fix";
    case Architecture::pass_active: return "pass-active";
    case Architecture::pass_movable: return "pass-movable";
    }
    return "unknown";
}

Architecture parse_architecture(const std::string& name)
{
    for (const auto a : {Architecture::lcx_single, Architecture::lcx_double, Architecture::lcx_segmented,
                         Architecture::pass_fix, Architecture::pass_active, Architecture::pass_movable}) {
        if (to_string(a) == name)
            return a;
    }
    throw InvalidConfig("unknown architecture '" + name + "'");
}

void ScenarioSpec::validate() const
{
    geometry.validate();
    radio.validate();
    if (sample_count < 2)
        throw InvalidConfig("a sweep needs at least two samples");
    switch (architecture) {
    case Architecture::lcx_single:
    case Architecture::lcx_double:
        cable.validate();
        break;
    case Architecture::lcx_segmented:
        cable.validate();
        if (segments == 0)
            throw InvalidConfig("segmented LCX needs at least one segment");
        break;
    case Architecture::pass_fix:
        if (pa_count == 0)
            throw InvalidConfig("PASS Fix needs at least one PA");
        break;
    case Architecture::pass_active:
        if (active_count == 0)
            throw InvalidConfig("PASS Active needs at least one activated PA");
        if (pitch_m < 0.0)
            throw InvalidConfig("PA pitch must be positive (or 0 for an equidistant layout)");
        if (pitch_m == 0.0 && pa_count == 0)
            throw InvalidConfig("equidistant PASS Active layout needs at least one PA");
        break;
    case Architecture::pass_movable:
        break;
    }
}

std::string ScenarioSpec::label() const
{
    if (architecture == Architecture::lcx_segmented)
        return "lcx-segmented-" + std::to_string(segments);
    return to_string(architecture);
}

std::optional<std::size_t> ScenarioSpec::reported_count() const
{
    switch (architecture) {
    case Architecture::pass_fix: return pa_count;
    case Architecture::pass_active: return active_count;
    default: return std::nullopt;
    }
}

ScenarioSpec lcx_scenario(lcx::FeedMode mode, const CorridorGeometry& geometry,
                          const RadioConfig& radio, std::size_t segments)
{
    ScenarioSpec spec;
    switch (mode) {
    case lcx::FeedMode::single: spec.architecture = Architecture::lcx_single; break;
    case lcx::FeedMode::double_ended: spec.architecture = Architecture::lcx_double; break;
    case lcx::FeedMode::segmented: spec.architecture = Architecture::lcx_segmented; break;
    }
    spec.geometry = geometry;
    spec.radio = radio;
    spec.segments = segments;
    return spec;
}

ScenarioSpec pass_fix_scenario(std::size_t count, const CorridorGeometry& geometry,
                               const RadioConfig& radio)
{
    ScenarioSpec spec;
    spec.architecture = Architecture::pass_fix;
    spec.geometry = geometry;
    spec.radio = radio;
    spec.pa_count = count;
    return spec;
}

ScenarioSpec pass_active_scenario(std::size_t active_count, double pitch_m,
                                  const CorridorGeometry& geometry, const RadioConfig& radio)
{
    ScenarioSpec spec;
    spec.architecture = Architecture::pass_active;
    spec.geometry = geometry;
    spec.radio = radio;
    spec.active_count = active_count;
    spec.pitch_m = pitch_m;
    return spec;
}

ScenarioSpec pass_active_equidistant_scenario(std::size_t deployed, std::size_t active_count,
                                              const CorridorGeometry& geometry,
                                              const RadioConfig& radio)
{
    ScenarioSpec spec = pass_active_scenario(active_count, 0.0, geometry, radio);
    spec.pa_count = deployed;
    return spec;
}

ScenarioSpec pass_movable_scenario(const CorridorGeometry& geometry, const RadioConfig& radio)
{
    ScenarioSpec spec;
    spec.architecture = Architecture::pass_movable;
    spec.geometry = geometry;
    spec.radio = radio;
    return spec;
}

std::vector<double> sample_grid(double length_m, std::size_t sample_count)
{
    std::vector<double> x(sample_count);
    const double k_total = static_cast<double>(sample_count);
    for (std::size_t k = 0; k < sample_count; ++k)
        x[k] = (static_cast<double>(k) + 0.5) * length_m / k_total;
    return x;
}

namespace {

using GainFn = std::function<pass::UnitGain(double)>;

// Builds the per-position unit-gain evaluator. Deployments are built once
// for 1 W so that gains scale linearly with the configured power.
GainFn make_gain_fn(const ScenarioSpec& spec)
{
    const double lambda = spec.radio.wavelength_m();
    RadioConfig unit = spec.radio;
    unit.transmit_power_w = 1.0;

    auto lcx_fn = [](lcx::LcxDeployment deployment) -> GainFn {
        return [deployment = std::move(deployment)](double x) {
            const auto p = lcx::lcx_received_power(deployment, x);
            return pass::UnitGain{p.coherent_w, p.local_mean_w};
        };
    };

    switch (spec.architecture) {
    case Architecture::lcx_single:
        return lcx_fn(lcx::build_lcx(lcx::FeedMode::single, 1, spec.geometry, unit, spec.cable));
    case Architecture::lcx_double:
        return lcx_fn(lcx::build_lcx(lcx::FeedMode::double_ended, 1, spec.geometry, unit, spec.cable));
    case Architecture::lcx_segmented:
        return lcx_fn(
            lcx::build_lcx(lcx::FeedMode::segmented, spec.segments, spec.geometry, unit, spec.cable));
    case Architecture::pass_fix: {
        auto array = pass::build_equidistant(spec.pa_count, spec.geometry, spec.eta, spec.n_eff);
        auto active = pass::activate_all(array);
        return [array = std::move(array), active = std::move(active), lambda](double x) {
            return pass::pass_unit_gain(array, active, x, lambda);
        };
    }
    case Architecture::pass_active: {
        auto array = spec.pitch_m > 0.0
                         ? pass::build_pitched(spec.pitch_m, spec.geometry, spec.eta, spec.n_eff)
                         : pass::build_equidistant(spec.pa_count, spec.geometry, spec.eta, spec.n_eff);
        const std::size_t active = std::min(spec.active_count, array.size());
        return [array = std::move(array), active, lambda](double x) {
            return pass::pass_unit_gain(array, pass::select_nearest(array, x, active), x, lambda);
        };
    }
    case Architecture::pass_movable: {
        const double g = pass::movable_unit_gain(spec.geometry, lambda, spec.eta);
        return [g](double) { return pass::UnitGain{g, g}; };
    }
    }
    throw InvalidConfig("unhandled architecture");
}

} // namespace

SweepResult average_se(const ScenarioSpec& spec)
{
    spec.validate();
    const auto gain_fn = make_gain_fn(spec);
    const auto grid = sample_grid(spec.geometry.length_m, spec.sample_count);
    const double p_over_noise = spec.radio.transmit_power_w / spec.radio.noise_power_w;

    SweepResult result;
    result.per_point.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
        const auto g = gain_fn(grid[k]);
        const double snr = p_over_noise * g.coherent;
        auto& point = result.per_point[k];
        point.x_m = grid[k];
        point.unit_gain = g.coherent;
        point.local_mean_gain = g.local_mean;
        point.snr_db = snr > 0.0 ? 10.0 * std::log10(snr) : -std::numeric_limits<double>::infinity();
        point.se_bpshz = spectral_efficiency(snr);
    });

    std::vector<double> se(grid.size());
    double worst = std::numeric_limits<double>::infinity();
    double worst_mean = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        se[k] = result.per_point[k].se_bpshz;
        worst = std::min(worst, result.per_point[k].unit_gain);
        worst_mean = std::min(worst_mean, result.per_point[k].local_mean_gain);
    }
    result.average_se = pairwise_sum(se) / static_cast<double>(se.size());
    result.worst_case_unit_gain = worst;
    result.worst_case_local_mean_gain = worst_mean;
    return result;
}

MinPower min_power(const SweepResult& result, const RadioConfig& radio, double target_snr_db,
                   WorstCase mode)
{
    if (!std::isfinite(target_snr_db))
        throw InvalidConfig("target SNR must be finite");
    const double g = mode == WorstCase::local_mean ? result.worst_case_local_mean_gain
                                                   : result.worst_case_unit_gain;
    if (!(g > 0.0))
        throw InfeasibleError("worst-case channel gain is zero; no finite power meets the target");
    MinPower out;
    out.worst_gain = g;
    out.target_snr_linear = db_to_linear(target_snr_db);
    out.p_min_w = out.target_snr_linear * radio.noise_power_w / g;
    out.p_min_dbm = watts_to_dbm(out.p_min_w);
    return out;
}

MinPower min_power(const ScenarioSpec& spec, double target_snr_db, WorstCase mode)
{
    return min_power(average_se(spec), spec.radio, target_snr_db, mode);
}

std::vector<Fig2Row> compare_matrix(const std::vector<double>& lengths_m,
                                    const std::vector<std::size_t>& counts,
                                    const MatrixOptions& options)
{
    if (lengths_m.empty() || counts.empty())
        throw InvalidConfig("comparison matrix needs at least one length and one PA count");

    std::vector<ScenarioSpec> cells;
    for (const double length : lengths_m) {
        CorridorGeometry geometry = options.geometry;
        geometry.length_m = length;
        for (const auto mode : {lcx::FeedMode::single, lcx::FeedMode::double_ended, lcx::FeedMode::segmented})
            cells.push_back(lcx_scenario(mode, geometry, options.radio, options.segments));
        cells.push_back(pass_movable_scenario(geometry, options.radio));
        for (const std::size_t n : counts) {
            cells.push_back(pass_fix_scenario(n, geometry, options.radio));
            cells.push_back(pass_active_scenario(n, options.pitch_m, geometry, options.radio));
        }
    }

    std::vector<Fig2Row> rows;
    rows.reserve(cells.size());
    for (auto& cell : cells) {
        cell.cable = options.cable;
        cell.sample_count = options.sample_count;
        const auto result = average_se(cell);
        rows.push_back({cell.label(), cell.geometry.length_m, cell.reported_count(), result.average_se});
    }
    return rows;
}

const Fig2Row& find_cell(const std::vector<Fig2Row>& rows, const std::string& architecture,
                         double length_m, std::optional<std::size_t> count)
{
    for (const auto& row : rows) {
        if (row.architecture == architecture && row.length_m == length_m && row.count == count)
            return row;
    }
    throw std::out_of_range("no cell " + architecture + " at L = " + std::to_string(length_m));
}

std::vector<PowerRow> power_curve(const std::vector<ScenarioSpec>& scenarios,
                                  const std::vector<double>& targets_db, WorstCase mode)
{
    if (targets_db.empty())
        throw InvalidConfig("power curve needs at least one target SNR");
    std::vector<PowerRow> rows;
    for (const auto& spec : scenarios) {
        const auto sweep = average_se(spec);
        for (const double target : targets_db)
            rows.push_back({spec.label(), target, min_power(sweep, spec.radio, target, mode).p_min_dbm});
    }
    return rows;
}

std::vector<ScenarioSpec> energy_scenarios(const CorridorGeometry& geometry, const RadioConfig& radio,
                                           std::size_t pa_count, std::size_t segments)
{
    return {
        lcx_scenario(lcx::FeedMode::single, geometry, radio),
        lcx_scenario(lcx::FeedMode::double_ended, geometry, radio),
        lcx_scenario(lcx::FeedMode::segmented, geometry, radio, segments),
        pass_fix_scenario(pa_count, geometry, radio),
        pass_active_equidistant_scenario(pa_count, 1, geometry, radio),
    };
}

std::vector<double> target_range(double min_db, double max_db, double step_db)
{
    if (!(step_db > 0.0) || !std::isfinite(min_db) || !std::isfinite(max_db) || max_db < min_db)
        throw InvalidConfig("SNR range needs finite min <= max and a positive step");
    std::vector<double> targets;
    const auto steps = static_cast<std::size_t>(std::floor((max_db - min_db) / step_db + 1e-6));
    for (std::size_t i = 0; i <= steps; ++i)
        targets.push_back(min_db + static_cast<double>(i) * step_db);
    return targets;
}

bool DeltaCheck::within() const
{
    return std::abs(model_delta - reference_delta) <= tolerance;
}

std::vector<DeltaCheck> reference_deltas(const std::vector<Fig2Row>& rows)
{
    struct Reference {
        const char* name;
        const char* minuend;
        std::optional<std::size_t> minuend_count;
        const char* subtrahend;
        double length;
        double delta;
    };
    static const Reference references[] = {
        {"active1-vs-lcx-single@50", "pass-active", 1, "lcx-single", 50.0, 2.71},
        {"active1-vs-lcx-single@1000", "pass-active", 1, "lcx-single", 1000.0, 13.87},
        {"movable-vs-lcx-double@1000", "pass-movable", std::nullopt, "lcx-double", 1000.0, 10.79},
        {"movable-vs-lcx-segmented@1000", "pass-movable", std::nullopt, "lcx-segmented-4", 1000.0, 7.86},
    };

    std::vector<DeltaCheck> checks;
    for (const auto& ref : references) {
        DeltaCheck c;
        c.name = ref.name;
        c.minuend = ref.minuend;
        c.minuend_count = ref.minuend_count;
        c.subtrahend = ref.subtrahend;
        c.length_m = ref.length;
        c.minuend_se = find_cell(rows, ref.minuend, ref.length, ref.minuend_count).average_se;
        c.subtrahend_se = find_cell(rows, ref.subtrahend, ref.length).average_se;
        c.model_delta = c.minuend_se - c.subtrahend_se;
        c.reference_delta = ref.delta;
        c.tolerance = std::max(0.2 * ref.delta, 0.7);
        checks.push_back(c);
    }
    return checks;
}

} // namespace railwave::sweep
