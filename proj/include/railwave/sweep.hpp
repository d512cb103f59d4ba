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

#pragma once

#include "railwave/corridor.hpp"
#include "railwave/lcx_channel.hpp"
#include "railwave/pass_channel.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace railwave::sweep {

inline constexpr std::size_t default_sample_count = 10'000;

enum class Architecture { lcx_single, lcx_double, lcx_segmented, pass_fix, pass_active, pass_movable };

/// One deployment evaluated along the corridor.
///
/// pass_fix deploys `pa_count` equidistant PAs, all radiating. pass_active
/// deploys PAs on `pitch_m` (or, when pitch_m is 0, `pa_count` equidistant
/// PAs) and activates the `active_count` nearest to the user.
struct ScenarioSpec {
    Architecture architecture = Architecture::pass_movable;
    CorridorGeometry geometry;
    RadioConfig radio;
    lcx::CableParams cable;
    double eta = pass::default_eta;
    double n_eff = pass::default_n_eff;
    std::size_t segments = 4;
    std::size_t pa_count = 1;
    std::size_t active_count = 1;
    double pitch_m = pass::default_pitch_m;
    std::size_t sample_count = default_sample_count;

    void validate() const;
    // Stable name used in CSV output, e.g. "lcx-segmented-4" or "pass-active".
    std::string label() const;
    // Count reported in the N column; empty for N-independent architectures.
    std::optional<std::size_t> reported_count() const;
};

ScenarioSpec lcx_scenario(lcx::FeedMode mode, const CorridorGeometry& geometry,
                          const RadioConfig& radio, std::size_t segments = 4);
ScenarioSpec pass_fix_scenario(std::size_t count, const CorridorGeometry& geometry,
                               const RadioConfig& radio);
ScenarioSpec pass_active_scenario(std::size_t active_count, double pitch_m,
                                  const CorridorGeometry& geometry, const RadioConfig& radio);
ScenarioSpec pass_active_equidistant_scenario(std::size_t deployed, std::size_t active_count,
                                              const CorridorGeometry& geometry,
                                              const RadioConfig& radio);
ScenarioSpec pass_movable_scenario(const CorridorGeometry& geometry, const RadioConfig& radio);

struct SweepPoint {
    double x_m = 0.0;
    double snr_db = 0.0;
    double se_bpshz = 0.0;
    double unit_gain = 0.0;       // received power per transmitted watt
    double local_mean_gain = 0.0; // same, with small-scale fading averaged out
};

struct SweepResult {
    std::vector<SweepPoint> per_point;
    double average_se = 0.0;
    double worst_case_unit_gain = 0.0;
    double worst_case_local_mean_gain = 0.0;
};

// Sample x_k = (k + 1/2) L / K.
std::vector<double> sample_grid(double length_m, std::size_t sample_count);

SweepResult average_se(const ScenarioSpec& spec);

/// Which received power the worst-case guarantee is taken over.
///
/// `local_mean` (the default) uses the phase-averaged power. The minimum of
/// the coherent sum sits in interference nulls whose depth grows without
/// bound as the grid is refined, so `instantaneous` is kept for comparison.
enum class WorstCase { local_mean, instantaneous };

struct MinPower {
    double p_min_w = 0.0;
    double p_min_dbm = 0.0;
    double worst_gain = 0.0;
    double target_snr_linear = 0.0;
};

// P_min = gamma sigma^2 / G_min. Throws InfeasibleError when G_min is 0.
MinPower min_power(const SweepResult& result, const RadioConfig& radio, double target_snr_db,
                   WorstCase mode = WorstCase::local_mean);
MinPower min_power(const ScenarioSpec& spec, double target_snr_db,
                   WorstCase mode = WorstCase::local_mean);

struct Fig2Row {
    std::string architecture;
    double length_m = 0.0;
    std::optional<std::size_t> count;
    double average_se = 0.0;
};

struct MatrixOptions {
    CorridorGeometry geometry; // length is replaced per row
    RadioConfig radio;
    lcx::CableParams cable;
    double pitch_m = pass::default_pitch_m;
    std::size_t segments = 4;
    std::size_t sample_count = default_sample_count;
};

/// Average SE for every (architecture, L, N): the three LCX feeds and the
/// movable PA once per length, PASS Fix and PASS Active once per N.
std::vector<Fig2Row> compare_matrix(const std::vector<double>& lengths_m,
                                    const std::vector<std::size_t>& counts,
                                    const MatrixOptions& options);

// Looks up a cell; throws std::out_of_range when absent.
const Fig2Row& find_cell(const std::vector<Fig2Row>& rows, const std::string& architecture,
                         double length_m, std::optional<std::size_t> count = std::nullopt);

struct PowerRow {
    std::string architecture;
    double target_snr_db = 0.0;
    double p_min_dbm = 0.0;
};

std::vector<PowerRow> power_curve(const std::vector<ScenarioSpec>& scenarios,
                                  const std::vector<double>& targets_db,
                                  WorstCase mode = WorstCase::local_mean);

/// The five energy-comparison deployments on one corridor: three LCX feeds,
/// PASS Fix with `pa_count` radiating PAs, and PASS Active on the same
/// equidistant layout radiating only from the PA nearest the user.
std::vector<ScenarioSpec> energy_scenarios(const CorridorGeometry& geometry,
                                           const RadioConfig& radio, std::size_t pa_count = 40,
                                           std::size_t segments = 4);

// Targets min, min + step, ... up to and including max (within step/1e6).
std::vector<double> target_range(double min_db, double max_db, double step_db);

/// Published SE gaps between architectures, with the same gap recomputed
/// from a matrix. A cell is in tolerance when within max(20 %, 0.7 bps/Hz).
struct DeltaCheck {
    std::string name;
    std::string minuend;
    std::optional<std::size_t> minuend_count;
    std::string subtrahend;
    double length_m = 0.0;
    double minuend_se = 0.0;
    double subtrahend_se = 0.0;
    double model_delta = 0.0;
    double reference_delta = 0.0;
    double tolerance = 0.0;
    bool within() const;
};

std::vector<DeltaCheck> reference_deltas(const std::vector<Fig2Row>& rows);

std::string to_string(Architecture architecture);
Architecture parse_architecture(const std::string& name);

} // namespace railwave::sweep
