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

#include "railwave/dataset.hpp"
#include "railwave/sweep.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace railwave::report {

/// Effective configuration, echoed as "# key=value" lines ahead of the
/// CSV header so every artifact carries the parameters that produced it.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// Six significant digits, "." decimal separator, locale independent.
std::string format_number(double value);

void write_config(std::ostream& out, const ConfigEcho& config);

// x, snr_db, se_bpshz
void write_sweep_csv(std::ostream& out, const ConfigEcho& config, const sweep::SweepResult& result);

// architecture, L_m, N, avg_se_bpshz
void write_fig2_csv(std::ostream& out, const ConfigEcho& config, const std::vector<sweep::Fig2Row>& rows);

// architecture, target_snr_db, p_min_dbm
void write_fig3_csv(std::ostream& out, const ConfigEcho& config, const std::vector<sweep::PowerRow>& rows);

// t, snr_bucket_db, nmse_db, baseline_ls_nmse_db
void write_score_csv(std::ostream& out, const ConfigEcho& config, const std::vector<ce::ScoreRow>& rows);

// t, snr_bucket_db, samples, nmse_db
void write_ls_csv(std::ostream& out, const ConfigEcho& config, const std::vector<ce::LsRow>& rows);

/// Per-position decomposition of one deployment's SNR into the incoherent
/// link budget and the coherent combining term, averaged along the track.
struct SnrTerms {
    double average_se = 0.0;
    double mean_snr_db = 0.0;           // mean of 10 log10 SNR
    double mean_incoherent_snr_db = 0.0; // P/sigma^2 times the local-mean gain
    double mean_combining_db = 0.0;      // coherent over local-mean gain
    double worst_incoherent_snr_db = 0.0;
};

SnrTerms snr_terms(const sweep::SweepResult& result, const RadioConfig& radio);

// Rebuilds the scenario behind one comparison-matrix cell.
sweep::ScenarioSpec matrix_cell(const std::string& architecture, double length_m,
                                std::optional<std::size_t> count, const sweep::MatrixOptions& options);

/// Text report for the published SE gaps: model and reference deltas, and
/// for each side the SNR terms so a gap can be traced to link budget or
/// combining. Recomputes the involved cells with `options`.
void write_deviation_report(std::ostream& out, const ConfigEcho& config,
                            const std::vector<sweep::DeltaCheck>& checks,
                            const sweep::MatrixOptions& options);

} // namespace railwave::report
