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

#include "railwave/report.hpp"
#include "railwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

namespace railwave::report {

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(6) << value;
    return os.str();
}

void write_config(std::ostream& out, const ConfigEcho& config)
{
    for (const auto& [key, value] : config)
        out << "# " << key << '=' << value << '\n';
}

void write_sweep_csv(std::ostream& out, const ConfigEcho& config, const sweep::SweepResult& result)
{
    write_config(out, config);
    out << "# average_se_bpshz=" << format_number(result.average_se) << '\n';
    out << "x,snr_db,se_bpshz\n";
    for (const auto& p : result.per_point)
        out << format_number(p.x_m) << ',' << format_number(p.snr_db) << ',' << format_number(p.se_bpshz) << '\n';
}

void write_fig2_csv(std::ostream& out, const ConfigEcho& config, const std::vector<sweep::Fig2Row>& rows)
{
    write_config(out, config);
    out << "architecture,L_m,N,avg_se_bpshz\n";
    for (const auto& r : rows) {
        out << r.architecture << ',' << format_number(r.length_m) << ',';
        if (r.count)
            out << *r.count;
        out << ',' << format_number(r.average_se) << '\n';
    }
}

void write_fig3_csv(std::ostream& out, const ConfigEcho& config, const std::vector<sweep::PowerRow>& rows)
{
    write_config(out, config);
    out << "architecture,target_snr_db,p_min_dbm\n";
    for (const auto& r : rows)
        out << r.architecture << ',' << format_number(r.target_snr_db) << ',' << format_number(r.p_min_dbm) << '\n';
}

void write_score_csv(std::ostream& out, const ConfigEcho& config, const std::vector<ce::ScoreRow>& rows)
{
    write_config(out, config);
    out << "t,snr_bucket_db,nmse_db,baseline_ls_nmse_db\n";
    for (const auto& r : rows) {
        out << r.t << ',' << r.snr_bucket_db << ',' << format_number(r.nmse_db) << ','
            << format_number(r.baseline_ls_nmse_db) << '\n';
    }
}

void write_ls_csv(std::ostream& out, const ConfigEcho& config, const std::vector<ce::LsRow>& rows)
{
    write_config(out, config);
    out << "t,snr_bucket_db,samples,nmse_db\n";
    for (const auto& r : rows)
        out << r.t << ',' << r.snr_bucket_db << ',' << r.samples << ',' << format_number(r.nmse_db) << '\n';
}

SnrTerms snr_terms(const sweep::SweepResult& result, const RadioConfig& radio)
{
    if (result.per_point.empty())
        throw InvalidConfig("sweep result has no points");
    const double budget_db = linear_to_db(radio.transmit_power_w / radio.noise_power_w);
    const double n = static_cast<double>(result.per_point.size());

    SnrTerms t;
    t.average_se = result.average_se;
    t.worst_incoherent_snr_db = std::numeric_limits<double>::infinity();
    for (const auto& p : result.per_point) {
        const double incoherent = budget_db + linear_to_db(p.local_mean_gain);
        t.mean_snr_db += p.snr_db / n;
        t.mean_incoherent_snr_db += incoherent / n;
        t.mean_combining_db += linear_to_db(p.unit_gain / p.local_mean_gain) / n;
        t.worst_incoherent_snr_db = std::min(t.worst_incoherent_snr_db, incoherent);
    }
    return t;
}

sweep::ScenarioSpec matrix_cell(const std::string& architecture, double length_m,
                                std::optional<std::size_t> count, const sweep::MatrixOptions& options)
{
    CorridorGeometry geometry = options.geometry;
    geometry.length_m = length_m;
    sweep::ScenarioSpec spec;
    const std::string segmented_prefix = "lcx-segmented-";
    if (architecture.starts_with(segmented_prefix)) {
        spec = sweep::lcx_scenario(lcx::FeedMode::segmented, geometry, options.radio,
                                   std::stoul(architecture.substr(segmented_prefix.size())));
    } else {
        switch (sweep::parse_architecture(architecture)) {
        case sweep::Architecture::lcx_single:
            spec = sweep::lcx_scenario(lcx::FeedMode::single, geometry, options.radio);
            break;
        case sweep::Architecture::lcx_double:
            spec = sweep::lcx_scenario(lcx::FeedMode::double_ended, geometry, options.radio);
            break;
        case sweep::Architecture::lcx_segmented:
            spec = sweep::lcx_scenario(lcx::FeedMode::segmented, geometry, options.radio, options.segments);
            break;
        case sweep::Architecture::pass_fix:
            spec = sweep::pass_fix_scenario(count.value_or(1), geometry, options.radio);
            break;
        case sweep::Architecture::pass_active:
            spec = sweep::pass_active_scenario(count.value_or(1), options.pitch_m, geometry, options.radio);
            break;
        case sweep::Architecture::pass_movable:
            spec = sweep::pass_movable_scenario(geometry, options.radio);
            break;
        }
    }
    spec.cable = options.cable;
    spec.sample_count = options.sample_count;
    return spec;
}

namespace {

std::string cell_name(const std::string& architecture, std::optional<std::size_t> count)
{
    return count ? architecture + "(N=" + std::to_string(*count) + ")" : architecture;
}

void write_terms(std::ostream& out, const std::string& name, const SnrTerms& t)
{
    out << "  " << name << ": avg_se=" << format_number(t.average_se)
        << " mean_snr_db=" << format_number(t.mean_snr_db)
        << " incoherent_snr_db=" << format_number(t.mean_incoherent_snr_db)
        << " combining_db=" << format_number(t.mean_combining_db)
        << " worst_incoherent_snr_db=" << format_number(t.worst_incoherent_snr_db) << '\n';
}

} // namespace

void write_deviation_report(std::ostream& out, const ConfigEcho& config,
                            const std::vector<sweep::DeltaCheck>& checks,
                            const sweep::MatrixOptions& options)
{
    write_config(out, config);
    out << "model deviation report: SE gaps against published values\n";
    for (const auto& c : checks) {
        const auto lhs_spec = matrix_cell(c.minuend, c.length_m, c.minuend_count, options);
        const auto rhs_spec = matrix_cell(c.subtrahend, c.length_m, std::nullopt, options);
        const auto lhs = snr_terms(sweep::average_se(lhs_spec), lhs_spec.radio);
        const auto rhs = snr_terms(sweep::average_se(rhs_spec), rhs_spec.radio);

        out << '\n' << c.name << " at L=" << format_number(c.length_m) << " m: "
            << (c.within() ? "within" : "OUTSIDE") << " tolerance\n";
        out << "  model_delta=" << format_number(c.model_delta)
            << " reference_delta=" << format_number(c.reference_delta)
            << " error=" << format_number(c.model_delta - c.reference_delta)
            << " tolerance=" << format_number(c.tolerance) << '\n';
        write_terms(out, cell_name(c.minuend, c.minuend_count), lhs);
        write_terms(out, c.subtrahend, rhs);
        out << "  difference: mean_snr_db=" << format_number(lhs.mean_snr_db - rhs.mean_snr_db)
            << " incoherent_snr_db=" << format_number(lhs.mean_incoherent_snr_db - rhs.mean_incoherent_snr_db)
            << " combining_db=" << format_number(lhs.mean_combining_db - rhs.mean_combining_db) << '\n';
        // log2(10)/10 bps/Hz per dB at high SNR.
        const double reference_snr_gap_db = c.reference_delta * 10.0 / std::log2(10.0);
        out << "  high-SNR equivalent: model gap " << format_number(c.model_delta * 10.0 / std::log2(10.0))
            << " dB vs reference gap " << format_number(reference_snr_gap_db) << " dB\n";
    }
}

} // namespace railwave::report
