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

#include "railwave/lcx_channel.hpp"
#include "railwave/error.hpp"

#include <cmath>

namespace railwave::lcx {

void CableParams::validate() const
{
    if (!(slot_pitch_m > 0.0) || !std::isfinite(slot_pitch_m))
        throw InvalidConfig("LCX slot pitch must be positive");
    if (!(attenuation_db_per_m >= 0.0) || !std::isfinite(attenuation_db_per_m))
        throw InvalidConfig("LCX attenuation must be non-negative");
    if (!(epsilon_r >= 1.0) || !std::isfinite(epsilon_r))
        throw InvalidConfig("LCX relative permittivity must be >= 1");
}

LcxCable::LcxCable(double span_begin_m, double span_end_m, double feed_origin_m, int feed_direction,
                   double feed_power_w, const CableParams& params, double wavelength_m)
    : feed_origin_(feed_origin_m), feed_direction_(feed_direction), feed_power_(feed_power_w),
      wavelength_(wavelength_m)
{
    params.validate();
    if (feed_direction != 1 && feed_direction != -1)
        throw InvalidConfig("feed direction must be +1 or -1");
    if (!(feed_power_w >= 0.0))
        throw InvalidConfig("feed power must be non-negative");
    if (!(wavelength_m > 0.0))
        throw InvalidConfig("wavelength must be positive");
    const double span = span_end_m - span_begin_m;
    if (!(span > 0.0))
        throw InvalidConfig("LCX span must be positive");
    if (params.slot_pitch_m > span)
        throw InvalidConfig("LCX slot pitch exceeds the fed span");

    const auto count =
        static_cast<std::size_t>(std::floor(span / params.slot_pitch_m * (1.0 + 1e-12)));
    x_.resize(count);
    guided_.resize(count);
    guided_phase_.resize(count);
    weight_.resize(count);
    share_.resize(count);

    const double guided_wavenumber = 2.0 * pi * std::sqrt(params.epsilon_r) / wavelength_m;
    double profile_sum = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
        x_[m] = span_begin_m + params.slot_pitch_m * (static_cast<double>(m) + 0.5);
        guided_[m] = std::abs(x_[m] - feed_origin_m);
        guided_phase_[m] = std::fmod(guided_wavenumber * guided_[m], 2.0 * pi);
        share_[m] = std::pow(10.0, -params.attenuation_db_per_m * guided_[m] / 10.0);
        profile_sum += share_[m];
    }
    for (std::size_t m = 0; m < count; ++m) {
        share_[m] /= profile_sum;
        weight_[m] = std::sqrt(feed_power_w * share_[m]);
    }
}

LcxCable LcxCable::with_feed_power(double feed_power_w) const
{
    if (!(feed_power_w >= 0.0))
        throw InvalidConfig("feed power must be non-negative");
    LcxCable copy = *this;
    for (std::size_t m = 0; m < share_.size(); ++m)
        copy.weight_[m] = std::sqrt(feed_power_w * share_[m]);
    copy.feed_power_ = feed_power_w;
    return copy;
}

FeedPower feed_power_at_user(const LcxCable& cable, double x_user, const CorridorGeometry& geometry)
{
    const auto x = cable.slot_positions();
    const auto a = cable.slot_weights();
    const auto theta = cable.guided_phases();
    const double k0 = 2.0 * pi / cable.wavelength_m();
    const double h2 = geometry.height_m * geometry.height_m;

    double re = 0.0;
    double im = 0.0;
    double incoherent = 0.0;
    for (std::size_t m = 0; m < x.size(); ++m) {
        const double dx = x_user - x[m];
        const double d = std::sqrt(dx * dx + h2);
        const double amp = a[m] / d;
        const double phase = -(k0 * d + theta[m]);
        re += amp * std::cos(phase);
        im += amp * std::sin(phase);
        incoherent += amp * amp;
    }
    const double scale = cable.wavelength_m() / (4.0 * pi);
    const double s2 = scale * scale;
    return {s2 * (re * re + im * im), s2 * incoherent};
}

LcxDeployment build_lcx(FeedMode mode, std::size_t segments, const CorridorGeometry& geometry,
                        const RadioConfig& radio, const CableParams& params)
{
    geometry.validate();
    radio.validate();
    params.validate();
    const double lambda = radio.wavelength_m();
    const double length = geometry.length_m;
    const double power = radio.transmit_power_w;

    LcxDeployment deployment;
    deployment.mode = mode;
    deployment.geometry = geometry;
    switch (mode) {
    case FeedMode::single:
        deployment.segments = 1;
        deployment.feeds.emplace_back(0.0, length, 0.0, +1, power, params, lambda);
        break;
    case FeedMode::double_ended:
        deployment.segments = 1;
        deployment.feeds.emplace_back(0.0, length, 0.0, +1, power / 2.0, params, lambda);
        deployment.feeds.emplace_back(0.0, length, length, -1, power / 2.0, params, lambda);
        break;
    case FeedMode::segmented: {
        if (segments == 0)
            throw InvalidConfig("segmented LCX needs at least one segment");
        deployment.segments = segments;
        const double s_count = static_cast<double>(segments);
        for (std::size_t s = 0; s < segments; ++s) {
            const double begin = static_cast<double>(s) * length / s_count;
            const double end = static_cast<double>(s + 1) * length / s_count;
            deployment.feeds.emplace_back(begin, end, begin, +1, power / s_count, params, lambda);
        }
        break;
    }
    }
    return deployment;
}

FeedPower lcx_received_power(const LcxDeployment& deployment, double x_user)
{
    FeedPower total;
    for (const auto& feed : deployment.feeds) {
        const auto p = feed_power_at_user(feed, x_user, deployment.geometry);
        total.coherent_w += p.coherent_w;
        total.local_mean_w += p.local_mean_w;
    }
    return total;
}

double lcx_snr(const LcxDeployment& deployment, double x_user, const RadioConfig& radio)
{
    return lcx_received_power(deployment, x_user).coherent_w / radio.noise_power_w;
}

std::string to_string(FeedMode mode)
{
    switch (mode) {
    case FeedMode::single: return "single";
    case FeedMode::double_ended: return "double";
    case FeedMode::segmented: return "segmented";
    }
    return "unknown";
}

} // namespace railwave::lcx
