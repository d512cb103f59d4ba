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

#include "railwave/pass_channel.hpp"
#include "railwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace railwave::pass {

PassArray::PassArray(std::vector<double> positions_m, const CorridorGeometry& geometry,
                     double eta, double n_eff)
    : positions_(std::move(positions_m)), geometry_(geometry), eta_(eta), n_eff_(n_eff)
{
    geometry_.validate();
    if (positions_.empty())
        throw InvalidConfig("a PASS array needs at least one PA");
    if (!(eta_ > 0.0 && eta_ <= 1.0))
        throw InvalidConfig("coupling efficiency eta must lie in (0, 1]");
    if (!(n_eff_ >= 0.0) || !std::isfinite(n_eff_))
        throw InvalidConfig("effective refractive index must be finite and non-negative");
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        const double x = positions_[i];
        if (!(x >= 0.0 && x <= geometry_.length_m))
            throw InvalidConfig("PA position " + std::to_string(x) + " m lies outside the corridor");
        if (i > 0 && !(x > positions_[i - 1]))
            throw InvalidConfig("PA positions must be strictly increasing");
    }
}

PassArray build_equidistant(std::size_t count, const CorridorGeometry& geometry, double eta,
                            double n_eff)
{
    if (count == 0)
        throw InvalidConfig("equidistant layout needs at least one PA");
    geometry.validate();
    std::vector<double> positions(count);
    const double n = static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i)
        positions[i] = (2.0 * static_cast<double>(i) + 1.0) * geometry.length_m / (2.0 * n);
    return PassArray(std::move(positions), geometry, eta, n_eff);
}

PassArray build_pitched(double pitch_m, const CorridorGeometry& geometry, double eta, double n_eff)
{
    geometry.validate();
    if (!(pitch_m > 0.0))
        throw InvalidConfig("PA pitch must be positive");
    if (pitch_m > geometry.length_m)
        throw InvalidConfig("PA pitch exceeds the corridor length");
    // Relative slack so that L an exact multiple of the pitch is not lost to rounding.
    const auto count =
        static_cast<std::size_t>(std::floor(geometry.length_m / pitch_m * (1.0 + 1e-12)));
    std::vector<double> positions(count);
    for (std::size_t k = 0; k < count; ++k)
        positions[k] = pitch_m * (static_cast<double>(k) + 0.5);
    return PassArray(std::move(positions), geometry, eta, n_eff);
}

ActivationSet select_nearest(const PassArray& array, double x_user, std::size_t count)
{
    if (count == 0 || count > array.size())
        throw InvalidConfig("nearest-N activation needs 1 <= N <= " + std::to_string(array.size()));

    const auto pos = array.positions();
    // Two-pointer walk outward from the user; the left candidate always has
    // the lower index, so it wins ties.
    auto right = static_cast<std::ptrdiff_t>(std::lower_bound(pos.begin(), pos.end(), x_user) - pos.begin());
    auto left = right - 1;
    const auto n = static_cast<std::ptrdiff_t>(pos.size());

    ActivationSet set;
    set.indices.reserve(count);
    while (set.indices.size() < count) {
        const bool has_left = left >= 0;
        const bool has_right = right < n;
        bool take_left = has_left;
        if (has_left && has_right)
            take_left = std::abs(pos[static_cast<std::size_t>(left)] - x_user) <=
                        std::abs(pos[static_cast<std::size_t>(right)] - x_user);
        if (take_left)
            set.indices.push_back(static_cast<std::size_t>(left--));
        else
            set.indices.push_back(static_cast<std::size_t>(right++));
    }
    std::sort(set.indices.begin(), set.indices.end());
    return set;
}

ActivationSet activate_all(const PassArray& array)
{
    ActivationSet set;
    set.indices.resize(array.size());
    for (std::size_t i = 0; i < array.size(); ++i)
        set.indices[i] = i;
    return set;
}

std::complex<double> channel_entry(const PassArray& array, std::size_t index, double x_user,
                                   double wavelength_m)
{
    const double x_n = array.positions()[index];
    const double d = slant_distance(x_user, x_n, array.geometry());
    const double amplitude = std::sqrt(array.eta()) * free_space_amplitude(d, wavelength_m);
    const double phase = -2.0 * pi * (d + array.n_eff() * x_n) / wavelength_m;
    return std::polar(amplitude, phase);
}

std::vector<std::complex<double>> channel_vector(const PassArray& array, double x_user,
                                                 const RadioConfig& radio)
{
    const double lambda = radio.wavelength_m();
    std::vector<std::complex<double>> h(array.size());
    for (std::size_t n = 0; n < array.size(); ++n)
        h[n] = channel_entry(array, n, x_user, lambda);
    return h;
}

namespace {

void check_active(const PassArray& array, const ActivationSet& active)
{
    if (active.indices.empty())
        throw InvalidConfig("activation set is empty");
    for (std::size_t i = 0; i < active.indices.size(); ++i) {
        if (active.indices[i] >= array.size())
            throw InvalidConfig("activation index out of range");
        if (i > 0 && active.indices[i] <= active.indices[i - 1])
            throw InvalidConfig("activation indices must be unique and ascending");
    }
}

} // namespace

UnitGain pass_unit_gain(const PassArray& array, const ActivationSet& active, double x_user,
                        double wavelength_m)
{
    check_active(array, active);
    std::complex<double> sum{0.0, 0.0};
    double power_sum = 0.0;
    for (const std::size_t n : active.indices) {
        const auto h = channel_entry(array, n, x_user, wavelength_m);
        sum += h;
        power_sum += std::norm(h);
    }
    const double share = 1.0 / static_cast<double>(active.count());
    return {share * std::norm(sum), share * power_sum};
}

double pass_snr(const PassArray& array, const ActivationSet& active, double x_user,
                const RadioConfig& radio)
{
    const auto gain = pass_unit_gain(array, active, x_user, radio.wavelength_m());
    return radio.transmit_power_w * gain.coherent / radio.noise_power_w;
}

double movable_unit_gain(const CorridorGeometry& geometry, double wavelength_m, double eta)
{
    const double a = free_space_amplitude(geometry.height_m, wavelength_m);
    return eta * a * a;
}

double movable_snr(double /*x_user*/, const RadioConfig& radio, const CorridorGeometry& geometry,
                   double eta)
{
    return radio.transmit_power_w * movable_unit_gain(geometry, radio.wavelength_m(), eta) /
           radio.noise_power_w;
}

ActivationSet best_subset_oracle(const PassArray& array, double x_user, std::size_t count,
                                 const RadioConfig& radio)
{
    const std::size_t n = array.size();
    if (n > oracle_max_elements)
        throw OracleCapacityError("exhaustive subset search is limited to " +
                                  std::to_string(oracle_max_elements) + " PAs");
    if (count == 0 || count > n)
        throw InvalidConfig("subset size must satisfy 1 <= N <= array size");

    const auto h = channel_vector(array, x_user, radio);

    std::vector<std::size_t> combo(count);
    for (std::size_t i = 0; i < count; ++i)
        combo[i] = i;

    ActivationSet best;
    double best_power = -1.0;
    while (true) {
        std::complex<double> sum{0.0, 0.0};
        for (const std::size_t i : combo)
            sum += h[i];
        const double power = std::norm(sum);
        if (power > best_power) {
            best_power = power;
            best.indices = combo;
        }

        // Next combination in lexicographic order.
        std::size_t k = count;
        while (k > 0 && combo[k - 1] == n - count + (k - 1))
            --k;
        if (k == 0)
            break;
        ++combo[k - 1];
        for (std::size_t j = k; j < count; ++j)
            combo[j] = combo[j - 1] + 1;
    }
    return best;
}

} // namespace railwave::pass
