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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace railwave::pass {

inline constexpr double default_eta = 0.95;
inline constexpr double default_n_eff = 1.4;
inline constexpr double default_pitch_m = 1.2195;
inline constexpr std::size_t oracle_max_elements = 20;

/// Pinching antennas clamped onto one dielectric waveguide fed at x = 0.
///
/// Every PA radiates the fraction eta of the power it is given. The guided
/// wave reaches PA n with phase 2*pi*n_eff*x_n/lambda. Arrays are immutable
/// after construction.
class PassArray {
public:
    PassArray(std::vector<double> positions_m, const CorridorGeometry& geometry,
              double eta = default_eta, double n_eff = default_n_eff);

    std::span<const double> positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }
    double eta() const { return eta_; }
    double n_eff() const { return n_eff_; }
    const CorridorGeometry& geometry() const { return geometry_; }

private:
    std::vector<double> positions_;
    CorridorGeometry geometry_;
    double eta_;
    double n_eff_;
};

// Indices of the radiating PAs, ascending.
struct ActivationSet {
    std::vector<std::size_t> indices;

    std::size_t count() const { return indices.size(); }
    bool operator==(const ActivationSet&) const = default;
};

// Centered grid x_n = (2n - 1) L / (2N), n = 1..N.
PassArray build_equidistant(std::size_t count, const CorridorGeometry& geometry,
                            double eta = default_eta, double n_eff = default_n_eff);

// PAs at pitch/2, 3 pitch/2, ... up to L - pitch/2.
PassArray build_pitched(double pitch_m, const CorridorGeometry& geometry,
                        double eta = default_eta, double n_eff = default_n_eff);

// The N PAs closest to the user; equal distances go to the lower index.
ActivationSet select_nearest(const PassArray& array, double x_user, std::size_t count);

ActivationSet activate_all(const PassArray& array);

std::complex<double> channel_entry(const PassArray& array, std::size_t index, double x_user,
                                   double wavelength_m);

std::vector<std::complex<double>> channel_vector(const PassArray& array, double x_user,
                                                 const RadioConfig& radio);

/// Received power per watt of transmit power, split equally over the
/// active set. `coherent` is |sum h_n|^2 / N; `local_mean` drops the
/// phases (sum |h_n|^2 / N), i.e. the average over small-scale fading.
struct UnitGain {
    double coherent = 0.0;
    double local_mean = 0.0;
};

UnitGain pass_unit_gain(const PassArray& array, const ActivationSet& active, double x_user,
                        double wavelength_m);

double pass_snr(const PassArray& array, const ActivationSet& active, double x_user,
                const RadioConfig& radio);

// Upper bound: one PA riding directly above the user.
double movable_unit_gain(const CorridorGeometry& geometry, double wavelength_m, double eta);
double movable_snr(double x_user, const RadioConfig& radio, const CorridorGeometry& geometry,
                   double eta = default_eta);

/// Exhaustive search for the N-subset maximizing |sum h_n|^2. Subsets are
/// visited in lexicographic order and only a strictly better one replaces
/// the incumbent. Throws OracleCapacityError above 20 PAs.
ActivationSet best_subset_oracle(const PassArray& array, double x_user, std::size_t count,
                                 const RadioConfig& radio);

} // namespace railwave::pass
