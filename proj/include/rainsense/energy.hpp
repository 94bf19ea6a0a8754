//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_ENERGY_HPP
#define RAINSENSE_ENERGY_HPP

#include "rainsense/matrix.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace rainsense {

enum class StationKind { macro_cell, micro_cell };

struct EnergyStation {
    double x_m = 0.0;
    double y_m = 0.0;
    double height_m = 25.0;
    StationKind kind = StationKind::macro_cell;
    double power_cap_dbm = 53.0;
};

struct EnergyUser {
    double x_m = 0.0;
    double y_m = 0.0;
    double height_m = 1.5;
};

// Square service area: one macro station at the center, micro stations and
// users uniform at random. Rain adds a per-station Gaussian attenuation.
struct EnergyConfig {
    double area_km = 1.0;
    std::size_t micro_count = 20;
    std::size_t user_count = 200;
    double fc_ghz = 3.4;
    double macro_height_m = 25.0; // UMa default
    double micro_height_m = 10.0; // UMi street-canyon default
    double user_height_m = 1.5;
    double threshold_dbm = -110.0; // coverage threshold R
    double macro_cap_dbm = 53.0;
    double micro_cap_dbm = 38.0;
    double rain_mean_db = 9.0;
    double rain_std_db = 1.0;
    bool shadow_fading = true;
    std::uint64_t seed = 1;
};

void validate_energy_config(const EnergyConfig& cfg);

struct EnergyScenario {
    EnergyConfig cfg;
    std::vector<EnergyStation> stations; // [0] is the macro
    std::vector<EnergyUser> users;
    DenseMatrix shadow_z;        // stations x users, standard-normal draws
    std::vector<double> rain_db; // per-station rain attenuation draw
};

// Positions and random draws are fixed once per seed, so the rain, no-rain,
// and robust problems share identical randomness.
EnergyScenario make_scenario(const EnergyConfig& cfg);

// 3GPP TR 38.901 components at h_UT = user height. The macro follows the UMa
// laws, micros UMi street canyon (Tables 7.4.1-1 and 7.4.2-1).
double los_probability(StationKind kind, double d2d_m);
double path_loss_los_db(StationKind kind, double fc_ghz, double d2d_m, double h_bs_m,
                        double h_ut_m);
double path_loss_nlos_db(StationKind kind, double fc_ghz, double d2d_m, double h_bs_m,
                         double h_ut_m);

// Pr_los * PL_los + (1 - Pr_los) * PL_nlos, no shadow fading or rain.
double expected_path_loss_db(StationKind kind, double fc_ghz, double d2d_m, double h_bs_m,
                             double h_ut_m);

// Link loss for one (station, user) pair: the expected loss above, plus the
// pair's shadow-fading draw (sigma blended by LOS probability), plus the
// station's rain draw when rain is true. Throws when the 2D distance is 0.
double path_loss_db(const EnergyScenario& scenario, std::size_t station, std::size_t user,
                    bool rain);

struct PowerAllocation {
    // Power per station in dBm; a station with no assigned users is off and
    // contributes 0 W (recorded as -inf dBm).
    std::vector<double> power_dbm;
    std::vector<std::size_t> assigned_station; // per user
    double total_watts = 0.0;
};

// Minimum-power configuration for one weather scenario: each user joins the
// station needing the least transmit power (subject to the power caps), each
// station transmits the maximum of its users' requirements. Throws when a
// user cannot be covered by any station at full power, listing the user.
PowerAllocation min_power_single(const EnergyScenario& scenario, bool rain);

// Weather-agnostic configuration: per-user requirement is the maximum over
// the rain and no-rain scenarios, mechanics otherwise identical.
PowerAllocation min_power_robust(const EnergyScenario& scenario);

struct EnergyOutcome {
    double p_w_watts = 0.0;   // rain-aware expected power
    double p_wo_watts = 0.0;  // weather-agnostic power
    double savings = 0.0;     // (p_wo - p_w) / p_wo
    double p_rain_watts = 0.0;
    double p_norain_watts = 0.0;
};

// Expected power with rain awareness: P_w = pr * P^{c1} + (1 - pr) * P^{c2},
// all in watts. Throws for pr outside [0, 1].
EnergyOutcome expected_energy(const EnergyScenario& scenario, double pr_rain);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Complex relative permittivity of liquid water from the single-term Debye
// relaxation model, with the temperature-dependent parameters of
// Kaatze (1989). Valid for freq in (0.1, 100] GHz and temp in [0, 60] C.
std::complex<double> water_permittivity(double freq_ghz, double temp_c);

// Distance over which the field amplitude decays to 1/e inside water:
// 1 / alpha with alpha the attenuation constant of the propagation constant
// derived from the permittivity above.
double water_attenuation_length_m(double freq_ghz, double temp_c);

} // namespace rainsense

#endif // RAINSENSE_ENERGY_HPP
