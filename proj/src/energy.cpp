//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/energy.hpp"

#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rainsense {

namespace {

constexpr double kSpeedOfLight = 299792458.0; // m/s

// Shadow-fading standard deviations, TR 38.901 Table 7.4.1-1.
constexpr double kUmaSigmaLos = 4.0;
constexpr double kUmaSigmaNlos = 6.0;
constexpr double kUmiSigmaLos = 4.0;
constexpr double kUmiSigmaNlos = 7.82;

double d3d_m(double d2d_m, double h_bs_m, double h_ut_m) {
    const double dh = h_bs_m - h_ut_m;
    return std::sqrt(d2d_m * d2d_m + dh * dh);
}

// Breakpoint distance with effective antenna heights (h_E = 1 m, valid for
// user heights below 13 m; TR 38.901 Table 7.4.1-1, Note 1).
double breakpoint_m(double fc_ghz, double h_bs_m, double h_ut_m) {
    const double h_e = 1.0;
    return 4.0 * (h_bs_m - h_e) * (h_ut_m - h_e) * fc_ghz * 1e9 / kSpeedOfLight;
}

} // namespace

double los_probability(StationKind kind, double d2d_m) {
    // TR 38.901 Table 7.4.2-1 (UMa with C'(h_UT) = 0 below 13 m).
    if (d2d_m <= 18.0) {
        return 1.0;
    }
    if (kind == StationKind::macro_cell) {
        return 18.0 / d2d_m + std::exp(-d2d_m / 63.0) * (1.0 - 18.0 / d2d_m);
    }
    return 18.0 / d2d_m + std::exp(-d2d_m / 36.0) * (1.0 - 18.0 / d2d_m);
}

double path_loss_los_db(StationKind kind, double fc_ghz, double d2d_m, double h_bs_m,
                        double h_ut_m) {
    const double d3d = d3d_m(d2d_m, h_bs_m, h_ut_m);
    const double dbp = breakpoint_m(fc_ghz, h_bs_m, h_ut_m);
    const double dh = h_bs_m - h_ut_m;
    if (kind == StationKind::macro_cell) {
        // TR 38.901 Table 7.4.1-1, UMa LOS
        if (d2d_m <= dbp) {
            return 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
        }
        return 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
               9.0 * std::log10(dbp * dbp + dh * dh);
    }
    // UMi street canyon LOS
    if (d2d_m <= dbp) {
        return 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
    }
    return 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
           9.5 * std::log10(dbp * dbp + dh * dh);
}

double path_loss_nlos_db(StationKind kind, double fc_ghz, double d2d_m, double h_bs_m,
                         double h_ut_m) {
    const double d3d = d3d_m(d2d_m, h_bs_m, h_ut_m);
    const double los = path_loss_los_db(kind, fc_ghz, d2d_m, h_bs_m, h_ut_m);
    double nlos;
    if (kind == StationKind::macro_cell) {
        nlos = 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
               0.6 * (h_ut_m - 1.5);
    } else {
        nlos = 22.4 + 35.3 * std::log10(d3d) + 21.3 * std::log10(fc_ghz) -
               0.3 * (h_ut_m - 1.5);
    }
    return std::max(los, nlos);
}

double expected_path_loss_db(StationKind kind, double fc_ghz, double d2d_m, double h_bs_m,
                             double h_ut_m) {
    const double p_los = los_probability(kind, d2d_m);
    return p_los * path_loss_los_db(kind, fc_ghz, d2d_m, h_bs_m, h_ut_m) +
           (1.0 - p_los) * path_loss_nlos_db(kind, fc_ghz, d2d_m, h_bs_m, h_ut_m);
}

void validate_energy_config(const EnergyConfig& cfg) {
    if (!(cfg.area_km > 0.0)) {
        throw std::invalid_argument("EnergyConfig: area must be positive");
    }
    if (cfg.user_count == 0) {
        throw std::invalid_argument("EnergyConfig: need at least one user");
    }
    if (!(cfg.fc_ghz > 0.0)) {
        throw std::invalid_argument("EnergyConfig: carrier frequency must be positive");
    }
    if (cfg.rain_std_db < 0.0) {
        throw std::invalid_argument("EnergyConfig: rain stddev must be >= 0");
    }
    if (!(cfg.macro_height_m > cfg.user_height_m) || !(cfg.micro_height_m > cfg.user_height_m)) {
        throw std::invalid_argument("EnergyConfig: station heights must exceed user height");
    }
}

EnergyScenario make_scenario(const EnergyConfig& cfg) {
    validate_energy_config(cfg);
    EnergyScenario sc;
    sc.cfg = cfg;
    const double side_m = cfg.area_km * 1000.0;

    sc.stations.push_back(
        {0.5 * side_m, 0.5 * side_m, cfg.macro_height_m, StationKind::macro_cell,
         cfg.macro_cap_dbm});
    Rng micro_rng(derive_seed(cfg.seed, seed_tag::micro_layout));
    for (std::size_t i = 0; i < cfg.micro_count; ++i) {
        sc.stations.push_back({micro_rng.uniform(0.0, side_m), micro_rng.uniform(0.0, side_m),
                               cfg.micro_height_m, StationKind::micro_cell, cfg.micro_cap_dbm});
    }
    Rng user_rng(derive_seed(cfg.seed, seed_tag::user_layout));
    sc.users.resize(cfg.user_count);
    for (auto& u : sc.users) {
        u = {user_rng.uniform(0.0, side_m), user_rng.uniform(0.0, side_m), cfg.user_height_m};
    }

    Rng shadow_rng(derive_seed(cfg.seed, seed_tag::shadow_fading));
    sc.shadow_z.resize(sc.stations.size(), sc.users.size());
    for (std::size_t s = 0; s < sc.stations.size(); ++s) {
        for (std::size_t u = 0; u < sc.users.size(); ++u) {
            sc.shadow_z(s, u) = shadow_rng.normal();
        }
    }
    Rng rain_rng(derive_seed(cfg.seed, seed_tag::rain_draw));
    sc.rain_db.resize(sc.stations.size());
    for (auto& r : sc.rain_db) {
        r = rain_rng.normal(cfg.rain_mean_db, cfg.rain_std_db);
    }
    return sc;
}

double path_loss_db(const EnergyScenario& scenario, std::size_t station, std::size_t user,
                    bool rain) {
    const auto& st = scenario.stations.at(station);
    const auto& us = scenario.users.at(user);
    const double dx = st.x_m - us.x_m;
    const double dy = st.y_m - us.y_m;
    const double d2d = std::sqrt(dx * dx + dy * dy);
    if (d2d <= 0.0) {
        throw std::invalid_argument("path_loss_db: station " + std::to_string(station) +
                                    " and user " + std::to_string(user) +
                                    " are co-located (2D distance 0)");
    }
    double loss = expected_path_loss_db(st.kind, scenario.cfg.fc_ghz, d2d, st.height_m,
                                        us.height_m);
    if (scenario.cfg.shadow_fading) {
        // One draw per pair; sigma blended with the same LOS weights as the
        // mean loss.
        const double p_los = los_probability(st.kind, d2d);
        const double sigma =
            st.kind == StationKind::macro_cell
                ? p_los * kUmaSigmaLos + (1.0 - p_los) * kUmaSigmaNlos
                : p_los * kUmiSigmaLos + (1.0 - p_los) * kUmiSigmaNlos;
        loss += sigma * scenario.shadow_z(station, user);
    }
    if (rain) {
        loss += scenario.rain_db[station];
    }
    return loss;
}

namespace {

PowerAllocation allocate_from_requirements(const EnergyScenario& scenario,
                                           const DenseMatrix& required_dbm) {
    const std::size_t n_stations = scenario.stations.size();
    const std::size_t n_users = scenario.users.size();

    PowerAllocation alloc;
    alloc.power_dbm.assign(n_stations, -std::numeric_limits<double>::infinity());
    alloc.assigned_station.assign(n_users, 0);

    std::string infeasible;
    for (std::size_t u = 0; u < n_users; ++u) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_s = n_stations;
        for (std::size_t s = 0; s < n_stations; ++s) {
            const double req = required_dbm(s, u);
            if (req <= scenario.stations[s].power_cap_dbm && req < best) {
                best = req;
                best_s = s;
            }
        }
        if (best_s == n_stations) {
            if (!infeasible.empty()) {
                infeasible += ", ";
            }
            infeasible += std::to_string(u);
            continue;
        }
        alloc.assigned_station[u] = best_s;
        alloc.power_dbm[best_s] = std::max(alloc.power_dbm[best_s], best);
    }
    if (!infeasible.empty()) {
        throw std::runtime_error("min_power: users not coverable at any station's maximum "
                                 "power: " + infeasible);
    }
    alloc.total_watts = 0.0;
    for (const double p : alloc.power_dbm) {
        if (std::isfinite(p)) {
            alloc.total_watts += dbm_to_watts(p);
        }
    }
    return alloc;
}

DenseMatrix requirement_matrix(const EnergyScenario& scenario, bool rain) {
    DenseMatrix req(scenario.stations.size(), scenario.users.size());
    for (std::size_t s = 0; s < scenario.stations.size(); ++s) {
        for (std::size_t u = 0; u < scenario.users.size(); ++u) {
            req(s, u) = scenario.cfg.threshold_dbm + path_loss_db(scenario, s, u, rain);
        }
    }
    return req;
}

} // namespace

PowerAllocation min_power_single(const EnergyScenario& scenario, bool rain) {
    return allocate_from_requirements(scenario, requirement_matrix(scenario, rain));
}

PowerAllocation min_power_robust(const EnergyScenario& scenario) {
    DenseMatrix req = requirement_matrix(scenario, true);
    const DenseMatrix req_norain = requirement_matrix(scenario, false);
    for (std::size_t i = 0; i < req.size(); ++i) {
        req.data()[i] = std::max(req.data()[i], req_norain.data()[i]);
    }
    return allocate_from_requirements(scenario, req);
}

EnergyOutcome expected_energy(const EnergyScenario& scenario, double pr_rain) {
    if (!(pr_rain >= 0.0) || !(pr_rain <= 1.0)) {
        throw std::invalid_argument("expected_energy: pr_rain must be in [0, 1]");
    }
    EnergyOutcome out;
    out.p_rain_watts = min_power_single(scenario, true).total_watts;
    out.p_norain_watts = min_power_single(scenario, false).total_watts;
    out.p_wo_watts = min_power_robust(scenario).total_watts;
    out.p_w_watts = pr_rain * out.p_rain_watts + (1.0 - pr_rain) * out.p_norain_watts;
    out.savings = (out.p_wo_watts - out.p_w_watts) / out.p_wo_watts;
    return out;
}

double dbm_to_watts(double dbm) {
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
    return 10.0 * std::log10(watts) + 30.0;
}

std::complex<double> water_permittivity(double freq_ghz, double temp_c) {
    if (!(freq_ghz > 0.1) || freq_ghz > 100.0) {
        throw std::invalid_argument("water_permittivity: frequency " + std::to_string(freq_ghz) +
                                    " GHz outside (0.1, 100]");
    }
    if (temp_c < 0.0 || temp_c > 60.0) {
        throw std::invalid_argument("water_permittivity: temperature " + std::to_string(temp_c) +
                                    " C outside [0, 60]");
    }
    // Kaatze (1989): static permittivity, high-frequency permittivity and
    // relaxation time of water as functions of temperature.
    const double eps_static = std::pow(10.0, 1.94404 - 1.991e-3 * temp_c);
    const double eps_inf = 5.77 - 2.74e-2 * temp_c;
    const double t_kelvin = temp_c + 273.15;
    const double tau_s = 3.745e-15 * (1.0 + 7.0e-5 * (temp_c - 27.5) * (temp_c - 27.5)) *
                         std::exp(2295.7 / t_kelvin);

    const double omega_tau = 2.0 * 3.14159265358979323846 * freq_ghz * 1e9 * tau_s;
    // e^{+j omega t} convention: eps = eps' - j eps''.
    return eps_inf + (eps_static - eps_inf) / std::complex<double>(1.0, omega_tau);
}

double water_attenuation_length_m(double freq_ghz, double temp_c) {
    const std::complex<double> eps = water_permittivity(freq_ghz, temp_c);
    const std::complex<double> n = std::sqrt(eps); // n - j kappa
    const double kappa = -n.imag();
    const double alpha = 2.0 * 3.14159265358979323846 * freq_ghz * 1e9 / kSpeedOfLight * kappa;
    return 1.0 / alpha;
}

} // namespace rainsense
