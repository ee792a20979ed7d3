//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/cli/Commands.hh
//! \brief Subcommand implementations behind the brems tool.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../ClassicalRadiation.hh"
#include "../EffectiveAction.hh"
#include "../MatrixElements.hh"
#include "../PerturbativeSpectrum.hh"
#include "RunConfig.hh"

namespace brems::cli
{
//---------------------------------------------------------------------------//
//! Stable process exit codes
enum ExitCode : int
{
    exit_success = 0,
    exit_invalid_input = 2,
    exit_numerical = 3
};

//! A named numeric column or scalar with its error estimate
struct Quantity
{
    std::string name;
    double value;
    double error_estimate;
};

namespace detail
{
//---------------------------------------------------------------------------//
inline nlohmann::ordered_json config_json(RunConfig const& cfg)
{
    return {{"Z", cfg.z},
            {"e2", cfg.e2},
            {"mass", cfg.mass},
            {"prefactor", cfg.prefactor},
            {"v", cfg.v},
            {"route", to_string(cfg.route)},
            {"omega_min", cfg.omega_min},
            {"omega_points", cfg.omega_points},
            {"screening_mu", cfg.screening_mu},
            {"tol", cfg.tol},
            {"ode_tol", cfg.ode_tol},
            {"impact_parameter", cfg.impact_parameter},
            {"sim_time", cfg.sim_time},
            {"out", cfg.out},
            {"format", to_string(cfg.format)}};
}

//! '#'-prefixed key=value lines: the full config, then run metadata
inline void write_csv_header(std::ostream& os,
                             RunConfig const& cfg,
                             std::vector<std::pair<std::string, std::string>> const& meta)
{
    std::string const text = serialize(cfg);
    std::size_t pos = 0;
    while (pos < text.size())
    {
        auto const eol = text.find('\n', pos);
        os << "# " << text.substr(pos, eol - pos) << '\n';
        pos = eol + 1;
    }
    for (auto const& [k, v] : meta)
        os << "# " << k << '=' << v << '\n';
}

//! Write to the named file, or to `fallback` when the path is empty
inline void emit(std::string const& path,
                 std::ostream& fallback,
                 std::function<void(std::ostream&)> const& write)
{
    if (path.empty())
    {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw ParameterError("cannot open output file '" + path + "'");
    write(file);
    if (!file)
        throw ParameterError("failed writing output file '" + path + "'");
}

//! "dir/name.csv" -> "dir/name_trajectory.csv"
inline std::string trajectory_path(std::string const& out)
{
    auto const slash = out.find_last_of('/');
    auto const dot = out.find_last_of('.');
    if (dot == std::string::npos
        || (slash != std::string::npos && dot < slash))
        return out + "_trajectory";
    return out.substr(0, dot) + "_trajectory" + out.substr(dot);
}

inline std::vector<double> spectrum_grid(RunConfig const& cfg)
{
    double const omega_max = max_photon_energy(cfg.mass, cfg.v);
    double const lo = cfg.omega_min > 0 ? cfg.omega_min / omega_max : 1e-4;
    return default_omega_grid(omega_max, cfg.omega_points, lo);
}

inline void require_unscreened(RunConfig const& cfg, char const* route)
{
    if (cfg.screening_mu != 0)
        throw ParameterError(std::string("invalid 'screening_mu': the ")
                             + route
                             + " route supports only the bare Coulomb "
                               "center");
}

//! Report Born-validity breaches on the diagnostics stream
inline void born_warnings(RunConfig const& cfg,
                          std::vector<double> const& grid,
                          std::ostream& diag)
{
    auto const params = cfg.params();
    double const ratio_in = born_validity_ratio(params, cfg.v, cfg.v);
    if (ratio_in >= default_born_threshold)
    {
        diag << "warning: Born parameter Z e^2 / v = " << format_real(ratio_in)
             << " >= " << default_born_threshold
             << "; plane-wave results are unreliable\n";
        return;
    }
    auto const omega_max = max_photon_energy(cfg.mass, cfg.v);
    for (double w : grid)
    {
        double const v_out = cfg.v * std::sqrt(std::max(0.0, 1 - w / omega_max));
        if (v_out == 0
            || born_validity_ratio(params, cfg.v, v_out)
                   >= default_born_threshold)
        {
            diag << "warning: Born parameter Z e^2 / v' >= "
                 << default_born_threshold << " for omega >= "
                 << format_real(w) << " (slow final states)\n";
            return;
        }
    }
}

//! Simulation window and sample count for one classical pass
struct OrbitWindow
{
    double sim_time;
    std::size_t samples;
};

inline OrbitWindow orbit_window(RunConfig const& cfg, double omega_top)
{
    CoulombHyperbola const orbit(cfg.params(), cfg.impact_parameter, cfg.v);
    double const r_p = orbit.periapsis();
    double const sim_time = cfg.sim_time > 0
                                ? cfg.sim_time
                                : 2 * orbit.time_to_radius(1200 * r_p);
    double const dt = std::min(r_p / orbit.periapsis_speed(), 1 / omega_top)
                      / 8;
    double const n = std::ceil(sim_time / dt) + 1;
    constexpr double max_samples = 4194305;
    if (n > max_samples)
        throw SimulationWindowError(
            "simulation window needs more than 2^22 samples to resolve the "
            "collision; reduce sim_time or raise impact_parameter");
    return {sim_time, static_cast<std::size_t>(std::max(n, 1025.0))};
}

inline Trajectory classical_orbit(RunConfig const& cfg, double omega_top)
{
    auto const w = orbit_window(cfg, omega_top);
    return solve_orbit(cfg.params(), cfg.impact_parameter, cfg.v, w.sim_time,
                       cfg.ode_tol, w.samples);
}

inline void write_trajectory(std::ostream& os,
                             RunConfig const& cfg,
                             Trajectory const& traj)
{
    std::vector<std::pair<std::string, std::string>> meta{
        {"sim_time_used", format_real(traj.duration())},
        {"samples", std::to_string(traj.size())},
        {"energy", format_real(traj.energy)},
        {"max_energy_drift", format_real(traj.max_energy_drift)},
        {"max_angular_momentum_drift",
         format_real(traj.max_angular_momentum_drift)}};
    if (cfg.format == Format::json)
    {
        nlohmann::ordered_json j;
        j["config"] = config_json(cfg);
        for (auto const& [k, v] : meta)
            j["metadata"][k] = v;
        auto& cols = j["columns"];
        cols["t"] = traj.times;
        for (int c = 0; c < 3; ++c)
        {
            std::vector<double> x, vel, a;
            for (std::size_t i = 0; i < traj.size(); ++i)
            {
                x.push_back(traj.positions[i][c]);
                vel.push_back(traj.velocities[i][c]);
                a.push_back(traj.accelerations[i][c]);
            }
            std::string const axis(1, "xyz"[c]);
            cols[axis] = x;
            cols["v" + axis] = vel;
            cols["a" + axis] = a;
        }
        os << j.dump(2) << '\n';
        return;
    }
    write_csv_header(os, cfg, meta);
    os << "# columns=t,x,y,z,vx,vy,vz,ax,ay,az\n";
    for (std::size_t i = 0; i < traj.size(); ++i)
    {
        os << format_real(traj.times[i]);
        for (auto const* arr :
             {&traj.positions, &traj.velocities, &traj.accelerations})
        {
            for (int c = 0; c < 3; ++c)
                os << ',' << format_real((*arr)[i][c]);
        }
        os << '\n';
    }
}

//! Columnar table: CSV rows or a JSON object of arrays
inline void write_table(std::ostream& os,
                        RunConfig const& cfg,
                        std::vector<std::pair<std::string, std::string>> const& meta,
                        std::vector<std::string> const& names,
                        std::vector<std::vector<double>> const& cols)
{
    if (cfg.format == Format::json)
    {
        nlohmann::ordered_json j;
        j["config"] = config_json(cfg);
        for (auto const& [k, v] : meta)
            j["metadata"][k] = v;
        for (std::size_t c = 0; c < names.size(); ++c)
            j["columns"][names[c]] = cols[c];
        os << j.dump(2) << '\n';
        return;
    }
    write_csv_header(os, cfg, meta);
    os << "# columns=";
    for (std::size_t c = 0; c < names.size(); ++c)
        os << (c ? "," : "") << names[c];
    os << '\n';
    for (std::size_t i = 0; i < cols.front().size(); ++i)
    {
        for (std::size_t c = 0; c < cols.size(); ++c)
            os << (c ? "," : "") << format_real(cols[c][i]);
        os << '\n';
    }
}

inline void write_report(std::ostream& os,
                         RunConfig const& cfg,
                         std::vector<std::pair<std::string, std::string>> const& meta,
                         std::vector<Quantity> const& rows)
{
    if (cfg.format == Format::json)
    {
        nlohmann::ordered_json j;
        j["config"] = config_json(cfg);
        for (auto const& [k, v] : meta)
            j["metadata"][k] = v;
        for (auto const& q : rows)
            j["results"][q.name] = {{"value", q.value},
                                    {"error_estimate", q.error_estimate}};
        os << j.dump(2) << '\n';
        return;
    }
    write_csv_header(os, cfg, meta);
    os << "# columns=quantity,value,error_estimate\n";
    for (auto const& q : rows)
        os << q.name << ',' << format_real(q.value) << ','
           << format_real(q.error_estimate) << '\n';
}

//! Map library exceptions onto the exit-code contract
inline int guarded(std::ostream& diag, std::function<int()> const& body)
{
    try
    {
        return body();
    }
    catch (AccuracyError const& e)
    {
        diag << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (Error const& e)
    {
        diag << "error: " << e.what() << '\n';
        return e.numerical() ? exit_numerical : exit_invalid_input;
    }
    catch (std::exception const& e)
    {
        diag << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}

//! Total power per quantum route and their largest pairwise deviation
inline std::vector<Quantity> quantum_routes(RunConfig const& cfg)
{
    auto const params = cfg.params();
    Tolerance const tol = cfg.tol;
    std::vector<Quantity> rows;
    auto const eq41 = total_born_power(params, cfg.v, tol,
                                       {cfg.omega_min, cfg.screening_mu});
    rows.push_back({"power_perturbative", eq41.value, eq41.error_estimate});
    auto const source = cfg.screening_mu > 0
                            ? screened_element_source(cfg.screening_mu)
                            : born_element_source();
    auto const fs = power_from_final_state_integral(params, cfg.v, tol, source,
                                                    cfg.omega_min);
    rows.push_back({"power_final_state", fs.value, fs.error_estimate});
    require_unscreened(cfg, "effective-action");
    auto const ea = power_from_effective_action(
        params, cfg.v, tol, SmearingScheme::delta(), {cfg.omega_min, 2});
    rows.push_back({"power_effective_action", ea.value, ea.error_estimate});

    double dev = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        for (std::size_t j = i + 1; j < rows.size(); ++j)
        {
            double const scale
                = std::max(std::abs(rows[i].value), std::abs(rows[j].value));
            if (scale > 0)
                dev = std::max(dev, std::abs(rows[i].value - rows[j].value)
                                        / scale);
        }
    }
    rows.push_back({"max_pairwise_deviation", dev, 0.0});
    return rows;
}

inline std::vector<std::pair<std::string, std::string>>
physics_meta(RunConfig const& cfg)
{
    return {{"omega_max", format_real(max_photon_energy(cfg.mass, cfg.v))},
            {"units", "natural (hbar = c = 1)"}};
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Spectral density dP/domega on a log grid ending at omega_max.
 *
 * The classical route writes P(omega) and the single-pass energy spectrum
 * of one orbit, plus the sampled trajectory next to the spectrum file.
 */
inline int run_spectrum(RunConfig const& cfg, std::ostream& out, std::ostream& diag)
{
    return detail::guarded(diag, [&] {
        validate(cfg);
        auto const params = cfg.params();
        auto const grid = detail::spectrum_grid(cfg);
        auto meta = detail::physics_meta(cfg);

        if (cfg.route == Route::classical)
        {
            if (cfg.out.empty())
                throw ParameterError("invalid 'out': the classical spectrum "
                                     "writes a trajectory file next to it, "
                                     "so an output path is required");
            detail::require_unscreened(cfg, "classical");
            auto const traj = detail::classical_orbit(cfg, grid.back());
            SpectrumOptions opts;
            auto const spec = classical_spectrum(traj, grid, opts);
            if (spec.taper_applied)
                diag << "warning: window edges not quiet; applied "
                     << spec.taper_description << '\n';
            meta.emplace_back("sim_time_used", format_real(traj.duration()));
            meta.emplace_back("taper", spec.taper_description);
            meta.emplace_back("max_energy_drift",
                              format_real(traj.max_energy_drift));
            detail::emit(cfg.out, out, [&](std::ostream& os) {
                detail::write_table(os, cfg, meta,
                                    {"omega", "P_omega", "dW_domega"},
                                    {grid, spec.density, spec.energy_density});
            });
            detail::emit(detail::trajectory_path(cfg.out), out,
                         [&](std::ostream& os) {
                             detail::write_trajectory(os, cfg, traj);
                         });
            return int(exit_success);
        }

        detail::born_warnings(cfg, grid, diag);
        std::vector<std::string> names{"omega"};
        std::vector<std::vector<double>> cols{grid};
        if (cfg.route == Route::perturbative || cfg.route == Route::all)
        {
            names.emplace_back("dP_domega_perturbative");
            cols.push_back(
                born_spectrum(params, cfg.v, grid, cfg.screening_mu).density);
        }
        if (cfg.route == Route::effective_action || cfg.route == Route::all)
        {
            detail::require_unscreened(cfg, "effective-action");
            std::vector<double> col;
            for (double w : grid)
                col.push_back(
                    effective_action_spectral_density(params, cfg.v, w, cfg.tol));
            names.emplace_back("dP_domega_effective_action");
            cols.push_back(std::move(col));
        }
        if (names.size() == 2)
            names[1] = "dP_domega";
        detail::emit(cfg.out, out, [&](std::ostream& os) {
            detail::write_table(os, cfg, meta, names, cols);
        });
        return int(exit_success);
    });
}

//---------------------------------------------------------------------------//
/*!
 * Total radiated power per route.
 *
 * `all` evaluates the closed-form speed integral, the explicit final-state
 * integral and the effective action, and adds their largest pairwise
 * relative deviation. The classical route reports the energy radiated in
 * one pass at the configured impact parameter and its window average.
 */
inline int
run_total_power(RunConfig const& cfg, std::ostream& out, std::ostream& diag)
{
    return detail::guarded(diag, [&] {
        validate(cfg);
        auto const params = cfg.params();
        std::vector<Quantity> rows;
        auto meta = detail::physics_meta(cfg);
        switch (cfg.route)
        {
            case Route::perturbative: {
                auto const r = total_born_power(
                    params, cfg.v, cfg.tol, {cfg.omega_min, cfg.screening_mu});
                rows.push_back({"power_perturbative", r.value, r.error_estimate});
                break;
            }
            case Route::effective_action: {
                detail::require_unscreened(cfg, "effective-action");
                auto const r = power_from_effective_action(
                    params, cfg.v, cfg.tol, SmearingScheme::delta(),
                    {cfg.omega_min, 2});
                rows.push_back(
                    {"power_effective_action", r.value, r.error_estimate});
                break;
            }
            case Route::all:
                rows = detail::quantum_routes(cfg);
                break;
            case Route::classical: {
                detail::require_unscreened(cfg, "classical");
                auto const traj = detail::classical_orbit(
                    cfg, max_photon_energy(cfg.mass, cfg.v));
                double const mean = time_averaged_power(traj);
                rows.push_back(
                    {"classical_radiated_energy", mean * traj.duration(), 0.0});
                rows.push_back({"classical_mean_power", mean, 0.0});
                meta.emplace_back("sim_time_used", format_real(traj.duration()));
                meta.emplace_back("max_energy_drift",
                                  format_real(traj.max_energy_drift));
                break;
            }
        }
        if (cfg.route != Route::classical)
            detail::born_warnings(cfg, {}, diag);
        detail::emit(cfg.out, out, [&](std::ostream& os) {
            detail::write_report(os, cfg, meta, rows);
        });
        return int(exit_success);
    });
}

//---------------------------------------------------------------------------//
/*!
 * All quantum routes (report to `out`) plus a spectral overlay file.
 *
 * The overlay holds both spectral densities and their ratio on the
 * configured grid; it goes to `cfg.out`, or overlay.csv (.json) if unset.
 */
inline int run_compare(RunConfig const& cfg_in, std::ostream& out, std::ostream& diag)
{
    return detail::guarded(diag, [&] {
        RunConfig cfg = cfg_in;
        cfg.route = Route::all;
        validate(cfg);
        detail::require_unscreened(cfg, "effective-action");
        auto const rows = detail::quantum_routes(cfg);
        auto const grid = detail::spectrum_grid(cfg);
        detail::born_warnings(cfg, grid, diag);

        auto const params = cfg.params();
        auto const pert = born_spectrum(params, cfg.v, grid).density;
        std::vector<double> ea, ratio;
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            ea.push_back(
                effective_action_spectral_density(params, cfg.v, grid[i], cfg.tol));
            ratio.push_back(pert[i] > 0 ? ea.back() / pert[i] : 1.0);
        }
        std::string const path
            = !cfg.out.empty() ? cfg.out
                               : (cfg.format == Format::json ? "overlay.json"
                                                             : "overlay.csv");
        auto meta = detail::physics_meta(cfg);
        detail::emit(path, out, [&](std::ostream& os) {
            detail::write_table(os, cfg, meta,
                                {"omega", "dP_domega_perturbative",
                                 "dP_domega_effective_action", "ratio"},
                                {grid, pert, ea, ratio});
        });
        meta.emplace_back("overlay", path);
        detail::write_report(out, cfg, meta, rows);
        return int(exit_success);
    });
}

//---------------------------------------------------------------------------//
//! Built-in (|q|, mu) pairs for the screened-element oracle check
inline std::vector<std::pair<double, double>> born_check_grid()
{
    std::vector<std::pair<double, double>> grid;
    for (double q : {0.01, 0.1, 1.0, 10.0, 100.0})
    {
        for (double mu : {0.0, 0.01, 0.1, 1.0, 10.0})
            grid.emplace_back(q, mu);
    }
    grid.emplace_back(0.0, 1.0);
    return grid;
}

/*!
 * Compare the numerical Fourier integral of the screened potential with
 * its closed form over a (q, mu) grid.
 *
 * The oracle runs at `cfg.tol`; the exit status is success only if every
 * pair converges and agrees within that tolerance. Zero transfer compares
 * absolute values since both sides vanish.
 */
inline int run_born_check(RunConfig const& cfg,
                          std::ostream& out,
                          std::ostream& diag,
                          std::vector<std::pair<double, double>> const& grid
                          = born_check_grid())
{
    return detail::guarded(diag, [&] {
        validate(cfg);
        Real3 const dir{{1 / std::sqrt(3.0), -1 / std::sqrt(3.0),
                         1 / std::sqrt(3.0)}};
        Real3 const p_in{};
        std::vector<double> qs, mus, errors, converged;
        double worst = 0;
        bool all_converged = true;
        for (auto [q, mu] : grid)
        {
            Real3 const p_out = dir * q;
            auto const exact = screened_gradient_element(p_in, p_out, mu);
            double err = 0;
            bool ok = true;
            try
            {
                auto const num = screened_gradient_element_oracle(
                    p_in, p_out, mu, cfg.tol);
                double const scale = norm(exact);
                err = norm(num - exact) / (scale > 0 ? scale : 1.0);
            }
            catch (AccuracyError const& e)
            {
                ok = false;
                err = e.achieved();
                diag << "warning: oracle did not converge at q="
                     << format_real(q) << " mu=" << format_real(mu)
                     << " (achieved " << format_real(err) << ")\n";
            }
            all_converged = all_converged && ok;
            worst = std::max(worst, err);
            qs.push_back(q);
            mus.push_back(mu);
            errors.push_back(err);
            converged.push_back(ok ? 1 : 0);
        }
        bool const pass = all_converged && worst <= cfg.tol;
        std::vector<std::pair<std::string, std::string>> meta{
            {"max_relative_error", format_real(worst)},
            {"tolerance", format_real(cfg.tol)},
            {"status", pass ? "pass" : "fail"}};
        detail::emit(cfg.out, out, [&](std::ostream& os) {
            detail::write_table(os, cfg, meta,
                                {"q", "mu", "relative_error", "converged"},
                                {qs, mus, errors, converged});
        });
        diag << "born-check: max relative error " << format_real(worst)
             << (pass ? " <= " : " > ") << "tolerance " << format_real(cfg.tol)
             << '\n';
        return int(pass ? exit_success : exit_numerical);
    });
}

//---------------------------------------------------------------------------//
//! Integrate one classical orbit and export it
inline int run_orbit(RunConfig const& cfg, std::ostream& out, std::ostream& diag)
{
    return detail::guarded(diag, [&] {
        validate(cfg);
        auto const traj
            = detail::classical_orbit(cfg, max_photon_energy(cfg.mass, cfg.v));
        diag << "orbit: " << traj.size() << " samples, energy drift "
             << format_real(traj.max_energy_drift)
             << ", angular momentum drift "
             << format_real(traj.max_angular_momentum_drift) << '\n';
        detail::emit(cfg.out, out, [&](std::ostream& os) {
            detail::write_trajectory(os, cfg, traj);
        });
        return int(exit_success);
    });
}

//---------------------------------------------------------------------------//
}  // namespace brems::cli
