//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file demos/cross_route_demo.cc
//! \brief Total radiated power from each route for a slow proton-like probe.
//---------------------------------------------------------------------------//
#include <cstdio>

#include "brems/ClassicalRadiation.hh"
#include "brems/EffectiveAction.hh"
#include "brems/PerturbativeSpectrum.hh"

int main()
{
    using namespace brems;

    PhysicalParams const params(/* z = */ 2, /* e2 = */ 0.05, /* m = */ 1);
    double const v = 0.2;
    Tolerance const tol = 1e-9;

    auto const born = total_born_power(params, v, tol);
    auto const fsi
        = power_from_final_state_integral(params, v, tol, born_element_source());
    auto const eff = power_from_effective_action(params, v, tol);
    std::printf("closed-form speed integral : %.12e\n", born.value);
    std::printf("final-state momentum sum   : %.12e\n", fsi.value);
    std::printf("effective action (delta)   : %.12e\n", eff.value);

    // Lorentzian smearing approaches the delta result linearly in the width
    double const omega_max = max_photon_energy(params.mass(), v);
    EmissionWindow const window{1e-2 * omega_max, 2};
    auto const cut = power_from_effective_action(
        params, v, tol, SmearingScheme::delta(), window);
    for (double eps : {1e-1, 1e-2, 1e-3})
    {
        auto const r = power_from_effective_action(
            params, v, tol, SmearingScheme::lorentzian(eps * omega_max), window);
        std::printf("lorentzian eps = %.0e w_max: relative offset %.3e\n", eps,
                    r.value / cut.value - 1);
    }

    // One classical pass at b = 20
    CoulombHyperbola const orbit(params, 20, v);
    double const window_time = 2 * orbit.time_to_radius(1200 * orbit.periapsis());
    auto const traj = solve_orbit(params, 20, v, window_time, 1e-10, 16385);
    std::printf("classical pass: radiated energy %.6e, energy drift %.1e\n",
                time_averaged_power(traj) * traj.duration(),
                traj.max_energy_drift);
    return 0;
}
