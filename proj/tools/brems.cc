//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tools/brems.cc
//! \brief Command-line driver for the bremsstrahlung calculators.
//---------------------------------------------------------------------------//
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "brems/cli/Commands.hh"

namespace
{
//---------------------------------------------------------------------------//
struct FlagSpec
{
    char const* flag;
    char const* key;
    char const* help;
};

// Flags mirror the config-file keys; their text goes through the same parser
constexpr FlagSpec flag_specs[] = {
    {"--Z", "Z", "nuclear charge Z (> 0)"},
    {"--e2", "e2", "squared charge e^2 (fine-structure constant by default)"},
    {"--mass", "mass", "particle mass m"},
    {"--prefactor", "prefactor", "Coulomb prefactor of Z e^2/r (default 0.5)"},
    {"--v", "v", "incoming speed v = p/m, in (0, 1)"},
    {"--route", "route", "perturbative | effective-action | classical | all"},
    {"--omega-min", "omega_min", "soft photon cutoff / spectrum floor"},
    {"--omega-points", "omega_points", "number of spectrum grid points"},
    {"--screening-mu", "screening_mu", "Yukawa screening mass (0 = bare)"},
    {"--tol", "tol", "relative quadrature tolerance"},
    {"--ode-tol", "ode_tol", "orbit integrator tolerance"},
    {"--impact-parameter", "impact_parameter", "classical impact parameter b"},
    {"--sim-time", "sim_time", "classical window length (0 = automatic)"},
    {"--out", "out", "output path (default: standard output)"},
    {"--format", "format", "csv | json"},
};

using Runner = int (*)(brems::cli::RunConfig const&, std::ostream&, std::ostream&);

void add_run_flags(CLI::App& cmd,
                   std::map<std::string, std::string>& raw,
                   std::string& config_path)
{
    cmd.add_option("--config", config_path, "key=value configuration file");
    for (auto const& spec : flag_specs)
        cmd.add_option(spec.flag, raw[spec.key], spec.help);
}

//---------------------------------------------------------------------------//
}  // namespace

int main(int argc, char* argv[])
{
    using namespace brems::cli;

    CLI::App app{"Nonrelativistic Coulomb bremsstrahlung: spectra, total "
                 "power and cross-route checks"};
    app.require_subcommand(1);

    struct Sub
    {
        char const* name;
        char const* help;
        Runner run;
    };
    Sub const subs[] = {
        {"spectrum", "spectral density dP/domega per route", run_spectrum},
        {"total-power", "total radiated power per route", run_total_power},
        {"compare", "all quantum routes plus a spectral overlay file",
         run_compare},
        {"born-check",
         "screened Fourier-integral oracle versus the closed form",
         [](RunConfig const& c, std::ostream& o, std::ostream& d) {
             return run_born_check(c, o, d);
         }},
        {"orbit", "integrate and export one classical orbit", run_orbit},
    };

    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, std::string> config_paths;
    std::map<std::string, CLI::App*> commands;
    for (auto const& s : subs)
    {
        auto* cmd = app.add_subcommand(s.name, s.help);
        add_run_flags(*cmd, raw[s.name], config_paths[s.name]);
        commands[s.name] = cmd;
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? exit_success : exit_invalid_input;
    }

    for (auto const& s : subs)
    {
        auto* cmd = commands[s.name];
        if (!cmd->parsed())
            continue;
        RunConfig cfg;
        try
        {
            if (!config_paths[s.name].empty())
                apply_config_file(cfg, config_paths[s.name]);
            for (auto const& spec : flag_specs)
            {
                if (cmd->count(spec.flag) > 0)
                    apply_setting(cfg, spec.key, raw[s.name][spec.key]);
            }
        }
        catch (brems::Error const& e)
        {
            std::cerr << "error: " << e.what() << '\n';
            return exit_invalid_input;
        }
        return s.run(cfg, std::cout, std::cerr);
    }
    return exit_invalid_input;
}
