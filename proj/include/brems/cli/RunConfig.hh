//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/cli/RunConfig.hh
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "../Error.hh"
#include "../Kinematics.hh"

namespace brems::cli
{
//---------------------------------------------------------------------------//
enum class Route
{
    perturbative,
    effective_action,
    classical,
    all
};

enum class Format
{
    csv,
    json
};

inline char const* to_string(Route r)
{
    switch (r)
    {
        case Route::perturbative:
            return "perturbative";
        case Route::effective_action:
            return "effective-action";
        case Route::classical:
            return "classical";
        case Route::all:
            return "all";
    }
    return "?";
}

inline char const* to_string(Format f)
{
    return f == Format::csv ? "csv" : "json";
}

//---------------------------------------------------------------------------//
/*!
 * Everything needed to reproduce a run.
 *
 * Values are natural units (hbar = c = 1). A zero `omega_min` selects the
 * default spectrum floor of 1e-4 omega_max; a zero `sim_time` sizes the
 * classical window automatically. An empty `out` writes to standard output.
 */
struct RunConfig
{
    double z{1};
    double e2{0.0072973525693};
    double mass{1};
    double prefactor{0.5};
    double v{0.1};
    Route route{Route::perturbative};
    double omega_min{0};
    int omega_points{256};
    double screening_mu{0};
    double tol{1e-8};
    double ode_tol{1e-10};
    double impact_parameter{10};
    double sim_time{0};
    std::string out;
    Format format{Format::csv};

    PhysicalParams params() const
    {
        return PhysicalParams(z, e2, mass, prefactor);
    }

    bool operator==(RunConfig const&) const = default;
};

//! Keys accepted in config files and as long flags (with '-' for '_')
inline constexpr std::array<std::string_view, 15> config_keys = {
    "Z",       "e2",         "mass",         "prefactor",    "v",
    "route",   "omega_min",  "omega_points", "screening_mu", "tol",
    "ode_tol", "impact_parameter", "sim_time", "out",        "format"};

namespace detail
{
[[noreturn]] inline void bad_field(std::string_view key, std::string_view msg)
{
    throw ParameterError("invalid '" + std::string(key) + "': "
                         + std::string(msg));
}

inline double parse_real(std::string_view key, std::string_view text)
{
    double value = 0;
    auto const* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        bad_field(key, "'" + std::string(text) + "' is not a number");
    return value;
}

inline int parse_int(std::string_view key, std::string_view text)
{
    int value = 0;
    auto const* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        bad_field(key, "'" + std::string(text) + "' is not an integer");
    return value;
}

inline std::string_view trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}
}  // namespace detail

//! Shortest decimal text that reads back as the same double
inline std::string format_real(double x)
{
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

//---------------------------------------------------------------------------//
/*!
 * Assign one field from its text form.
 *
 * Dashes in the key are accepted in place of underscores, so flag names and
 * file keys share this path. Only the syntax is checked here; see
 * `validate` for physical ranges.
 */
inline void apply_setting(RunConfig& cfg, std::string key, std::string_view value)
{
    for (auto& c : key)
        c = (c == '-') ? '_' : c;
    value = detail::trim(value);
    using detail::parse_int;
    using detail::parse_real;
    if (key == "Z" || key == "z")
        cfg.z = parse_real("Z", value);
    else if (key == "e2")
        cfg.e2 = parse_real(key, value);
    else if (key == "mass")
        cfg.mass = parse_real(key, value);
    else if (key == "prefactor")
        cfg.prefactor = parse_real(key, value);
    else if (key == "v")
        cfg.v = parse_real(key, value);
    else if (key == "omega_min")
        cfg.omega_min = parse_real(key, value);
    else if (key == "omega_points")
        cfg.omega_points = parse_int(key, value);
    else if (key == "screening_mu")
        cfg.screening_mu = parse_real(key, value);
    else if (key == "tol")
        cfg.tol = parse_real(key, value);
    else if (key == "ode_tol")
        cfg.ode_tol = parse_real(key, value);
    else if (key == "impact_parameter")
        cfg.impact_parameter = parse_real(key, value);
    else if (key == "sim_time")
        cfg.sim_time = parse_real(key, value);
    else if (key == "out")
        cfg.out = std::string(value);
    else if (key == "route")
    {
        if (value == "perturbative")
            cfg.route = Route::perturbative;
        else if (value == "effective-action" || value == "effective_action")
            cfg.route = Route::effective_action;
        else if (value == "classical")
            cfg.route = Route::classical;
        else if (value == "all")
            cfg.route = Route::all;
        else
            detail::bad_field(key, "expected perturbative, effective-action, "
                                   "classical or all");
    }
    else if (key == "format")
    {
        if (value == "csv")
            cfg.format = Format::csv;
        else if (value == "json")
            cfg.format = Format::json;
        else
            detail::bad_field(key, "expected csv or json");
    }
    else
    {
        throw ParameterError("unknown configuration key '" + key + "'");
    }
}

//! Reject physically meaningless values, naming the offending field
inline void validate(RunConfig const& cfg)
{
    using detail::bad_field;
    if (!(cfg.z > 0))
        bad_field("Z", "nuclear charge must be > 0");
    if (!(cfg.e2 >= 0))
        bad_field("e2", "squared charge must be >= 0");
    if (!(cfg.mass > 0))
        bad_field("mass", "particle mass must be > 0");
    if (!(cfg.prefactor > 0))
        bad_field("prefactor", "Coulomb prefactor must be > 0");
    if (!(cfg.v > 0))
        bad_field("v", "incoming speed must be > 0; the flux v = p/m "
                       "normalizing every rate vanishes otherwise");
    if (!(cfg.v < 1))
        bad_field("v", "incoming speed must be < 1 (nonrelativistic model)");
    double const omega_max = max_photon_energy(cfg.mass, cfg.v);
    if (!(cfg.omega_min >= 0) || !(cfg.omega_min < omega_max))
        bad_field("omega_min", "must lie in [0, m v^2/2)");
    if (cfg.omega_points < 2)
        bad_field("omega_points", "spectrum grid needs >= 2 points");
    if (!(cfg.screening_mu >= 0))
        bad_field("screening_mu", "screening mass must be >= 0");
    if (!(cfg.tol > 0) || !(cfg.tol < 1))
        bad_field("tol", "quadrature tolerance must lie in (0, 1)");
    if (!(cfg.ode_tol > 0) || !(cfg.ode_tol < 1))
        bad_field("ode_tol", "ODE tolerance must lie in (0, 1)");
    if (!(cfg.impact_parameter > 0))
        bad_field("impact_parameter", "impact parameter must be > 0");
    if (!(cfg.sim_time >= 0))
        bad_field("sim_time", "simulation time must be >= 0 (0 = automatic)");
    if (cfg.out.find_first_of("#\n") != std::string::npos)
        bad_field("out", "path must not contain '#' or a newline");
}

//---------------------------------------------------------------------------//
//! Read key=value lines; '#' starts a comment
inline void apply_config_text(RunConfig& cfg, std::string_view text)
{
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size())
    {
        auto const eol = std::min(text.find('\n', pos), text.size());
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto const hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        auto const eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParameterError("config line " + std::to_string(line_no)
                                 + ": expected key=value");
        apply_setting(cfg,
                      std::string(detail::trim(line.substr(0, eq))),
                      line.substr(eq + 1));
    }
}

inline RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    apply_config_text(cfg, text);
    validate(cfg);
    return cfg;
}

inline void apply_config_file(RunConfig& cfg, std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

//! All fields as key=value lines, in `config_keys` order
inline std::string serialize(RunConfig const& cfg)
{
    std::ostringstream os;
    os << "Z=" << format_real(cfg.z) << '\n'
       << "e2=" << format_real(cfg.e2) << '\n'
       << "mass=" << format_real(cfg.mass) << '\n'
       << "prefactor=" << format_real(cfg.prefactor) << '\n'
       << "v=" << format_real(cfg.v) << '\n'
       << "route=" << to_string(cfg.route) << '\n'
       << "omega_min=" << format_real(cfg.omega_min) << '\n'
       << "omega_points=" << cfg.omega_points << '\n'
       << "screening_mu=" << format_real(cfg.screening_mu) << '\n'
       << "tol=" << format_real(cfg.tol) << '\n'
       << "ode_tol=" << format_real(cfg.ode_tol) << '\n'
       << "impact_parameter=" << format_real(cfg.impact_parameter) << '\n'
       << "sim_time=" << format_real(cfg.sim_time) << '\n'
       << "out=" << cfg.out << '\n'
       << "format=" << to_string(cfg.format) << '\n';
    return os.str();
}

//---------------------------------------------------------------------------//
}  // namespace brems::cli
