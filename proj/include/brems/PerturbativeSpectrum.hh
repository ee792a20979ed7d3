//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/PerturbativeSpectrum.hh
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "Error.hh"
#include "Kinematics.hh"
#include "MatrixElements.hh"
#include "Quadrature.hh"

namespace brems
{
//---------------------------------------------------------------------------//
//! Integrated radiated power (energy-weighted cross section)
struct PowerResult
{
    double value;
    double error_estimate;
};

//! Regulators for the energy-integrated Born power
struct BornPowerOptions
{
    //! Lower photon-energy cutoff
    double omega_min = 0;
    //! Yukawa screening mass of the Coulomb center
    double screening_mu = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Born dP/domega sampled on a photon-energy grid.
 */
struct SpectralDensity
{
    std::vector<double> omega_grid;
    std::vector<double> density;
    double omega_max;
    PhysicalParams params;
    double v;
};

//! Value of a fully differential cross section plus the Born-validity flag
struct CrossSectionValue
{
    double value;
    double validity_ratio;
    bool born_warning;
};

namespace detail
{
//---------------------------------------------------------------------------//
/*!
 * Polar-angle integral of the (screened) squared Born element, in units of
 * 1/(2 m^2 v v'):
 * \f[
   L_\mu = \frac{1}{2}\Big[\ln\frac{u_+}{u_-}
            + \mu^2\Big(\frac{1}{u_+} - \frac{1}{u_-}\Big)\Big],
   \quad u_\pm = m^2 (v \pm v')^2 + \mu^2 ,
 * \f]
 * which reduces to log((v + v')/(v - v')) without screening. Arguments are
 * the dimensionless x = v'/v, its complement 1 - x, and mu_red = mu / (m v).
 */
inline double screened_log(double x, double one_minus_x, double mu_red)
{
    if (mu_red == 0)
        return std::log1p(2 * x / one_minus_x);
    double const mu2 = mu_red * mu_red;
    double const lo = one_minus_x * one_minus_x + mu2;
    double const hi = (1 + x) * (1 + x) + mu2;
    double const diff = 4 * x;
    return 0.5 * (std::log1p(diff / lo) - mu2 * diff / (lo * hi));
}

inline double screened_log(double x, double mu_red)
{
    return screened_log(x, 1 - x, mu_red);
}

//! (16/3) (kappa Z e^2)^2 e^2, the common coupling factor of the power
inline double power_coupling(PhysicalParams const& params)
{
    double const fs = params.force_strength();
    return 16.0 / 3.0 * fs * fs * params.e_squared();
}

inline void require_speed(double v)
{
    if (!(v > 0) || !std::isfinite(v))
        throw ParameterError(
            "incoming speed v must be > 0 (flux v = p/m must be nonzero)");
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Fully differential emission density with respect to d^3p' d^3k.
 *
 * \f[
   \frac{4\pi^2 e^2}{v m^2}\,
   \frac{P_{ij}(\hat k)\, \hat p_i \hat p_j^*}{(2\pi)^6\, k}
 * \f]
 * using the Born momentum element. Energy conservation is left to the
 * caller's change of variables.
 */
inline CrossSectionValue
differential_cross_section(PhysicalParams const& params,
                           ScatterKinematics const& kin,
                           PhotonMode const& mode,
                           double born_threshold = default_born_threshold)
{
    double const omega = photon_energy(kin);
    if (!(omega > 0))
        throw KinematicError("emission requires E_p > E_p' (photon energy "
                             "must be positive)");
    if (!(mode.omega() > 0))
        throw KinematicError("photon energy k must be positive");

    double const v = norm(kin.v_in());
    double const v_out = norm(kin.v_out());
    auto const p_hat = born_momentum_element(params, kin);
    auto const proj = polarization_projector(mode.k_vec());

    double const m = kin.mass();
    double const two_pi_6 = std::pow(2 * pi, 6);
    double const value = 4 * pi * pi * params.e_squared() / (v * m * m)
                         * proj.bilinear(p_hat) / (two_pi_6 * mode.omega());

    double const ratio
        = v_out > 0 ? born_validity_ratio(params, v, v_out)
                    : std::numeric_limits<double>::infinity();
    return {value, ratio, ratio >= born_threshold};
}

//---------------------------------------------------------------------------//
/*!
 * Born spectral density dP/domega with optional Yukawa screening.
 *
 * \f[
   \frac{dP}{d\omega} = \frac{16 \kappa^2}{3}
      \frac{Z^2 e^6}{m^2 v^2} \log\frac{v + v'}{v - v'},
   \quad v' = \sqrt{v^2 - 2\omega/m},
 * \f]
 * which for kappa = 1/2 is (4/3) Z^2 e^6/(m^2 v^2) log(...). The density
 * vanishes at the kinematic edge omega = m v^2/2.
 */
inline double screened_spectral_density(PhysicalParams const& params,
                                        double v,
                                        double omega,
                                        double mu)
{
    detail::require_speed(v);
    double const m = params.mass();
    double const omega_max = max_photon_energy(m, v);
    if (!(omega > 0) || !(omega <= omega_max))
        throw KinematicError("photon energy must lie in (0, m v^2/2]");
    if (!(mu >= 0))
        throw ParameterError("screening mass must be >= 0");
    // 1 - x = (omega/omega_max) / (1 + x) stays accurate for soft photons
    double const ratio = omega / omega_max;
    double const x = std::sqrt(std::max(0.0, 1 - ratio));
    return detail::power_coupling(params) / (m * m * v * v)
           * detail::screened_log(x, ratio / (1 + x), mu / (m * v));
}

inline double
born_spectral_density(PhysicalParams const& params, double v, double omega)
{
    return screened_spectral_density(params, v, omega, 0.0);
}

//---------------------------------------------------------------------------//
//! Log-spaced photon energies from lo_fraction * omega_max to omega_max
inline std::vector<double>
default_omega_grid(double omega_max, int points = 256, double lo_fraction = 1e-4)
{
    if (points < 2)
        throw ParameterError("spectrum grid needs at least two points");
    if (!(lo_fraction > 0 && lo_fraction < 1))
        throw ParameterError("grid lower fraction must lie in (0, 1)");
    std::vector<double> grid(points);
    double const step = -std::log(lo_fraction) / (points - 1);
    for (int i = 0; i < points; ++i)
        grid[i] = omega_max * lo_fraction * std::exp(step * i);
    grid.back() = omega_max;
    return grid;
}

inline SpectralDensity born_spectrum(PhysicalParams const& params,
                                     double v,
                                     std::vector<double> const& omega_grid,
                                     double mu = 0)
{
    detail::require_speed(v);
    SpectralDensity out{omega_grid, {}, max_photon_energy(params.mass(), v),
                        params, v};
    out.density.reserve(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i)
    {
        if (i > 0 && !(omega_grid[i] > omega_grid[i - 1]))
            throw ParameterError("spectrum grid must be strictly increasing");
        out.density.push_back(
            screened_spectral_density(params, v, omega_grid[i], mu));
    }
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Total Born power over the allowed final speeds 0 <= v' <= v.
 *
 * \f[
   P = \frac{16\kappa^2}{3}\frac{Z^2 e^6}{m v^2}
       \int_0^{v} dv'\, v' \log\frac{v + v'}{v - v'}
     = \frac{16\kappa^2}{3}\frac{Z^2 e^6}{m}
       \int_0^1 x \log\frac{1 + x}{1 - x}\, dx .
 * \f]
 * The integrable logarithm at x = 1 is handled by the endpoint transform.
 * A soft cutoff omega_min lowers the upper limit; screening replaces the
 * logarithm by its Yukawa form.
 */
inline PowerResult total_born_power(PhysicalParams const& params,
                                    double v,
                                    Tolerance tol,
                                    BornPowerOptions opts = {})
{
    detail::require_speed(v);
    double const m = params.mass();
    double const omega_max = max_photon_energy(m, v);
    if (!(opts.omega_min >= 0) || !(opts.omega_min < omega_max))
        throw KinematicError("soft cutoff must lie in [0, m v^2/2)");
    if (!(opts.screening_mu >= 0))
        throw ParameterError("screening mass must be >= 0");

    double const coupling = detail::power_coupling(params) / m;
    if (coupling == 0)
        return {0.0, 0.0};

    double const mu_red = opts.screening_mu / (m * v);
    double const x_max = std::sqrt(1 - opts.omega_min / omega_max);
    bool const singular = mu_red == 0 && opts.omega_min == 0;
    auto r = integrate_1d(
        [mu_red](double x) { return x * detail::screened_log(x, mu_red); },
        0.0,
        x_max,
        Tolerance::relative(tol.rel),
        singular ? EndpointHint::log_at_b : EndpointHint::none);
    if (!r.converged)
        throw AccuracyError("Born power integral did not converge",
                            r.error_estimate);
    return {coupling * r.value, coupling * r.error_estimate};
}

//---------------------------------------------------------------------------//
/*!
 * Squared gradient element |<p'|grad V|p>|^2 as a function of (p, p').
 *
 * Sources must depend on the momentum transfer p' - p only; the
 * final-state integral calls them with p = 0.
 */
using ElementSource = std::function<double(Real3 const&, Real3 const&)>;

inline ElementSource born_element_source()
{
    return [](Real3 const& p, Real3 const& p_out) {
        return norm_sq(born_gradient_element(p, p_out));
    };
}

inline ElementSource screened_element_source(double mu)
{
    return [mu](Real3 const& p, Real3 const& p_out) {
        return norm_sq(screened_gradient_element(p, p_out, mu));
    };
}

//! Element from the numerical Fourier integral (slow; for validation)
inline ElementSource screened_oracle_source(double mu, Tolerance tol)
{
    return [mu, tol](Real3 const& p, Real3 const& p_out) {
        return norm_sq(screened_gradient_element_oracle(p, p_out, mu, tol));
    };
}

//---------------------------------------------------------------------------//
/*!
 * Radiated power as an explicit integral over outgoing momenta,
 * \f[
   P = \frac{4e^2}{3}\Big(\frac{\kappa Z e^2}{m}\Big)^2
       \int_{|p'| \le m v} \frac{d^3p'}{(2\pi)^3 v}\,
       |\langle p' | \nabla V | p \rangle|^2 .
 * \f]
 * The incoming momentum is placed on the z axis; the azimuth is integrated
 * trivially and the polar and radial integrals numerically. The element
 * source must be symmetric about the incoming direction. A soft cutoff
 * omega_min removes final states with |p'| > m sqrt(v^2 - 2 omega_min/m).
 */
inline PowerResult power_from_final_state_integral(PhysicalParams const& params,
                                                   double v,
                                                   Tolerance tol,
                                                   ElementSource const& source,
                                                   double omega_min = 0)
{
    detail::require_speed(v);
    double const m = params.mass();
    double const pmag = m * v;
    double const omega_max = max_photon_energy(m, v);
    if (!(omega_min >= 0) || !(omega_min < omega_max))
        throw KinematicError("soft cutoff must lie in [0, m v^2/2)");

    // Integrand in units of 16 pi^2 / (m v)^2, which makes the Born value
    // of the double integral exactly 1
    double const unit = 16 * pi * pi / (pmag * pmag);
    Tolerance const inner_tol = Tolerance::relative(tol.rel * 1e-2);
    bool inner_ok = true;

    // Inner variable s = ln(q^2 / (m v)^2) flattens the forward peak. The
    // sources depend on the transfer only, so q is built directly to keep
    // its small components accurate.
    Real3 const origin{};
    auto radial = [&](double x) {
        double const s_lo = 2 * std::log1p(-x);
        double const s_hi = 2 * std::log1p(x);
        auto polar = [&](double s) {
            double const q2 = std::exp(s);
            Real3 const q = shell_transfer(x, q2) * pmag;
            return source(origin, q) / unit * q2 / (2 * x);
        };
        auto r = integrate_1d(polar, s_lo, s_hi, inner_tol);
        inner_ok = inner_ok && r.converged;
        return x * x * r.value;
    };
    double const x_max = std::sqrt(1 - omega_min / omega_max);
    auto r = integrate_1d(radial, 0.0, x_max,
                          Tolerance(tol.rel, tol.rel * 1e-3),
                          omega_min == 0 ? EndpointHint::log_at_b
                                         : EndpointHint::none);
    if (!r.converged || !inner_ok)
        throw AccuracyError("final-state momentum integral did not converge",
                            r.error_estimate);

    // (4e^2/3) (fs/m)^2 * 2 pi / ((2 pi)^3 v) * (m v)^3 * unit
    double const fs = params.force_strength();
    double const scale = 4 * params.e_squared() / 3 * (fs / m) * (fs / m)
                         / (4 * pi * pi * v) * pmag * pmag * pmag * unit;
    return {scale * r.value, scale * r.error_estimate};
}

//---------------------------------------------------------------------------//
}  // namespace brems
