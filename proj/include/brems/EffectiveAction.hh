//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/EffectiveAction.hh
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "Error.hh"
#include "Kinematics.hh"
#include "MatrixElements.hh"
#include "PerturbativeSpectrum.hh"
#include "Quadrature.hh"

namespace brems
{
//---------------------------------------------------------------------------//
/*!
 * Exact double time integral of the time-ordered phase,
 * \f[
   K(\lambda, T) = \int_0^T\!dt_2 \int_0^T\!dt_1\, e^{i\lambda|t_2 - t_1|}
     = \frac{2iT}{\lambda} + \frac{2(1 - e^{i\lambda T})}{\lambda^2},
 * \f]
 * with K(0, T) = T^2. The real part is 4 sin^2(lambda T/2)/lambda^2 >= 0 and
 * the leading term 2iT/lambda dominates once lambda T >> 1.
 */
inline std::complex<double> finite_time_kernel(double lambda, double duration)
{
    if (!(duration > 0))
        throw ParameterError("interaction time T must be > 0");
    double const t2 = duration * duration;
    double const x = lambda * duration;
    if (x == 0)
        return {t2, 0.0};

    double const half = 0.5 * x;
    double const sinc = std::abs(half) < 1e-4
                            ? 1 - half * half / 6
                            : std::sin(half) / half;
    double const re = t2 * sinc * sinc;

    double im;
    if (std::abs(x) < 0.1)
    {
        double const x2 = x * x;
        im = 2 * t2 * x * (1.0 / 6 - x2 / 120 + x2 * x2 / 5040);
    }
    else
    {
        im = 2 * (x - std::sin(x)) / (lambda * lambda);
    }
    return {re, im};
}

//! Leading large-T behavior 2iT/lambda
inline std::complex<double>
asymptotic_time_kernel(double lambda, double duration)
{
    if (lambda == 0)
        throw ParameterError("asymptotic kernel is singular at lambda = 0");
    return {0.0, 2 * duration / lambda};
}

//---------------------------------------------------------------------------//
/*!
 * Midpoint-cell discretization of the time square.
 *
 * Cells on the diagonal t1 = t2 contribute exactly cell area each, a real
 * number, so they carry no imaginary part; their total TΔt vanishes as the
 * grid is refined.
 */
struct DiscretizedKernel
{
    std::complex<double> off_diagonal;
    double diagonal;
};

inline DiscretizedKernel
discretized_time_kernel(double lambda, double duration, int cells)
{
    if (!(duration > 0) || cells < 1)
        throw ParameterError("discretized kernel needs T > 0 and cells >= 1");
    double const dt = duration / cells;
    std::complex<double> off = 0;
    for (int d = 1; d < cells; ++d)
    {
        off += 2.0 * (cells - d) * std::exp(std::complex<double>(0, lambda * d * dt));
    }
    return {off * dt * dt, cells * dt * dt};
}

//---------------------------------------------------------------------------//
/*!
 * Realization of the i epsilon prescription in the energy denominator.
 */
class SmearingScheme
{
  public:
    enum class Kind
    {
        delta_exact,
        lorentzian,
        finite_time
    };

    static SmearingScheme delta() { return SmearingScheme(Kind::delta_exact, 0, 0); }
    static SmearingScheme lorentzian(double epsilon)
    {
        if (!(epsilon > 0))
            throw ParameterError("Lorentzian width epsilon must be > 0");
        return SmearingScheme(Kind::lorentzian, epsilon, 0);
    }
    static SmearingScheme finite_time(double duration)
    {
        if (!(duration > 0))
            throw ParameterError("finite-time smearing needs T > 0");
        return SmearingScheme(Kind::finite_time, 0, duration);
    }

    Kind kind() const { return kind_; }
    double epsilon() const { return epsilon_; }
    double duration() const { return duration_; }

    /*!
     * Nascent delta function of the energy mismatch lambda = omega - k.
     *
     * Lorentzian: (1/pi) eps/(lambda^2 + eps^2), the imaginary part of
     * -1/(lambda + i eps). Finite time: Re K(lambda, T)/(2 pi T), the
     * Fejer kernel (1 - cos lambda T)/(pi lambda^2 T).
     */
    double weight(double lambda) const
    {
        switch (kind_)
        {
            case Kind::lorentzian:
                return epsilon_ / (pi * (lambda * lambda + epsilon_ * epsilon_));
            case Kind::finite_time:
                return finite_time_kernel(lambda, duration_).real()
                       / (2 * pi * duration_);
            case Kind::delta_exact:
                break;
        }
        throw ParameterError("delta scheme has no pointwise weight");
    }

  private:
    SmearingScheme(Kind k, double eps, double t)
        : kind_(k), epsilon_(eps), duration_(t)
    {
    }

    Kind kind_;
    double epsilon_;
    double duration_;
};

//---------------------------------------------------------------------------//
//! Photon-energy range kept in the emission integrals
struct EmissionWindow
{
    //! Transitions with E_p - E_p' below this are dropped
    double omega_min = 0;
    //! Photon energies are integrated up to k_max_factor * m v^2 / 2
    double k_max_factor = 2;
};

struct RateResult
{
    double value;
    double error_estimate;
    std::vector<std::string> warnings;
};

//! Imaginary part of the vacuum-averaged effective action
struct EffectiveActionValue
{
    double imag_part;
    double duration;
};

//---------------------------------------------------------------------------//
/*!
 * Photon-energy integral \f$ \int_0^{k_{max}} dk\, k\, \delta_s(\omega - k) \f$.
 *
 * For the exact delta this is omega on (0, k_max) and zero otherwise; the
 * smeared schemes are integrated numerically and tend to omega as the
 * smearing is removed.
 */
inline double photon_energy_kernel(SmearingScheme const& scheme,
                                   double omega,
                                   double k_max,
                                   Tolerance tol)
{
    if (scheme.kind() == SmearingScheme::Kind::delta_exact)
        return (omega > 0 && omega < k_max) ? omega : 0.0;

    std::vector<double> pts{0.0};
    auto add = [&](double k) {
        if (k > pts.back() && k < k_max)
            pts.push_back(k);
    };
    QuadLimits limits;
    if (scheme.kind() == SmearingScheme::Kind::lorentzian)
    {
        double const eps = scheme.epsilon();
        for (double s : {-10.0, -1.0, 0.0, 1.0, 10.0})
            add(omega + s * eps);
    }
    else
    {
        // Zeros of the Fejer kernel sit at lambda = 2 pi j / T
        double const period = 2 * pi / scheme.duration();
        if (k_max / period > 2e5)
            throw ParameterError("finite-time kernel has over 2e5 "
                                 "oscillations below k_max; use the delta "
                                 "scheme for such long times");
        long const first = static_cast<long>(std::ceil(-omega / period));
        for (long j = first; omega + j * period < k_max; ++j)
            add(omega + j * period);
        limits.max_segments = static_cast<int>(pts.size()) + 4000;
    }
    pts.push_back(k_max);

    auto r = integrate_1d(
        [&](double k) { return k * scheme.weight(omega - k); },
        pts,
        Tolerance(tol.rel, tol.rel * std::max(std::abs(omega), 1e-300)),
        limits);
    if (!r.converged)
        throw AccuracyError("photon-energy integral did not converge",
                            r.error_estimate);
    return r.value;
}

namespace detail
{
//---------------------------------------------------------------------------//
/*!
 * Shared final-state integral of the effective-action route.
 *
 * Evaluates
 * \f[
   \frac{4e^2}{3}\int \frac{d^3p'}{(2\pi)^3}\,
      |\dot x_{p'p}|^2\, K_s(\omega_{pp'})\, \omega_{pp'}^{n}
 * \f]
 * over E_p - E_p' >= omega_min, with the velocity element built from the
 * Born gradient element through the dipole element chain. n = 0 gives the
 * emission rate, n = 1 the emitted energy per unit time.
 */
inline PowerResult emission_integral(PhysicalParams const& params,
                                     double v,
                                     SmearingScheme const& scheme,
                                     Tolerance tol,
                                     EmissionWindow const& window,
                                     int energy_power)
{
    require_speed(v);
    double const m = params.mass();
    double const pmag = m * v;
    double const omega_max = max_photon_energy(m, v);
    double const k_max = window.k_max_factor * omega_max;
    if (!(window.omega_min >= 0) || !(window.omega_min < omega_max))
        throw KinematicError("soft cutoff must lie in [0, m v^2/2)");
    if (!(window.k_max_factor > 1))
        throw ParameterError("photon-energy ceiling must exceed m v^2/2");
    if (params.force_strength() == 0)
        return {0.0, 0.0};

    double const fs_m = params.force_strength() / m;
    // |xdot|^2 scale: (fs/m)^2 (4 pi / (m v))^2 / omega_max^2
    double const xdot_unit = fs_m * fs_m * 16 * pi * pi / (pmag * pmag)
                             / (omega_max * omega_max);
    Tolerance const inner_tol = Tolerance::relative(tol.rel * 1e-2);
    bool inner_ok = true;

    auto radial = [&](double x) {
        double const omega = omega_max * (1 - x * x);
        if (!(omega > 0))
            return 0.0;
        // Polar variable s = ln(q^2 / (m v)^2), transfer built directly
        auto polar = [&](double s) {
            double const q2 = std::exp(s);
            Real3 const q = shell_transfer(x, q2) * pmag;
            auto const p_hat = (params.force_strength()
                                / std::complex<double>(0, omega))
                               * born_gradient_element(Real3{}, q);
            auto const el = element_chain(p_hat, omega, m);
            return norm_sq(el.xdot) / xdot_unit * q2 / (2 * x);
        };
        auto a = integrate_1d(polar, 2 * std::log1p(-x), 2 * std::log1p(x),
                              inner_tol);
        inner_ok = inner_ok && a.converged;
        double const k = photon_energy_kernel(scheme, omega, k_max, inner_tol)
                         / omega_max;
        return x * x * a.value * k
               * std::pow(omega / omega_max, energy_power);
    };

    double const x_max = std::sqrt(1 - window.omega_min / omega_max);
    auto r = integrate_1d(radial, 0.0, x_max,
                          Tolerance(tol.rel, tol.rel * 1e-4),
                          window.omega_min == 0 ? EndpointHint::log_at_b
                                                : EndpointHint::none);
    if (!r.converged || !inner_ok)
        throw AccuracyError("effective-action final-state integral did not "
                            "converge",
                            r.error_estimate);

    // 4e^2/3 * (2 pi / (2 pi)^3) p^3 * xdot_unit * omega_max^(1 + n)
    double const scale = 4 * params.e_squared() / 3 * pmag * pmag * pmag
                         / (4 * pi * pi) * xdot_unit
                         * std::pow(omega_max, 1 + energy_power);
    return {scale * r.value, scale * std::abs(r.error_estimate)};
}

inline std::vector<std::string>
conditioning_warnings(SmearingScheme const& scheme,
                      double omega_min,
                      double omega_max)
{
    std::vector<std::string> out;
    if (scheme.kind() == SmearingScheme::Kind::lorentzian)
    {
        if (scheme.epsilon() > omega_min)
            out.emplace_back("Lorentzian width exceeds the soft cutoff; "
                             "smearing leaks across the excluded region");
        if (scheme.epsilon() < 1e-6 * omega_max)
            out.emplace_back("Lorentzian width below 1e-6 omega_max; "
                             "quadrature of the peak is ill-conditioned");
    }
    else if (scheme.kind() == SmearingScheme::Kind::finite_time)
    {
        if (scheme.duration() * omega_min < 100)
            out.emplace_back("T * omega_min < 100: finite-time kernel is "
                             "far from its asymptotic regime");
    }
    return out;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Photon emission rate R = (2/T) Im<S_eff>.
 *
 * \f[
   R = \frac{4e^2}{3}\int \frac{d^3p'}{(2\pi)^3}\,
       |\dot x_{p'p}|^2 \int dk\, k\, \delta_s(\omega_{pp'} - k)
 * \f]
 * which for the exact delta is (4e^2/3) int omega |xdot|^2. The number of
 * soft photons diverges logarithmically, so a soft cutoff omega_min > 0 is
 * required.
 */
inline RateResult effective_action_rate(PhysicalParams const& params,
                                        double v,
                                        SmearingScheme const& scheme,
                                        Tolerance tol,
                                        EmissionWindow const& window)
{
    if (!(window.omega_min > 0))
        throw ParameterError("photon emission rate is infrared divergent: "
                             "a soft cutoff omega_min > 0 is required");
    auto r = detail::emission_integral(params, v, scheme, tol, window, 0);
    return {r.value, r.error_estimate,
            detail::conditioning_warnings(
                scheme, window.omega_min, max_photon_energy(params.mass(), v))};
}

//---------------------------------------------------------------------------//
/*!
 * Radiated power from the effective action: the rate density weighted by the
 * transition energy and divided by the incoming flux,
 * \f[
   P = \frac{4e^2}{3}\int\frac{d^3p'}{(2\pi)^3 v}\,\omega^4 |x_{p'p}|^2 .
 * \f]
 * The exact-delta scheme needs no cutoff; smeared schemes place weight on
 * the elastic shell, where the velocity element diverges, and require
 * omega_min > 0.
 */
inline PowerResult power_from_effective_action(
    PhysicalParams const& params,
    double v,
    Tolerance tol,
    SmearingScheme const& scheme = SmearingScheme::delta(),
    EmissionWindow const& window = {})
{
    if (scheme.kind() != SmearingScheme::Kind::delta_exact
        && !(window.omega_min > 0))
        throw ParameterError("smeared energy conservation requires a soft "
                             "cutoff omega_min > 0");
    auto r = detail::emission_integral(params, v, scheme, tol, window, 1);
    return {r.value / v, r.error_estimate / v};
}

//---------------------------------------------------------------------------//
/*!
 * dP/domega on the energy shell from the effective-action integrand.
 *
 * Integrates omega^2 |xdot|^2 over the direction of p' at fixed
 * |p'| = m sqrt(v^2 - 2 omega/m).
 */
inline double effective_action_spectral_density(PhysicalParams const& params,
                                                double v,
                                                double omega,
                                                Tolerance tol)
{
    detail::require_speed(v);
    double const m = params.mass();
    double const omega_max = max_photon_energy(m, v);
    if (!(omega > 0) || !(omega <= omega_max))
        throw KinematicError("photon energy must lie in (0, m v^2/2]");
    double const v_out = std::sqrt(std::max(0.0, v * v - 2 * omega / m));
    if (v_out == 0 || params.force_strength() == 0)
        return 0.0;

    double const pmag = m * v;
    double const x = v_out / v;
    double const fs_m = params.force_strength() / m;
    double const unit = fs_m * fs_m * 16 * pi * pi / (pmag * pmag);
    // Polar variable s = ln(q^2 / (m v)^2), as in the rate integral
    auto polar = [&](double s) {
        double const q2 = std::exp(s);
        Real3 const q = shell_transfer(x, q2) * pmag;
        auto const p_hat = (params.force_strength()
                            / std::complex<double>(0, omega))
                           * born_gradient_element(Real3{}, q);
        auto const el = element_chain(p_hat, omega, m);
        return omega * omega * norm_sq(el.xdot) / unit * q2 / (2 * x);
    };
    auto a = integrate_1d(polar, 2 * std::log1p(-x), 2 * std::log1p(x),
                          Tolerance::relative(tol.rel));
    if (!a.converged)
        throw AccuracyError("on-shell angular integral did not converge",
                            a.error_estimate);
    return 4 * params.e_squared() / 3 * m * m * v_out / (4 * pi * pi * v)
           * unit * a.value;
}

//---------------------------------------------------------------------------//
/*!
 * Im<S_eff> accumulated over an interaction time T, equal to R T / 2.
 *
 * For the finite-time scheme the duration must match the scheme's T.
 */
inline EffectiveActionValue
imaginary_effective_action(PhysicalParams const& params,
                           double v,
                           SmearingScheme const& scheme,
                           double duration,
                           Tolerance tol,
                           EmissionWindow const& window)
{
    if (!(duration > 0))
        throw ParameterError("interaction time T must be > 0");
    if (scheme.kind() == SmearingScheme::Kind::finite_time
        && scheme.duration() != duration)
        throw ParameterError("finite-time scheme duration differs from T");
    auto const rate = effective_action_rate(params, v, scheme, tol, window);
    return {0.5 * duration * rate.value, duration};
}

//---------------------------------------------------------------------------//
//! Vacuum survival and photon emission probabilities
struct VacuumPersistence
{
    double persistence;
    double emission;
    //! First-order estimate 2 Im<S_eff>
    double linearized;
};

/*!
 * Split unit probability between vacuum survival exp(-2 Im S) and emission.
 *
 * The smaller of the two is evaluated directly (expm1 for weak emission)
 * and the other as its complement; with that construction the two always
 * add to exactly 1 in floating point.
 */
inline VacuumPersistence vacuum_persistence(double im_s_eff)
{
    if (!(im_s_eff >= 0))
        throw UnitarityError("negative Im<S_eff> would make the vacuum "
                             "persistence probability exceed 1");
    double const x = 2 * im_s_eff;
    VacuumPersistence out{0, 0, x};
    if (x < std::log(2.0))
    {
        out.emission = -std::expm1(-x);
        out.persistence = 1 - out.emission;
    }
    else
    {
        out.persistence = std::exp(-x);
        out.emission = 1 - out.persistence;
    }
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace brems
