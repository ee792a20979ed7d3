//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/ClassicalRadiation.hh
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <fftw3.h>

#include "Error.hh"
#include "Kinematics.hh"
#include "PerturbativeSpectrum.hh"
#include "Vector.hh"

namespace brems
{
//---------------------------------------------------------------------------//
/*!
 * Uniformly sampled classical orbit.
 *
 * Times start at zero. The conserved energy and angular momentum are those
 * of the first sample; the drift fields record the largest relative
 * departure seen along the path.
 */
struct Trajectory
{
    std::vector<double> times;
    std::vector<Real3> positions;
    std::vector<Real3> velocities;
    std::vector<Real3> accelerations;
    PhysicalParams params;
    double energy{0};
    Real3 angular_momentum{};
    double max_energy_drift{0};
    double max_angular_momentum_drift{0};

    std::size_t size() const { return times.size(); }
    double duration() const { return times.back() - times.front(); }
};

//! Acceleration from the central force kappa Z e^2 grad(1/r) / m
inline Real3 coulomb_acceleration(PhysicalParams const& params, Real3 const& x)
{
    double const r = norm(x);
    return x * (-params.force_strength() / (params.mass() * r * r * r));
}

inline double classical_energy(PhysicalParams const& params,
                               Real3 const& x,
                               Real3 const& v)
{
    return 0.5 * params.mass() * norm_sq(v)
           - params.force_strength() / norm(x);
}

//---------------------------------------------------------------------------//
/*!
 * Build a trajectory from externally supplied samples (e.g. a synthetic
 * signal) and fill in its conservation diagnostics.
 */
inline Trajectory make_trajectory(PhysicalParams const& params,
                                  std::vector<double> times,
                                  std::vector<Real3> positions,
                                  std::vector<Real3> velocities,
                                  std::vector<Real3> accelerations)
{
    std::size_t const n = times.size();
    if (n < 3 || positions.size() != n || velocities.size() != n
        || accelerations.size() != n)
        throw ParameterError("trajectory arrays must share a length >= 3");
    double const dt = (times.back() - times.front()) / (n - 1);
    if (!(dt > 0))
        throw ParameterError("trajectory times must increase");
    for (std::size_t i = 1; i < n; ++i)
    {
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * dt)
            throw ParameterError("trajectory times must be uniformly spaced");
    }
    Trajectory t{std::move(times), std::move(positions), std::move(velocities),
                 std::move(accelerations), params};
    double const m = params.mass();
    t.energy = classical_energy(params, t.positions[0], t.velocities[0]);
    t.angular_momentum = cross(t.positions[0], t.velocities[0] * m);
    double const lnorm = norm(t.angular_momentum);
    for (std::size_t i = 0; i < n; ++i)
    {
        double const e = classical_energy(params, t.positions[i],
                                          t.velocities[i]);
        if (t.energy != 0)
            t.max_energy_drift = std::max(t.max_energy_drift,
                                          std::abs(e / t.energy - 1));
        if (lnorm > 0)
        {
            auto const l = cross(t.positions[i], t.velocities[i] * m);
            t.max_angular_momentum_drift = std::max(
                t.max_angular_momentum_drift,
                norm(l - t.angular_momentum) / lnorm);
        }
    }
    return t;
}

//---------------------------------------------------------------------------//
/*!
 * Analytic scattering hyperbola for the attractive Coulomb force.
 *
 * The incoming asymptote runs along +x at height +b; time is measured from
 * closest approach. Used to place the numerical orbit on its asymptotic
 * initial condition and to size simulation windows.
 */
class CoulombHyperbola
{
  public:
    CoulombHyperbola(PhysicalParams const& params, double b, double v_inf)
        : b_(b), v_(v_inf), k_(params.force_strength() / params.mass())
    {
        if (!(b > 0))
            throw ParameterError("impact parameter must be > 0");
        if (!(v_inf > 0))
            throw ParameterError("asymptotic speed must be > 0");
        if (k_ > 0)
        {
            a_ = k_ / (v_ * v_);
            ecc_ = std::hypot(1.0, b_ / a_);
            n_ = std::sqrt(k_ / (a_ * a_ * a_));
        }
    }

    bool free() const { return k_ == 0; }

    double periapsis() const { return free() ? b_ : a_ * (ecc_ - 1); }
    double periapsis_speed() const { return b_ * v_ / periapsis(); }

    //! Position and velocity at time t from closest approach
    std::pair<Real3, Real3> state(double t) const
    {
        if (free())
            return {Real3{{v_ * t, b_, 0}}, Real3{{v_, 0, 0}}};
        double const h = anomaly(t);
        double const ch = std::cosh(h);
        double const sh = std::sinh(h);
        double const root = std::sqrt(ecc_ * ecc_ - 1);
        double const hdot = n_ / (ecc_ * ch - 1);
        double const xp = a_ * (ecc_ - ch);
        double const yp = a_ * root * sh;
        double const vxp = -a_ * sh * hdot;
        double const vyp = a_ * root * ch * hdot;
        // Rotate the incoming asymptote onto +x, then mirror to put the
        // offset at +b
        double const c = 1 / ecc_;
        double const s = root / ecc_;
        return {Real3{{xp * c + yp * s, xp * s - yp * c, 0}},
                Real3{{vxp * c + vyp * s, vxp * s - vyp * c, 0}}};
    }

    //! Time from closest approach to reach radius r (>= periapsis)
    double time_to_radius(double r) const
    {
        if (r < periapsis())
            throw ParameterError("radius inside closest approach");
        if (free())
            return std::sqrt(r * r - b_ * b_) / v_;
        double const h = std::acosh((r / a_ + 1) / ecc_);
        return (ecc_ * std::sinh(h) - h) / n_;
    }

  private:
    double b_;
    double v_;
    double k_;
    double a_{0};
    double ecc_{0};
    double n_{0};

    //! Solve e sinh H - H = n t
    double anomaly(double t) const
    {
        double const mean = n_ * t;
        double h = std::asinh(mean / ecc_);
        for (int i = 0; i < 100; ++i)
        {
            double const f = ecc_ * std::sinh(h) - h - mean;
            double const dh = f / (ecc_ * std::cosh(h) - 1);
            h -= dh;
            if (std::abs(dh) <= 1e-15 * std::max(1.0, std::abs(h)))
                break;
        }
        return h;
    }
};

//---------------------------------------------------------------------------//
/*!
 * Integrate the Coulomb scattering orbit over [0, T_sim].
 *
 * The particle starts on the exact hyperbola a time T_sim/2 before closest
 * approach, so the sampled orbit is centered on periapsis. Integration uses
 * an adaptive Runge-Kutta-Fehlberg 7(8) method stopping at every sample
 * time. The step tolerance starts at `ode_tol` and is tightened tenfold
 * until the energy and angular-momentum drifts are both within
 * max(`ode_tol`, 1e-11).
 */
inline Trajectory solve_orbit(PhysicalParams const& params,
                              double impact_parameter,
                              double v_infinity,
                              double sim_time,
                              double ode_tol,
                              std::size_t samples = 4097)
{
    if (!(sim_time > 0))
        throw ParameterError("simulation time must be > 0");
    if (!(ode_tol > 0))
        throw ParameterError("ODE tolerance must be > 0");
    if (samples < 3)
        throw ParameterError("orbit needs at least three samples");

    CoulombHyperbola const orbit(params, impact_parameter, v_infinity);
    double const r_min = orbit.periapsis();
    double const k = params.force_strength() / params.mass();

    using State = std::array<double, 6>;
    auto [x0, v0] = orbit.state(-0.5 * sim_time);

    auto rhs = [k](State const& s, State& d, double) {
        double const r2 = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
        double const f = -k / (r2 * std::sqrt(r2));
        d[0] = s[3];
        d[1] = s[4];
        d[2] = s[5];
        d[3] = f * s[0];
        d[4] = f * s[1];
        d[5] = f * s[2];
    };

    std::vector<double> times(samples);
    double const dt = sim_time / (samples - 1);
    for (std::size_t i = 0; i < samples; ++i)
        times[i] = dt * i;
    times.back() = sim_time;

    std::vector<Real3> pos;
    std::vector<Real3> vel;
    std::vector<Real3> acc;
    auto observe = [&](State const& s, double) {
        Real3 const x{{s[0], s[1], s[2]}};
        if (!(norm(x) > 0.5 * r_min) || !std::isfinite(s[3]))
            throw IntegrationError("orbit fell into the Coulomb center");
        pos.push_back(x);
        vel.push_back(Real3{{s[3], s[4], s[5]}});
        acc.push_back(coulomb_acceleration(params, x));
    };

    namespace ode = boost::numeric::odeint;
    auto integrate = [&](double step_tol) {
        pos.clear();
        vel.clear();
        acc.clear();
        pos.reserve(samples);
        vel.reserve(samples);
        acc.reserve(samples);
        State state{x0[0], x0[1], x0[2], v0[0], v0[1], v0[2]};
        try
        {
            auto stepper
                = ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(
                    step_tol, step_tol);
            ode::integrate_times(stepper, rhs, state, times.begin(),
                                 times.end(),
                                 std::min(dt, 0.01 * r_min / v0[0]), observe,
                                 ode::max_step_checker(100000));
        }
        catch (Error const&)
        {
            throw;
        }
        catch (std::exception const& e)
        {
            throw IntegrationError(std::string("orbit integration failed: ")
                                   + e.what());
        }
        if (pos.size() != samples)
            throw IntegrationError("orbit integration stopped early");
        return make_trajectory(params, times, pos, vel, acc);
    };

    // The RKF78 pair cannot usefully resolve below ~1e-15; rounding in the
    // sampled invariants leaves a drift floor near 1e-12
    constexpr double min_step_tol = 1e-15;
    constexpr double drift_floor = 1e-11;
    double const drift_tol = std::max(ode_tol, drift_floor);
    double drift = 0;
    for (double step_tol = ode_tol;; step_tol *= 0.1)
    {
        auto traj = integrate(std::max(step_tol, min_step_tol));
        double const r_first = norm(traj.positions.front());
        double const r_last = norm(traj.positions.back());
        if (std::min(r_first, r_last) < 10 * r_min)
            throw SimulationWindowError(
                "simulation window too short: orbit ends within 10x the "
                "distance of closest approach");
        drift = std::max(traj.max_energy_drift,
                         traj.max_angular_momentum_drift);
        if (drift <= drift_tol)
            return traj;
        if (step_tol <= min_step_tol)
            break;
    }
    throw AccuracyError("orbit conservation drift exceeds ode_tol even at "
                        "the finest step tolerance",
                        drift);
}

//---------------------------------------------------------------------------//
//! Larmor power (2 e^2/3) |xddot|^2 at each sample
inline std::vector<double> instantaneous_power(Trajectory const& traj)
{
    double const c = 2 * traj.params.e_squared() / 3;
    std::vector<double> out;
    out.reserve(traj.size());
    for (auto const& a : traj.accelerations)
        out.push_back(c * norm_sq(a));
    return out;
}

/*!
 * Window-averaged Larmor power (1/T) int P dt.
 *
 * Periodic signals use the rectangle rule over one period (the last sample
 * duplicates the first); otherwise the trapezoid rule.
 */
inline double time_averaged_power(Trajectory const& traj, bool periodic = false)
{
    auto const p = instantaneous_power(traj);
    std::size_t const n = p.size();
    double sum = 0;
    if (periodic)
    {
        for (std::size_t i = 0; i + 1 < n; ++i)
            sum += p[i];
        return sum / (n - 1);
    }
    for (std::size_t i = 0; i < n; ++i)
        sum += (i == 0 || i + 1 == n) ? 0.5 * p[i] : p[i];
    return sum / (n - 1);
}

//---------------------------------------------------------------------------//
struct SpectrumOptions
{
    enum class Taper
    {
        automatic,
        never,
        always
    };

    Taper taper = Taper::automatic;
    //! Fraction of the window at each end covered by the cosine taper
    double taper_fraction = 0.05;
    //! The samples span whole periods of a periodic signal
    bool periodic = false;
    //! End acceleration / peak above which the window leaks
    double leakage_threshold = 1e-6;
    //! Largest ratio the taper is trusted to repair
    double taper_limit = 1e-3;
};

/*!
 * One-sided classical emission spectrum.
 *
 * With x(t) = int domega/2pi x(omega) e^{i omega t}, the window transform
 * a(omega) = int_0^T xddot(t) e^{-i omega t} dt is normalized as
 * xddot(omega) = a(omega)/sqrt(2 pi T), so that
 * (1/T) int P(t) dt = int_0^inf P(omega) domega with
 * P(omega) = (4e^2/3)|xddot(omega)|^2. The energy spectrum of the whole
 * pass is T P(omega) = (2e^2/3pi)|a(omega)|^2.
 */
struct ClassicalSpectrum
{
    std::vector<double> omega_grid;
    std::vector<double> density;
    std::vector<double> energy_density;
    double window_duration{0};
    bool taper_applied{false};
    double taper_fraction{0};
    std::string taper_description;
    //! Bin spacing for DFT-bin spectra; zero for arbitrary grids
    double omega_step{0};
    //! Number of samples transformed for DFT-bin spectra
    std::size_t transform_length{0};
};

namespace detail
{
//! Accelerations after leakage checks and optional tapering
inline std::vector<Real3> windowed_acceleration(Trajectory const& traj,
                                                SpectrumOptions const& opts,
                                                ClassicalSpectrum& meta)
{
    auto acc = traj.accelerations;
    std::size_t const n = acc.size();
    double peak = 0;
    for (auto const& a : acc)
        peak = std::max(peak, norm(a));
    meta.window_duration = traj.duration();
    meta.taper_description = "none";
    if (peak == 0)
        return acc;

    double const end_ratio
        = std::max(norm(acc.front()), norm(acc.back())) / peak;
    if (opts.periodic)
    {
        if (norm(acc.front() - acc.back()) > 1e-8 * peak)
            throw SpectralLeakageError(
                "signal declared periodic but endpoints differ");
        return acc;
    }

    bool taper = opts.taper == SpectrumOptions::Taper::always;
    if (end_ratio > opts.leakage_threshold)
    {
        if (opts.taper == SpectrumOptions::Taper::never
            || end_ratio > opts.taper_limit)
            throw SpectralLeakageError(
                "acceleration at the window edges is "
                + std::to_string(end_ratio)
                + " of its peak; lengthen the simulation window");
        taper = true;
    }
    if (taper)
    {
        std::size_t const width = static_cast<std::size_t>(
            std::ceil(opts.taper_fraction * (n - 1)));
        for (std::size_t i = 0; i < width && i < n; ++i)
        {
            double const w = 0.5 * (1 - std::cos(pi * i / width));
            acc[i] = acc[i] * w;
            acc[n - 1 - i] = acc[n - 1 - i] * w;
        }
        meta.taper_applied = true;
        meta.taper_fraction = opts.taper_fraction;
        meta.taper_description = "cosine taper over outer "
                                 + std::to_string(opts.taper_fraction)
                                 + " of window at each end";
    }
    return acc;
}

//! |a(omega)|^2 summed over components, trapezoid or rectangle weights
inline double transform_sq(std::vector<Real3> const& acc,
                           double dt,
                           double omega,
                           bool periodic)
{
    using C = std::complex<double>;
    std::size_t const n = periodic ? acc.size() - 1 : acc.size();
    std::array<C, 3> sum{};
    C phase = 1;
    C const step = std::exp(C(0, -omega * dt));
    for (std::size_t i = 0; i < n; ++i)
    {
        if (i % 512 == 0)
            phase = std::exp(C(0, -omega * dt * static_cast<double>(i)));
        double const w = (!periodic && (i == 0 || i + 1 == n)) ? 0.5 : 1.0;
        for (int c = 0; c < 3; ++c)
            sum[c] += (w * acc[i][c]) * phase;
        phase *= step;
    }
    return (std::norm(sum[0]) + std::norm(sum[1]) + std::norm(sum[2])) * dt
           * dt;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Classical spectrum on an arbitrary photon-energy grid by direct summation.
 */
inline ClassicalSpectrum classical_spectrum(Trajectory const& traj,
                                            std::vector<double> const& omega_grid,
                                            SpectrumOptions const& opts = {})
{
    ClassicalSpectrum out;
    auto const acc = detail::windowed_acceleration(traj, opts, out);
    double const dt = traj.duration() / (traj.size() - 1);
    double const big_t = traj.duration();
    double const e2 = traj.params.e_squared();
    out.omega_grid = omega_grid;
    for (double w : omega_grid)
    {
        if (!(w >= 0))
            throw ParameterError("spectrum frequencies must be >= 0");
        double const a2 = detail::transform_sq(acc, dt, w, opts.periodic);
        out.energy_density.push_back(2 * e2 / (3 * pi) * a2);
        out.density.push_back(out.energy_density.back() / big_t);
    }
    return out;
}

/*!
 * Classical spectrum on the natural DFT bins omega_k = 2 pi k / T.
 *
 * The last sample is treated as closing the period, so the discrete
 * Parseval identity holds exactly for `integrated_power`.
 */
inline ClassicalSpectrum classical_spectrum_bins(Trajectory const& traj,
                                                 SpectrumOptions const& opts = {})
{
    ClassicalSpectrum out;
    auto const acc = detail::windowed_acceleration(traj, opts, out);
    int const m = static_cast<int>(acc.size()) - 1;
    double const big_t = traj.duration();
    double const dt = big_t / m;
    int const bins = m / 2 + 1;

    std::vector<double> power(bins, 0.0);
    auto* in = static_cast<double*>(fftw_malloc(sizeof(double) * m));
    auto* spec = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * bins));
    std::unique_ptr<void, decltype(&fftw_free)> hold_in(in, &fftw_free);
    std::unique_ptr<void, decltype(&fftw_free)> hold_out(spec, &fftw_free);
    std::unique_ptr<fftw_plan_s, decltype(&fftw_destroy_plan)> plan(
        fftw_plan_dft_r2c_1d(m, in, spec, FFTW_ESTIMATE), &fftw_destroy_plan);
    for (int c = 0; c < 3; ++c)
    {
        for (int i = 0; i < m; ++i)
            in[i] = acc[i][c];
        fftw_execute(plan.get());
        for (int k = 0; k < bins; ++k)
            power[k] += (spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1])
                        * dt * dt;
    }

    double const e2 = traj.params.e_squared();
    out.omega_step = 2 * pi / big_t;
    out.transform_length = static_cast<std::size_t>(m);
    for (int k = 0; k < bins; ++k)
    {
        out.omega_grid.push_back(out.omega_step * k);
        out.energy_density.push_back(2 * e2 / (3 * pi) * power[k]);
        out.density.push_back(out.energy_density.back() / big_t);
    }
    return out;
}

/*!
 * Integral of P(omega) over the spectrum's grid.
 *
 * DFT-bin spectra use the one-sided Parseval weights (half weight at zero
 * and at the Nyquist bin of an even-length transform); other grids use the
 * trapezoid rule.
 */
inline double integrated_power(ClassicalSpectrum const& spec)
{
    auto const& w = spec.omega_grid;
    auto const& p = spec.density;
    double sum = 0;
    if (spec.omega_step > 0)
    {
        std::size_t const n = p.size();
        // Nyquist bin is the last bin only for an even transform length
        bool const even = spec.transform_length % 2 == 0;
        for (std::size_t k = 0; k < n; ++k)
        {
            double weight = 1;
            if (k == 0 || (k + 1 == n && even))
                weight = 0.5;
            sum += weight * p[k];
        }
        return sum * spec.omega_step;
    }
    for (std::size_t i = 1; i < w.size(); ++i)
        sum += 0.5 * (p[i] + p[i - 1]) * (w[i] - w[i - 1]);
    return sum;
}

//---------------------------------------------------------------------------//
//! Classical versus quantum spectral intensity at one soft photon energy
struct QuasiClassicalReport
{
    double omega;
    double omega_max;
    //! int 2 pi b db dW/domega
    double classical;
    //! Born dP/domega
    double quantum;
    double ratio;
    std::vector<double> impact_parameters;
    //! dW/domega of each orbit
    std::vector<double> orbit_energy_density;
};

/*!
 * Compare the impact-parameter-averaged classical spectrum with the Born
 * spectral density in the soft region omega <= 0.1 m v^2/2.
 *
 * Each orbit is integrated over a window reaching 1200 times its closest
 * approach, which leaves the end accelerations below 1e-6 of the peak, and
 * sampled finely enough to resolve both the collision time and 1/omega.
 * The b integral uses the trapezoid rule in log b.
 */
inline QuasiClassicalReport
quasi_classical_compare(PhysicalParams const& params,
                        double v,
                        std::vector<double> const& b_grid,
                        double omega,
                        double ode_tol = 1e-10)
{
    detail::require_speed(v);
    double const omega_max = max_photon_energy(params.mass(), v);
    if (!(omega > 0) || !(omega <= 0.1 * omega_max))
        throw ValidityError("quasi-classical comparison needs a soft photon, "
                            "0 < omega <= 0.1 m v^2/2");
    if (b_grid.size() < 2)
        throw ParameterError("impact-parameter grid needs >= 2 points");
    for (std::size_t i = 0; i < b_grid.size(); ++i)
    {
        if (!(b_grid[i] > 0) || (i > 0 && !(b_grid[i] > b_grid[i - 1])))
            throw ParameterError("impact parameters must be positive and "
                                 "increasing");
    }

    QuasiClassicalReport out{omega, omega_max, 0, 0, 0, b_grid, {}};
    for (double b : b_grid)
    {
        CoulombHyperbola const orbit(params, b, v);
        double const r_p = orbit.periapsis();
        double const sim_time = 2 * orbit.time_to_radius(1200 * r_p);
        double const dt = std::min(r_p / orbit.periapsis_speed(), 1 / omega)
                          / 8;
        auto const samples = static_cast<std::size_t>(
            std::clamp(std::ceil(sim_time / dt) + 1, 1025.0, 4194305.0));
        auto const traj
            = solve_orbit(params, b, v, sim_time, ode_tol, samples);
        SpectrumOptions opts;
        opts.taper = SpectrumOptions::Taper::never;
        auto const spec = classical_spectrum(traj, {omega}, opts);
        out.orbit_energy_density.push_back(spec.energy_density[0]);
    }

    double sum = 0;
    for (std::size_t i = 1; i < b_grid.size(); ++i)
    {
        double const f0 = 2 * pi * b_grid[i - 1] * b_grid[i - 1]
                          * out.orbit_energy_density[i - 1];
        double const f1 = 2 * pi * b_grid[i] * b_grid[i]
                          * out.orbit_energy_density[i];
        sum += 0.5 * (f0 + f1) * std::log(b_grid[i] / b_grid[i - 1]);
    }
    out.classical = sum;
    out.quantum = born_spectral_density(params, v, omega);
    out.ratio = out.quantum > 0 ? out.classical / out.quantum : 0.0;
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace brems
