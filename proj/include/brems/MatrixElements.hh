//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/MatrixElements.hh
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <complex>

#include "Error.hh"
#include "Kinematics.hh"
#include "Quadrature.hh"
#include "Vector.hh"

namespace brems
{
//---------------------------------------------------------------------------//
/*!
 * Sum over the two transverse photon polarizations,
 * \f$ P_{ij} = \delta_{ij} - \hat k_i \hat k_j \f$.
 */
class PolarizationProjector
{
  public:
    explicit PolarizationProjector(Real3 const& k_vec)
    {
        double const k = norm(k_vec);
        if (!(k > 0))
            throw ParameterError("polarization projector needs |k| > 0");
        Real3 const khat = k_vec / k;
        for (int i = 0; i < 3; ++i)
        {
            for (int j = 0; j < 3; ++j)
                m_[i][j] = (i == j ? 1.0 : 0.0) - khat[i] * khat[j];
        }
    }

    Matrix3 const& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_[i][j]; }

    Real3 apply(Real3 const& a) const
    {
        Real3 r;
        for (int i = 0; i < 3; ++i)
            r[i] = m_[i][0] * a[0] + m_[i][1] * a[1] + m_[i][2] * a[2];
        return r;
    }

    //! Polarization-summed |eps* . a|^2 = P_ij a_i conj(a_j)
    double bilinear(ComplexVector3 const& a) const
    {
        std::complex<double> s = 0;
        for (int i = 0; i < 3; ++i)
        {
            for (int j = 0; j < 3; ++j)
                s += m_[i][j] * a[i] * std::conj(a[j]);
        }
        return s.real();
    }

  private:
    Matrix3 m_{};
};

inline PolarizationProjector polarization_projector(Real3 const& k_vec)
{
    return PolarizationProjector(k_vec);
}

//---------------------------------------------------------------------------//
/*!
 * Integrate the polarization projector over all photon directions.
 *
 * The exact answer is (8 pi / 3) times the identity.
 */
inline Matrix3 angular_projector_integral(Tolerance tol)
{
    Matrix3 out{};
    for (int i = 0; i < 3; ++i)
    {
        for (int j = i; j < 3; ++j)
        {
            auto r = integrate_sphere(
                [i, j](Real3 const& khat) {
                    return PolarizationProjector(khat)(i, j);
                },
                tol);
            if (!r.converged)
                throw AccuracyError("projector angular integral did not "
                                    "converge",
                                    r.error_estimate);
            out[i][j] = r.value;
            out[j][i] = r.value;
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Plane-wave matrix element of grad(1/r).
 *
 * \f[
   \langle p' | \nabla \frac{1}{r} | p \rangle = 4\pi i \frac{q}{|q|^2},
   \quad q = p' - p .
 * \f]
 */
inline ComplexVector3 born_gradient_element(Real3 const& p_in,
                                            Real3 const& p_out)
{
    Real3 const q = p_out - p_in;
    double const q2 = norm_sq(q);
    if (!(q2 > 0))
        throw SingularTransferError(
            "Coulomb matrix element is singular at zero momentum transfer");
    return std::complex<double>(0, 4 * pi / q2) * q;
}

//! Closed form for the Yukawa-screened element, 4 pi i q / (q^2 + mu^2)
inline ComplexVector3
screened_gradient_element(Real3 const& p_in, Real3 const& p_out, double mu)
{
    if (!(mu >= 0))
        throw ParameterError("screening mass must be >= 0");
    Real3 const q = p_out - p_in;
    double const den = norm_sq(q) + mu * mu;
    if (!(den > 0))
        throw SingularTransferError(
            "unscreened element is singular at zero momentum transfer");
    return std::complex<double>(0, 4 * pi / den) * q;
}

namespace detail
{
//! Spherical Bessel j1 with a series near the origin
inline double sph_j1(double s)
{
    if (std::abs(s) < 1e-2)
    {
        double const s2 = s * s;
        return s / 3 * (1 - s2 / 10 * (1 - s2 / 28));
    }
    return std::sin(s) / (s * s) - std::cos(s) / s;
}

inline double sph_j0(double s)
{
    return std::abs(s) < 1e-8 ? 1.0 : std::sin(s) / s;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Brute-force matrix element of grad(exp(-mu r)/r) between plane waves.
 *
 * The three-dimensional Fourier integral
 * \f$ \int d^3x\, e^{-i q\cdot x} \nabla V(r) \f$ is reduced by spherical
 * symmetry without integrating by parts: the angular integral of
 * \f$ \hat x\, e^{-i q \cdot x} \f$ gives \f$ -4\pi i \hat q\, j_1(qr) \f$
 * and \f$ r^2 V'(r) = -e^{-\mu r}(1 + \mu r) \f$, leaving
 * \f[
   4\pi i\, \hat q \int_0^\infty e^{-\mu r}(1 + \mu r)\, j_1(q r)\, dr .
 * \f]
 * The radial integral is evaluated numerically over whole half-periods of
 * the Bessel function up to a cutoff; the remainder beyond the cutoff is
 * added from its exact expression obtained by one integration by parts.
 * The cutoff is kept far enough out that the remainder is a small
 * correction and the numerical part carries the result.
 */
inline ComplexVector3 screened_gradient_element_oracle(Real3 const& p_in,
                                                       Real3 const& p_out,
                                                       double mu,
                                                       Tolerance tol)
{
    if (!(mu >= 0))
        throw ParameterError("screening mass must be >= 0");
    Real3 const q = p_out - p_in;
    double const qmag = norm(q);
    if (!(qmag > 0))
    {
        if (!(mu > 0))
            throw SingularTransferError("unscreened element is singular at "
                                        "zero momentum transfer");
        // Odd integrand: the direction average vanishes identically
        return {};
    }

    // Dimensionless s = q r, decay rate kappa = mu / q
    double const kappa = mu / qmag;
    auto integrand = [kappa](double s) {
        return std::exp(-kappa * s) * (1 + kappa * s) * detail::sph_j1(s);
    };

    int half_periods = 40;
    if (kappa > 0)
        half_periods = static_cast<int>(
            std::ceil(std::clamp(40.0 / (kappa * pi), 40.0, 4000.0)));
    double const cutoff = half_periods * pi;

    std::vector<double> pts(half_periods + 1);
    for (int i = 0; i <= half_periods; ++i)
        pts[i] = i * pi;
    auto body = integrate_1d(integrand, pts, Tolerance::relative(tol.rel * 0.1));

    // Tail: g j1 = -g j0' with g = e^{-ks}(1+ks), g' = -k^2 s e^{-ks}
    double const g_cut = std::exp(-kappa * cutoff) * (1 + kappa * cutoff);
    double const tail = g_cut * detail::sph_j0(cutoff)
                        - kappa * kappa * std::exp(-kappa * cutoff)
                              * (kappa * std::sin(cutoff) + std::cos(cutoff))
                              / (1 + kappa * kappa);

    double const radial = (body.value + tail) / qmag;
    double const rel_err = body.error_estimate
                           / std::max(std::abs(body.value + tail), 1e-300);
    if (!body.converged || !(rel_err <= tol.rel))
        throw AccuracyError("screened Fourier integral did not converge",
                            rel_err);
    return std::complex<double>(0, 4 * pi * radial) * (q / qmag);
}

//---------------------------------------------------------------------------//
/*!
 * Squared acceleration matrix element in the Born approximation,
 * \f$ (\kappa Z e^2/m)^2 (4\pi/m)^2 / |v' - v|^2 \f$.
 */
inline double acceleration_element_sq(PhysicalParams const& params,
                                      ScatterKinematics const& kin)
{
    double const dv2 = norm_sq(kin.v_out() - kin.v_in());
    if (!(dv2 > 0))
        throw SingularTransferError(
            "acceleration element is singular for equal velocities");
    double const a = params.force_strength() / params.mass();
    double const b = 4 * pi / params.mass();
    return a * a * b * b / dv2;
}

//---------------------------------------------------------------------------//
//! Position, velocity, and acceleration dipole elements of one transition
struct DipoleElements
{
    ComplexVector3 x;
    ComplexVector3 xdot;
    ComplexVector3 xddot;
};

/*!
 * Convert a momentum matrix element to position/velocity/acceleration
 * elements via p = m xdot = i m omega x, with each time derivative a
 * factor of i omega.
 */
inline DipoleElements
element_chain(ComplexVector3 const& p_hat, double omega, double mass)
{
    if (!(mass > 0))
        throw ParameterError("mass must be > 0");
    DipoleElements out;
    if (norm_sq(p_hat) == 0)
        return out;
    if (omega == 0)
        throw DegenerateFrequencyError(
            "elastic transition (omega = 0) carries no dipole radiation");
    std::complex<double> const iw(0, omega);
    out.xdot = p_hat / mass;
    out.x = out.xdot / iw;
    out.xddot = iw * out.xdot;
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Momentum matrix element implied by the equation of motion and the Born
 * gradient element: xddot = (kappa Z e^2 / m) <p'|grad 1/r|p> and
 * p = m xddot / (i omega).
 */
inline ComplexVector3 born_momentum_element(PhysicalParams const& params,
                                            ScatterKinematics const& kin)
{
    double const omega = photon_energy(kin);
    if (omega == 0)
        throw DegenerateFrequencyError(
            "elastic transition (omega = 0) carries no dipole radiation");
    auto const grad = born_gradient_element(kin.p_in(), kin.p_out());
    return (params.force_strength() / std::complex<double>(0, omega)) * grad;
}

//---------------------------------------------------------------------------//
}  // namespace brems
