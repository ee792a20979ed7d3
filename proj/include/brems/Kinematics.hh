//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/Kinematics.hh
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "Error.hh"
#include "Vector.hh"

namespace brems
{
//---------------------------------------------------------------------------//
// CONSTANTS
//---------------------------------------------------------------------------//

inline constexpr double pi = std::numbers::pi;

//! Ratio Ze^2 / min(v, v') above which the Born approximation is flagged
inline constexpr double default_born_threshold = 0.1;

//---------------------------------------------------------------------------//
/*!
 * Charge, coupling, and mass of the scattering problem in natural units.
 *
 * The Coulomb center has charge -Ze; the potential seen by the particle is
 * \f$ V(r) = -\kappa Z e^2 / r \f$ and the force is
 * \f$ \kappa Z e^2 \nabla (1/r) \f$ with \f$ \kappa \f$ the
 * `coulomb_prefactor`. The default \f$ \kappa = 1/2 \f$ reproduces the
 * closed-form Born power \f$ (4/3) Z^2 e^6 / m \f$; set it to 1 for the
 * textbook Hamiltonian, which scales every radiated quantity by
 * \f$ 4\kappa^2 \f$.
 *
 * A zero coupling is accepted so that the free (non-radiating) limit can be
 * evaluated.
 */
class PhysicalParams
{
  public:
    PhysicalParams(double z_charge,
                   double e_squared,
                   double mass,
                   double coulomb_prefactor = 0.5)
        : z_(z_charge), e2_(e_squared), m_(mass), prefactor_(coulomb_prefactor)
    {
        auto require = [](bool ok, char const* what) {
            if (!ok)
                throw ParameterError(what);
        };
        require(z_ > 0 && std::isfinite(z_), "charge number Z must be > 0");
        require(e2_ >= 0 && std::isfinite(e2_), "coupling e^2 must be >= 0");
        require(m_ > 0 && std::isfinite(m_), "mass must be > 0");
        require(prefactor_ > 0 && std::isfinite(prefactor_),
                "Coulomb prefactor must be > 0");
    }

    double z_charge() const { return z_; }
    double e_squared() const { return e2_; }
    double mass() const { return m_; }
    double coulomb_prefactor() const { return prefactor_; }

    //! Strength of the central force, kappa * Z * e^2
    double force_strength() const { return prefactor_ * z_ * e2_; }

    friend bool
    operator==(PhysicalParams const&, PhysicalParams const&) = default;

  private:
    double z_;
    double e2_;
    double m_;
    double prefactor_;
};

//---------------------------------------------------------------------------//
/*!
 * Incoming and outgoing particle momenta for one emission event.
 */
class ScatterKinematics
{
  public:
    ScatterKinematics(Real3 const& p_in, Real3 const& p_out, double mass)
        : p_in_(p_in), p_out_(p_out), m_(mass)
    {
        if (!(m_ > 0))
            throw ParameterError("mass must be > 0");
        if (!(norm(p_in_) > 0))
            throw ParameterError(
                "incoming momentum must be nonzero (flux v = p/m)");
    }

    Real3 const& p_in() const { return p_in_; }
    Real3 const& p_out() const { return p_out_; }
    double mass() const { return m_; }

    Real3 v_in() const { return p_in_ / m_; }
    Real3 v_out() const { return p_out_ / m_; }
    double energy_in() const { return norm_sq(p_in_) / (2 * m_); }
    double energy_out() const { return norm_sq(p_out_) / (2 * m_); }

  private:
    Real3 p_in_;
    Real3 p_out_;
    double m_;
};

//---------------------------------------------------------------------------//
/*!
 * Photon wavevector; the frequency is always |k|.
 */
class PhotonMode
{
  public:
    explicit PhotonMode(Real3 const& k_vec) : k_(k_vec), omega_(norm(k_vec))
    {
    }

    Real3 const& k_vec() const { return k_; }
    double omega() const { return omega_; }

  private:
    Real3 k_;
    double omega_;
};

//---------------------------------------------------------------------------//
//! Closed interval of speeds
struct SpeedInterval
{
    double lower;
    double upper;
};

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//
inline Real3 velocity_from_momentum(Real3 const& p, double mass)
{
    if (!(mass > 0))
        throw ParameterError("mass must be > 0");
    return p / mass;
}

//---------------------------------------------------------------------------//
/*!
 * Energy carried off by the photon, E_p - E_p'.
 *
 * Negative values mean the outgoing state lies above the incoming one; the
 * caller decides whether that is an error.
 */
inline double photon_energy(ScatterKinematics const& kin)
{
    return (norm_sq(kin.p_in()) - norm_sq(kin.p_out())) / (2 * kin.mass());
}

//---------------------------------------------------------------------------//
//! Outgoing speeds reachable by emitting a photon of nonnegative energy
inline SpeedInterval final_speed_range(double v)
{
    if (!(v > 0))
        throw ParameterError("incoming speed must be > 0");
    return {0.0, v};
}

//! Largest photon energy available to a particle of speed v
inline double max_photon_energy(double mass, double v)
{
    return 0.5 * mass * v * v;
}

//---------------------------------------------------------------------------//
/*!
 * Born expansion parameter Z e^2 / min(v, v').
 *
 * Values at or above `default_born_threshold` signal that plane waves are a
 * poor substitute for Coulomb waves; this is a warning, not an error.
 */
inline double
born_validity_ratio(PhysicalParams const& params, double v, double v_prime)
{
    if (!(v > 0) || !(v_prime > 0))
        throw ParameterError("speeds in the Born validity ratio must be > 0");
    return params.z_charge() * params.e_squared() / std::min(v, v_prime);
}

//---------------------------------------------------------------------------//
/*!
 * Momentum transfer for p = p_mag zhat and |p'| = x p_mag at a given q^2.
 *
 * The argument and result components are in units of p_mag. Each component
 * is formed without cancellation, so forward transfers with
 * q^2 ~ (1 - x)^2 keep full relative precision.
 */
inline Real3 shell_transfer(double x, double q2)
{
    double const one_minus = (q2 - (1 - x) * (1 - x)) / (2 * x);
    double const one_plus = ((1 + x) * (1 + x) - q2) / (2 * x);
    double const sin_theta = std::sqrt(std::max(0.0, one_minus * one_plus));
    return Real3{{x * sin_theta, 0, -0.5 * ((1 - x) * (1 + x) + q2)}};
}

//---------------------------------------------------------------------------//
}  // namespace brems
