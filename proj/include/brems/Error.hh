//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/Error.hh
//---------------------------------------------------------------------------//
#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace brems
{
//---------------------------------------------------------------------------//
/*!
 * Base class for all library errors.
 *
 * Errors fall in two families that the command-line tool maps onto exit
 * codes: invalid input (parameters, kinematics, validity gates) and
 * numerical failure (non-convergence, integrator breakdown).
 */
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;

    //! Whether the failure is numerical rather than caused by bad input
    virtual bool numerical() const noexcept { return false; }
};

//! Physical or numerical parameter out of its allowed domain
class ParameterError : public Error
{
  public:
    using Error::Error;
};

//! Kinematically forbidden configuration (e.g. elastic or uphill emission)
class KinematicError : public Error
{
  public:
    using Error::Error;
};

//! Zero momentum transfer where the Coulomb element is singular
class SingularTransferError : public KinematicError
{
  public:
    using KinematicError::KinematicError;
};

//! Conversion between dipole elements needs a nonzero transition frequency
class DegenerateFrequencyError : public KinematicError
{
  public:
    using KinematicError::KinematicError;
};

//! Requested regime lies outside where a comparison is meaningful
class ValidityError : public Error
{
  public:
    using Error::Error;
};

//! Negative imaginary part of the effective action
class UnitarityError : public Error
{
  public:
    using Error::Error;
};

//! Orbit window does not reach the asymptotic region
class SimulationWindowError : public Error
{
  public:
    using Error::Error;
};

//! Acceleration does not die off at the window edges
class SpectralLeakageError : public Error
{
  public:
    using Error::Error;
};

//---------------------------------------------------------------------------//
namespace detail
{
inline std::string format_estimate(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", value);
    return buf;
}
} // namespace detail

/*!
 * A numerical method did not reach the requested tolerance.
 */
class AccuracyError : public Error
{
  public:
    AccuracyError(std::string const& what, double achieved)
        : Error(what + " (achieved error estimate "
                + detail::format_estimate(achieved) + ")")
        , achieved_(achieved)
    {
    }

    bool numerical() const noexcept final { return true; }

    //! Error estimate reached before giving up
    double achieved() const noexcept { return achieved_; }

  private:
    double achieved_;
};

//! ODE integration broke down (step-size underflow, non-finite state)
class IntegrationError : public Error
{
  public:
    using Error::Error;
    bool numerical() const noexcept final { return true; }
};

//---------------------------------------------------------------------------//
}  // namespace brems
