//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/Vector.hh
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace brems
{
//---------------------------------------------------------------------------//
/*!
 * Fixed three-component vector over a real or complex field.
 */
template<class T>
struct Vector3
{
    using value_type = T;

    std::array<T, 3> data{};

    constexpr T& operator[](std::size_t i) { return data[i]; }
    constexpr T const& operator[](std::size_t i) const { return data[i]; }

    constexpr Vector3& operator+=(Vector3 const& o)
    {
        for (std::size_t i = 0; i < 3; ++i)
            data[i] += o.data[i];
        return *this;
    }
    constexpr Vector3& operator-=(Vector3 const& o)
    {
        for (std::size_t i = 0; i < 3; ++i)
            data[i] -= o.data[i];
        return *this;
    }
    template<class S>
    constexpr Vector3& operator*=(S s)
    {
        for (auto& c : data)
            c *= s;
        return *this;
    }

    friend constexpr bool operator==(Vector3 const&, Vector3 const&) = default;
};

using Real3 = Vector3<double>;
using ComplexVector3 = Vector3<std::complex<double>>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

template<class T>
constexpr Vector3<T> operator+(Vector3<T> a, Vector3<T> const& b)
{
    return a += b;
}

template<class T>
constexpr Vector3<T> operator-(Vector3<T> a, Vector3<T> const& b)
{
    return a -= b;
}

template<class T>
constexpr Vector3<T> operator-(Vector3<T> a)
{
    for (auto& c : a.data)
        c = -c;
    return a;
}

template<class T>
constexpr Vector3<T> operator*(double s, Vector3<T> a)
{
    return a *= s;
}

template<class T>
constexpr Vector3<T> operator*(Vector3<T> a, double s)
{
    return a *= s;
}

template<class T>
constexpr Vector3<T> operator/(Vector3<T> a, double s)
{
    for (auto& c : a.data)
        c /= s;
    return a;
}

//! Complex scalar times a vector of either field
template<class T>
inline ComplexVector3 operator*(std::complex<double> s, Vector3<T> const& a)
{
    ComplexVector3 r;
    for (std::size_t i = 0; i < 3; ++i)
        r[i] = s * a[i];
    return r;
}

inline ComplexVector3
operator/(ComplexVector3 a, std::complex<double> s)
{
    for (auto& c : a.data)
        c /= s;
    return a;
}

//---------------------------------------------------------------------------//
constexpr double dot(Real3 const& a, Real3 const& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

constexpr Real3 cross(Real3 const& a, Real3 const& b)
{
    return {{a[1] * b[2] - a[2] * b[1],
             a[2] * b[0] - a[0] * b[2],
             a[0] * b[1] - a[1] * b[0]}};
}

//! Squared Euclidean (Hermitian) norm
template<class T>
inline double norm_sq(Vector3<T> const& a)
{
    double r = 0;
    for (auto const& c : a.data)
        r += std::norm(c);
    return r;
}

template<class T>
inline double norm(Vector3<T> const& a)
{
    return std::sqrt(norm_sq(a));
}

//! Lift a real vector into the complex field
inline ComplexVector3 to_complex(Real3 const& a)
{
    return {{a[0], a[1], a[2]}};
}

//! True if every component is finite
template<class T>
inline bool is_finite(Vector3<T> const& a)
{
    for (auto const& c : a.data)
    {
        if constexpr (std::is_same_v<T, double>)
        {
            if (!std::isfinite(c))
                return false;
        }
        else
        {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                return false;
        }
    }
    return true;
}

//---------------------------------------------------------------------------//
}  // namespace brems
