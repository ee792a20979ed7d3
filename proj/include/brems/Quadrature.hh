//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file brems/Quadrature.hh
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "Error.hh"
#include "Kinematics.hh"
#include "Vector.hh"

namespace brems
{
//---------------------------------------------------------------------------//
/*!
 * Mixed absolute/relative accuracy target.
 *
 * An estimate is accepted when it is below max(abs, rel * |value|). A single
 * number sets both, which for O(1) integrals is the usual "tolerance".
 */
struct Tolerance
{
    double rel;
    double abs;

    constexpr Tolerance(double tol) : rel(tol), abs(tol) {}  // NOLINT
    constexpr Tolerance(double rel_tol, double abs_tol)
        : rel(rel_tol), abs(abs_tol)
    {
    }

    static constexpr Tolerance relative(double rel_tol)
    {
        return {rel_tol, 0.0};
    }

    constexpr double target(double magnitude) const
    {
        return std::max(abs, rel * magnitude);
    }
};

//---------------------------------------------------------------------------//
/*!
 * Outcome of a numerical integration.
 *
 * `converged` is set only if the error estimate meets the requested
 * tolerance; callers that need a value regardless can still read it.
 */
template<class T>
struct QuadResult
{
    T value{};
    double error_estimate{0};
    long evaluations{0};
    bool converged{false};
};

//! Where an integrable logarithmic (or weaker) singularity sits
enum class EndpointHint
{
    none,
    log_at_a,
    log_at_b,
    both
};

struct QuadLimits
{
    int max_segments = 4000;
};

namespace detail
{
//---------------------------------------------------------------------------//
// 21-point Gauss-Kronrod rule (QUADPACK qk21 abscissae and weights)
inline constexpr double gk21_x[11] = {
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
};
inline constexpr double gk21_wk[11] = {
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980186730,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
};
// Ten-point Gauss weights for the odd-indexed Kronrod nodes
inline constexpr double gk21_wg[5] = {
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
};

template<class T>
inline double magnitude(T const& v)
{
    return std::abs(v);
}

//! Error is max(|K - G|, floor); the floor is the roundoff bound
template<class T>
struct Segment
{
    double a;
    double b;
    T value;
    double error;
    double floor;

    double reducible() const { return error - floor; }
};

//! Bisection only helps where the error exceeds its roundoff floor
template<class T>
struct SegmentByError
{
    bool operator()(Segment<T> const& l, Segment<T> const& r) const
    {
        return l.reducible() < r.reducible();
    }
};

template<class T, class G>
Segment<T> gk21(G& g, double a, double b)
{
    double const center = 0.5 * (a + b);
    double const half = 0.5 * (b - a);

    T const fc = g(center);
    T kronrod = gk21_wk[10] * fc;
    T gauss{};
    double resabs = gk21_wk[10] * magnitude(fc);
    for (int j = 0; j < 10; ++j)
    {
        double const dx = half * gk21_x[j];
        T const f1 = g(center - dx);
        T const f2 = g(center + dx);
        T const sum = f1 + f2;
        kronrod += gk21_wk[j] * sum;
        resabs += gk21_wk[j] * (magnitude(f1) + magnitude(f2));
        if (j % 2 == 1)
            gauss += gk21_wg[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    resabs *= std::abs(half);

    double const floor = 50 * std::numeric_limits<double>::epsilon() * resabs;
    double const err = std::max(magnitude(kronrod - gauss), floor);
    return {a, b, kronrod, err, floor};
}

//---------------------------------------------------------------------------//
/*!
 * Globally adaptive bisection over an initial set of breakpoints.
 */
template<class T, class G>
QuadResult<T> adapt(G& g,
                    std::span<double const> points,
                    Tolerance tol,
                    QuadLimits limits)
{
    QuadResult<T> result;
    std::vector<Segment<T>> heap;
    heap.reserve(points.size() + 64);
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
    {
        heap.push_back(gk21<T>(g, points[i], points[i + 1]));
        result.evaluations += 21;
    }
    SegmentByError<T> cmp;
    std::make_heap(heap.begin(), heap.end(), cmp);

    auto totals = [&heap] {
        std::pair<T, double> t{T{}, 0.0};
        for (auto const& s : heap)
        {
            t.first += s.value;
            t.second += s.error;
        }
        return t;
    };

    auto [value, error] = totals();
    while (error > tol.target(magnitude(value))
           && static_cast<int>(heap.size()) < limits.max_segments)
    {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Segment<T> worst = heap.back();
        double const mid = 0.5 * (worst.a + worst.b);
        if (!(worst.reducible() > 0) || !(mid > std::min(worst.a, worst.b))
            || !(mid < std::max(worst.a, worst.b)))
        {
            // Only roundoff left, or interval at machine resolution
            std::push_heap(heap.begin(), heap.end(), cmp);
            break;
        }
        heap.pop_back();
        auto left = gk21<T>(g, worst.a, mid);
        auto right = gk21<T>(g, mid, worst.b);
        result.evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
    }

    // Re-sum to avoid drift from the running updates; summing in sorted
    // order keeps the result independent of heap layout
    std::sort(heap.begin(), heap.end(), [](auto const& l, auto const& r) {
        return l.a < r.a;
    });
    std::tie(value, error) = totals();
    result.value = value;
    result.error_estimate = error;
    result.converged = error <= tol.target(magnitude(value));
    return result;
}

//---------------------------------------------------------------------------//
//! Flat-at-zero map exp(1 - 1/t) and its derivative
inline std::pair<double, double> flat_map(double t)
{
    if (t <= 0)
        return {0.0, 0.0};
    double const phi = std::exp(1 - 1 / t);
    return {phi, phi / (t * t)};
}

//---------------------------------------------------------------------------//
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Adaptive 21-point Gauss-Kronrod integration of a real or complex function
 * over a set of ordered breakpoints.
 *
 * Complex integrands share one subdivision tree for both parts. The
 * integrand is never evaluated at a breakpoint.
 */
template<class F>
auto integrate_1d(F&& f,
                  std::span<double const> points,
                  Tolerance tol,
                  QuadLimits limits = {})
    -> QuadResult<std::decay_t<std::invoke_result_t<F&, double>>>
{
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    if (points.size() < 2)
        throw ParameterError("integration needs at least two breakpoints");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
    {
        if (!(points[i] < points[i + 1]))
            throw ParameterError("integration breakpoints must increase");
    }
    return detail::adapt<T>(f, points, tol, limits);
}

//---------------------------------------------------------------------------//
/*!
 * Adaptive integration over [a, b] with optional endpoint treatment.
 *
 * With a hint, the interval is reparametrized by x = a + (b - a) phi(t)
 * where phi(t) = exp(1 - 1/t) is flat to all orders at t = 0, so
 * logarithmic and weak power singularities at the hinted end become
 * smooth and vanishing. Nodes that round onto a singular endpoint are
 * dropped; their weight is below machine resolution.
 */
template<class F>
auto integrate_1d(F&& f,
                  double a,
                  double b,
                  Tolerance tol,
                  EndpointHint hint = EndpointHint::none,
                  QuadLimits limits = {})
    -> QuadResult<std::decay_t<std::invoke_result_t<F&, double>>>
{
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    if (!(a < b))
        throw ParameterError("integration requires a < b");

    double const width = b - a;
    auto guarded = [&](double x, double jac) -> T {
        if (jac == 0 || !(x > a) || !(x < b))
            return T{};
        return f(x) * jac;
    };

    double const unit[2] = {0.0, 1.0};
    switch (hint)
    {
        case EndpointHint::none: {
            double const pts[2] = {a, b};
            return detail::adapt<T>(f, pts, tol, limits);
        }
        case EndpointHint::log_at_a: {
            auto g = [&](double t) {
                auto [phi, dphi] = detail::flat_map(t);
                return guarded(a + width * phi, width * dphi);
            };
            return detail::adapt<T>(g, unit, tol, limits);
        }
        case EndpointHint::log_at_b: {
            auto g = [&](double t) {
                auto [phi, dphi] = detail::flat_map(1 - t);
                return guarded(b - width * phi, width * dphi);
            };
            return detail::adapt<T>(g, unit, tol, limits);
        }
        case EndpointHint::both: {
            auto g = [&](double t) {
                auto [p0, d0] = detail::flat_map(t);
                auto [p1, d1] = detail::flat_map(1 - t);
                double const den = p0 + p1;
                if (den == 0)
                    return T{};
                double const psi = p0 / den;
                double const dpsi = (d0 * p1 + p0 * d1) / (den * den);
                return guarded(a + width * psi, width * dpsi);
            };
            return detail::adapt<T>(g, unit, tol, limits);
        }
    }
    return {};
}

//---------------------------------------------------------------------------//
/*!
 * Gauss-Legendre nodes and weights on [-1, 1].
 */
struct GaussLegendre
{
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n)
    {
        if (n < 1)
            throw ParameterError("Gauss-Legendre order must be >= 1");
        for (int i = 0; i < (n + 1) / 2; ++i)
        {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0;
            for (int iter = 0; iter < 100; ++iter)
            {
                double p0 = 1;
                double p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    double const pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                if (n == 1)
                    p0 = 1;
                dp = n * (x * p1 - p0) / (x * x - 1);
                double const dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            // Recompute derivative at the converged node
            double p0 = 1;
            double p1 = x;
            for (int k = 2; k <= n; ++k)
            {
                double const pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1);
            double const w = 2 / ((1 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if (n % 2 == 1)
            nodes[n / 2] = 0;
    }
};

//---------------------------------------------------------------------------//
/*!
 * Integrate a function of the unit vector over the full sphere.
 *
 * Product rule: Gauss-Legendre in cos(theta) with n nodes and the
 * trapezoid rule with 2n nodes in phi (exact for trigonometric polynomials
 * of degree < 2n). The order doubles until two successive estimates agree.
 */
template<class F>
auto integrate_sphere(F&& f, Tolerance tol, int max_order = 512)
    -> QuadResult<std::decay_t<std::invoke_result_t<F&, Real3 const&>>>
{
    using T = std::decay_t<std::invoke_result_t<F&, Real3 const&>>;
    QuadResult<T> result;

    auto rule = [&](int n) {
        GaussLegendre const gl(n);
        int const nphi = 2 * n;
        double const dphi = 2 * pi / nphi;
        T sum{};
        for (int i = 0; i < n; ++i)
        {
            double const mu = gl.nodes[i];
            double const s = std::sqrt(std::max(0.0, 1 - mu * mu));
            T ring{};
            for (int j = 0; j < nphi; ++j)
            {
                double const phi = j * dphi;
                ring += f(Real3{{s * std::cos(phi), s * std::sin(phi), mu}});
            }
            sum += (gl.weights[i] * dphi) * ring;
        }
        result.evaluations += static_cast<long>(n) * nphi;
        return sum;
    };

    int n = 4;
    T previous = rule(n);
    while (2 * n <= max_order)
    {
        n *= 2;
        T const current = rule(n);
        result.value = current;
        result.error_estimate = detail::magnitude(current - previous);
        if (result.error_estimate <= tol.target(detail::magnitude(current)))
        {
            result.converged = true;
            return result;
        }
        previous = current;
    }
    return result;
}

//---------------------------------------------------------------------------//
/*!
 * Integrate a complex function over the square [0, T]^2.
 *
 * The square is split along the diagonal t1 = t2 so that integrands with a
 * kink there (such as functions of |t2 - t1|) are smooth on each piece;
 * each piece is an iterated adaptive integral. With `exclude_diagonal` a
 * band |t2 - t1| < delta is dropped, where delta is chosen from the
 * tolerance so that the band's contribution is below a twentieth of it.
 */
template<class F>
QuadResult<std::complex<double>> integrate_time_square(F&& f,
                                                       double duration,
                                                       Tolerance tol,
                                                       bool exclude_diagonal)
{
    using C = std::complex<double>;
    if (!(duration > 0))
        throw ParameterError("time-square integration needs T > 0");

    double const big = duration;
    double band = 0;
    if (exclude_diagonal)
    {
        double fmax = 0;
        for (int i = 0; i <= 16; ++i)
        {
            double const t = big * i / 16.0;
            fmax = std::max(fmax, std::abs(C(f(t, t))));
        }
        double const scale = (tol.abs > 0) ? tol.abs
                                           : tol.rel * fmax * big * big;
        band = (fmax > 0) ? 0.05 * scale / (2 * big * fmax) : 0.0;
        band = std::min(band, 1e-3 * big);
    }

    // Inner rows get a tenth of the budget spread over the outer length
    Tolerance const inner_tol{tol.rel * 0.1, tol.abs * 0.1 / big};
    double inner_err = 0;
    long evaluations = 0;

    auto row = [&](double t2) -> C {
        C sum{};
        auto in_t1 = [&](double t1) -> C { return f(t1, t2); };
        double const lo_end = t2 - band;
        double const hi_start = t2 + band;
        if (lo_end > 0)
        {
            auto r = integrate_1d(in_t1, 0.0, lo_end, inner_tol);
            sum += r.value;
            inner_err = std::max(inner_err, r.error_estimate);
            evaluations += r.evaluations;
        }
        if (hi_start < big)
        {
            auto r = integrate_1d(in_t1, hi_start, big, inner_tol);
            sum += r.value;
            inner_err = std::max(inner_err, r.error_estimate);
            evaluations += r.evaluations;
        }
        return sum;
    };

    Tolerance const outer_tol{tol.rel * 0.5, tol.abs * 0.5};
    auto outer = integrate_1d(row, 0.0, big, outer_tol);
    QuadResult<C> result;
    result.value = outer.value;
    result.error_estimate = outer.error_estimate + 2 * big * inner_err;
    result.evaluations = evaluations + outer.evaluations;
    result.converged = result.error_estimate
                       <= tol.target(std::abs(result.value));
    return result;
}

//---------------------------------------------------------------------------//
}  // namespace brems
