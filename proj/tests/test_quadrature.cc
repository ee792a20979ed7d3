//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the bremsline developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_quadrature.cc
//---------------------------------------------------------------------------//
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "brems/EffectiveAction.hh"
#include "brems/Quadrature.hh"
#include "oracles/Oracles.hh"

using namespace brems;
using C = std::complex<double>;

//---------------------------------------------------------------------------//
TEST(Integrate1d, Polynomial)
{
    auto r = integrate_1d([](double x) { return x; }, 0.0, 1.0, 1e-12);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 0.5, 1e-14);
    EXPECT_GE(r.evaluations, 1);
}

TEST(Integrate1d, LogAtLowerEnd)
{
    auto r = integrate_1d([](double x) { return std::log(x); }, 0.0, 1.0,
                          Tolerance::relative(1e-12), EndpointHint::log_at_a);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, -1.0, 1e-10);
}

TEST(Integrate1d, SpeedIntegralAgainstOracles)
{
    // Independent references first: double-exponential and mapped Simpson
    double const ts = oracle::tanh_sinh_speed_integral();
    double const simpson = oracle::composite_speed_integral();
    EXPECT_NEAR(ts, 1.0, 1e-13);
    EXPECT_NEAR(simpson, 1.0, 1e-12);

    auto r = integrate_1d(oracle::speed_log_integrand, 0.0, 1.0,
                          Tolerance::relative(1e-10), EndpointHint::log_at_b);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, ts, 1e-8);
    EXPECT_NEAR(r.value, 1.0, 1e-8);
}

TEST(Integrate1d, BothEndpointsHint)
{
    // int_0^1 log(x) log(1-x) dx = 2 - pi^2/6
    auto r = integrate_1d(
        [](double x) { return std::log(x) * std::log1p(-x); }, 0.0, 1.0,
        Tolerance::relative(1e-11), EndpointHint::both);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 2 - pi * pi / 6, 1e-10);
}

TEST(Integrate1d, ComplexSharedTree)
{
    auto r = integrate_1d([](double x) { return std::exp(C(0, 3 * x)); }, 0.0,
                          2.0, Tolerance::relative(1e-12));
    EXPECT_TRUE(r.converged);
    C const exact = (std::exp(C(0, 6)) - 1.0) / C(0, 3);
    EXPECT_NEAR(std::abs(r.value - exact), 0, 1e-12);
}

TEST(Integrate1d, Breakpoints)
{
    std::vector<double> pts{-1, 0, 1};
    auto r = integrate_1d([](double x) { return std::abs(x); }, pts,
                          Tolerance::relative(1e-12));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.evaluations, 42);
    EXPECT_NEAR(r.value, 1.0, 1e-14);
    std::vector<double> bad{0, 0};
    EXPECT_THROW(integrate_1d([](double x) { return x; }, bad, 1e-8),
                 ParameterError);
}

TEST(Integrate1d, RoundoffLimitedRequestStopsEarly)
{
    // 1e-17 is below the floor: fail fast instead of exhausting segments
    auto r = integrate_1d([](double x) { return std::exp(x); }, 0.0, 1.0,
                          Tolerance::relative(1e-17));
    EXPECT_FALSE(r.converged);
    EXPECT_LT(r.evaluations, 21 * 64);
    EXPECT_NEAR(r.value, std::exp(1.0) - 1, 1e-14);
}

TEST(Integrate1d, RejectsEmptyInterval)
{
    EXPECT_THROW(integrate_1d([](double x) { return x; }, 1.0, 1.0, 1e-8),
                 ParameterError);
    EXPECT_THROW(integrate_1d([](double x) { return x; }, 1.0, 0.0, 1e-8),
                 ParameterError);
}

TEST(Integrate1d, ExhaustionIsReportedNotHidden)
{
    // Non-integrable 1/x with a segment cap: must say it failed
    QuadLimits limits;
    limits.max_segments = 50;
    auto r = integrate_1d([](double x) { return 1 / x; }, 0.0, 1.0,
                          Tolerance::relative(1e-10), EndpointHint::none,
                          limits);
    EXPECT_FALSE(r.converged);
    EXPECT_GT(r.error_estimate, 1e-10 * std::abs(r.value));
}

TEST(Integrate1d, ConvergedImpliesEstimateWithinTolerance)
{
    std::vector<std::function<double(double)>> fs{
        [](double x) { return std::exp(x); },
        [](double x) { return std::sin(40 * x); },
        [](double x) { return std::sqrt(x); },
        [](double x) { return 1 / (1 + 100 * x * x); }};
    for (auto const& f : fs)
    {
        for (double tol : {1e-4, 1e-8, 1e-12})
        {
            auto r = integrate_1d(f, 0.0, 1.0, Tolerance::relative(tol));
            if (r.converged)
            {
                EXPECT_LE(r.error_estimate, tol * std::abs(r.value));
            }
        }
    }
}

TEST(Integrate1d, Linearity)
{
    auto f = [](double x) { return std::cos(3 * x) + x * x; };
    auto g = [](double x) { return std::exp(-x) * std::sqrt(x); };
    double const a = 2.5;
    double const b = -0.75;
    double const tol = 1e-10;
    auto rf = integrate_1d(f, 0.0, 2.0, Tolerance::relative(tol));
    auto rg = integrate_1d(g, 0.0, 2.0, Tolerance::relative(tol));
    auto rs = integrate_1d([&](double x) { return a * f(x) + b * g(x); }, 0.0,
                           2.0, Tolerance::relative(tol));
    double const combo = a * rf.value + b * rg.value;
    EXPECT_NEAR(rs.value, combo, 2 * tol * std::abs(combo));
}

TEST(Integrate1d, IntervalAdditivity)
{
    auto f = [](double x) { return std::log1p(x) / (1 + x * x); };
    double const tol = 1e-11;
    auto whole = integrate_1d(f, 0.0, 3.0, Tolerance::relative(tol));
    auto left = integrate_1d(f, 0.0, 1.3, Tolerance::relative(tol));
    auto right = integrate_1d(f, 1.3, 3.0, Tolerance::relative(tol));
    EXPECT_NEAR(whole.value, left.value + right.value,
                2 * tol * std::abs(whole.value));
}

TEST(Integrate1d, HonestErrorEstimates)
{
    struct Case
    {
        std::function<double(double)> f;
        double a, b, exact;
        EndpointHint hint;
    };
    std::vector<Case> cases{
        {[](double x) { return x * x * x; }, 0, 2, 4, EndpointHint::none},
        {[](double x) { return std::exp(x); }, 0, 1, std::exp(1.0) - 1,
         EndpointHint::none},
        {[](double x) { return std::sin(x); }, 0, pi, 2, EndpointHint::none},
        {[](double x) { return 1 / (1 + x * x); }, 0, 1, pi / 4,
         EndpointHint::none},
        {[](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3,
         EndpointHint::log_at_a},
        {[](double x) { return std::log(x); }, 0, 1, -1, EndpointHint::log_at_a},
        {[](double x) { return 1 / std::sqrt(x); }, 0, 1, 2,
         EndpointHint::log_at_a},
        {oracle::speed_log_integrand, 0, 1, 1, EndpointHint::log_at_b},
        {[](double x) { return std::cos(50 * x); }, 0, 1, std::sin(50.0) / 50,
         EndpointHint::none},
        {[](double x) { return std::exp(-x * x); }, -3, 3,
         std::sqrt(pi) * std::erf(3.0), EndpointHint::none},
    };
    int honest = 0;
    int total = 0;
    for (auto const& c : cases)
    {
        for (double tol : {1e-6, 1e-9})
        {
            auto r = integrate_1d(c.f, c.a, c.b, Tolerance::relative(tol),
                                  c.hint);
            ++total;
            if (std::abs(r.value - c.exact) <= r.error_estimate)
                ++honest;
        }
    }
    EXPECT_GE(honest, static_cast<int>(std::ceil(0.95 * total)))
        << honest << " of " << total;
}

TEST(Integrate1d, Deterministic)
{
    auto f = [](double x) { return std::sin(1 / (x + 0.05)); };
    auto a = integrate_1d(f, 0.0, 1.0, Tolerance::relative(1e-10));
    auto b = integrate_1d(f, 0.0, 1.0, Tolerance::relative(1e-10));
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error_estimate, b.error_estimate);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

//---------------------------------------------------------------------------//
TEST(GaussLegendre, IntegratesPolynomialsExactly)
{
    GaussLegendre const gl(6);
    // Exact through degree 11
    for (int deg = 0; deg <= 11; ++deg)
    {
        double sum = 0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            sum += gl.weights[i] * std::pow(gl.nodes[i], deg);
        double const exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
        EXPECT_NEAR(sum, exact, 1e-14) << deg;
    }
}

TEST(IntegrateSphere, Examples)
{
    auto area = integrate_sphere([](Real3 const&) { return 1.0; }, 1e-12);
    EXPECT_TRUE(area.converged);
    EXPECT_NEAR(area.value, 4 * pi, 1e-12);

    auto z2 = integrate_sphere([](Real3 const& k) { return k[2] * k[2]; }, 1e-12);
    EXPECT_NEAR(z2.value, 4 * pi / 3, 1e-12);

    auto p11 = integrate_sphere([](Real3 const& k) { return 1 - k[0] * k[0]; },
                                1e-12);
    EXPECT_NEAR(p11.value, 8 * pi / 3, 1e-12);
}

TEST(IntegrateSphere, HigherDegree)
{
    // <x^4> over the sphere = 1/5
    auto r = integrate_sphere([](Real3 const& k) { return std::pow(k[0], 4); },
                              1e-13);
    EXPECT_NEAR(r.value, 4 * pi / 5, 1e-12);
}

TEST(IntegrateSphere, NonConvergenceFlagged)
{
    // A discontinuous cap converges slowly; a low order cap must fail
    auto r = integrate_sphere(
        [](Real3 const& k) { return k[2] > 0.3 ? 1.0 : 0.0; }, 1e-14, 16);
    EXPECT_FALSE(r.converged);
}

//---------------------------------------------------------------------------//
TEST(IntegrateTimeSquare, UnitArea)
{
    auto r = integrate_time_square([](double, double) { return C(1, 0); }, 2.0,
                                   Tolerance(1e-12, 1e-12), false);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(std::abs(r.value - 4.0), 0, 1e-12);
}

TEST(IntegrateTimeSquare, KernelMatchesClosedForm)
{
    double const lambda = 5;
    double const big = 200;
    auto r = integrate_time_square(
        [&](double t1, double t2) {
            return std::exp(C(0, lambda * std::abs(t2 - t1)));
        },
        big, Tolerance(1e-11, 5e-9), false);
    auto const exact = finite_time_kernel(lambda, big);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(std::abs(r.value - exact), 1e-8);
    EXPECT_LT(std::abs(exact - oracle::time_kernel_1d(lambda, big)), 1e-9);
}

TEST(IntegrateTimeSquare, DiagonalExclusionIsMeasureZero)
{
    auto f = [](double t1, double t2) {
        return std::exp(C(-0.1 * (t1 + t2), 0.7 * (t2 - t1)));
    };
    Tolerance const tol(1e-9, 1e-9);
    auto with = integrate_time_square(f, 10.0, tol, false);
    auto without = integrate_time_square(f, 10.0, tol, true);
    EXPECT_TRUE(with.converged);
    EXPECT_TRUE(without.converged);
    EXPECT_LT(std::abs(with.value - without.value), 2e-9);
}

TEST(IntegrateTimeSquare, RejectsNonPositiveDuration)
{
    EXPECT_THROW(integrate_time_square([](double, double) { return C(1); }, 0.0,
                                       1e-8, false),
                 ParameterError);
}
