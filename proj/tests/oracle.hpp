#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's own oracles.

#include <cmath>
#include <random>

#include <boost/math/special_functions/airy.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Dense>

namespace oracle {

// Wide enough that sums, products and small powers of doubles are exact.
using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400, boost::multiprecision::digit_base_2>>;
using Dec = boost::multiprecision::cpp_bin_float_50;

inline Big big(double x) { return Big(x); }

// Double with random sign, mantissa and binary exponent in [emin, emax].
inline double random_double(std::mt19937_64 &rng, int emin, int emax)
{
    std::uniform_real_distribution<double> mant(0.5, 1.0);
    std::uniform_int_distribution<int> ex(emin, emax);
    std::bernoulli_distribution neg(0.5);
    const double x = std::ldexp(mant(rng), ex(rng));
    return neg(rng) ? -x : x;
}

// y'' = y on [0, b], y(0) = 1, y(b) = 0, written in t = s / b as the state
// (y, dy/ds).
struct SinhProblem {
    double b;

    Eigen::Vector2d solution(double t) const
    {
        const Dec s = Dec(b) * Dec(t);
        const Dec sb = sinh(Dec(b));
        return {static_cast<double>(sinh(Dec(b) - s) / sb), static_cast<double>(-cosh(Dec(b) - s) / sb)};
    }
    // Columns solve the ODE with B0 X(0) + B1 X(1) = I.
    Eigen::Matrix2d fundamental(double t) const
    {
        const double s = b * t;
        const double sb = std::sinh(b);
        Eigen::Matrix2d m;
        m << std::sinh(b - s) / sb, std::sinh(s) / sb, -std::cosh(b - s) / sb, std::cosh(s) / sb;
        return m;
    }
    Eigen::Matrix2d fundamental_inverse(double t) const { return fundamental(t).inverse(); }
    Eigen::Matrix2d green(double t, double s) const
    {
        Eigen::Matrix2d b0 = Eigen::Matrix2d::Zero(), b1 = Eigen::Matrix2d::Zero();
        b0(0, 0) = 1;
        b1(1, 0) = 1;
        const Eigen::Matrix2d core = s <= t ? Eigen::Matrix2d(b0 * fundamental(0)) : Eigen::Matrix2d(-b1 * fundamental(1));
        return fundamental(t) * core * fundamental_inverse(s);
    }
};

// eps v'' = (t - 1/2) v, v(0) = v(1) = 1: v = c1 Ai(x) + c2 Bi(x) with
// x = (t - 1/2) eps^(-1/3). Evaluated with 50 digits.
struct AiryTurningPoint {
    double eps;
    Dec c1, c2, scale;

    explicit AiryTurningPoint(double e) : eps(e)
    {
        using boost::math::airy_ai;
        using boost::math::airy_bi;
        scale = pow(Dec(e), Dec(-1) / 3);
        const Dec xl = Dec(-0.5) * scale, xr = Dec(0.5) * scale;
        const Dec a11 = airy_ai(xl), a12 = airy_bi(xl), a21 = airy_ai(xr), a22 = airy_bi(xr);
        const Dec det = a11 * a22 - a12 * a21;
        c1 = (a22 - a12) / det;
        c2 = (a11 - a21) / det;
    }

    // (v, v')
    Eigen::Vector2d solution(double t) const
    {
        using boost::math::airy_ai;
        using boost::math::airy_ai_prime;
        using boost::math::airy_bi;
        using boost::math::airy_bi_prime;
        const Dec x = (Dec(t) - Dec(0.5)) * scale;
        const Dec v = c1 * airy_ai(x) + c2 * airy_bi(x);
        const Dec dv = (c1 * airy_ai_prime(x) + c2 * airy_bi_prime(x)) * scale;
        return {static_cast<double>(v), static_cast<double>(dv)};
    }
};

} // namespace oracle
