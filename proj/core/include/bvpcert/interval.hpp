#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "bvpcert/errors.hpp"

namespace bvpcert {

namespace detail {

// Below this magnitude the error-free transformations used to detect inexact
// results can themselves underflow, so we fall back to unconditional widening.
inline constexpr double tiny_threshold = 0x1p-900;

inline double step_down(double x) noexcept
{
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

inline double step_up(double x) noexcept
{
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double overflow_down(double s, double a, double b) noexcept
{
    if (s > 0 && std::isfinite(a) && std::isfinite(b)) {
        return std::numeric_limits<double>::max();
    }
    return s;
}

inline double overflow_up(double s, double a, double b) noexcept
{
    if (s < 0 && std::isfinite(a) && std::isfinite(b)) {
        return std::numeric_limits<double>::lowest();
    }
    return s;
}

// Exact error of a + b in round-to-nearest (Knuth's TwoSum).
inline double two_sum_error(double a, double b, double s) noexcept
{
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

} // namespace detail

// Directed rounding without touching the FPU rounding mode: compute in
// round-to-nearest, recover the sign of the rounding error exactly, and step
// to the adjacent float only when the result was inexact in the wrong
// direction.
struct OutwardRounding {
    static constexpr bool rigorous = true;

    static double add_down(double a, double b) noexcept
    {
        const double s = a + b;
        if (!std::isfinite(s)) {
            return detail::overflow_down(s, a, b);
        }
        return detail::two_sum_error(a, b, s) < 0 ? detail::step_down(s) : s;
    }
    static double add_up(double a, double b) noexcept
    {
        const double s = a + b;
        if (!std::isfinite(s)) {
            return detail::overflow_up(s, a, b);
        }
        return detail::two_sum_error(a, b, s) > 0 ? detail::step_up(s) : s;
    }
    static double sub_down(double a, double b) noexcept { return add_down(a, -b); }
    static double sub_up(double a, double b) noexcept { return add_up(a, -b); }

    static double mul_down(double a, double b) noexcept
    {
        const double p = a * b;
        if (a == 0 || b == 0) {
            return 0.0;
        }
        if (!std::isfinite(p)) {
            return detail::overflow_down(p, a, b);
        }
        if (std::fabs(p) < detail::tiny_threshold) {
            return detail::step_down(p);
        }
        return std::fma(a, b, -p) < 0 ? detail::step_down(p) : p;
    }
    static double mul_up(double a, double b) noexcept
    {
        const double p = a * b;
        if (a == 0 || b == 0) {
            return 0.0;
        }
        if (!std::isfinite(p)) {
            return detail::overflow_up(p, a, b);
        }
        if (std::fabs(p) < detail::tiny_threshold) {
            return detail::step_up(p);
        }
        return std::fma(a, b, -p) > 0 ? detail::step_up(p) : p;
    }

    static double div_down(double a, double b) noexcept
    {
        const double q = a / b;
        if (a == 0) {
            return 0.0;
        }
        if (!std::isfinite(q)) {
            return detail::overflow_down(q, a, b);
        }
        if (std::fabs(q) < detail::tiny_threshold || std::fabs(a) < detail::tiny_threshold) {
            return detail::step_down(q);
        }
        // a - q*b is exact; the true quotient lies below q iff (a - q*b)/b < 0.
        const double r = std::fma(-q, b, a);
        return (r < 0) != (b < 0) && r != 0 ? detail::step_down(q) : q;
    }
    static double div_up(double a, double b) noexcept
    {
        const double q = a / b;
        if (a == 0) {
            return 0.0;
        }
        if (!std::isfinite(q)) {
            return detail::overflow_up(q, a, b);
        }
        if (std::fabs(q) < detail::tiny_threshold || std::fabs(a) < detail::tiny_threshold) {
            return detail::step_up(q);
        }
        const double r = std::fma(-q, b, a);
        return (r > 0) != (b < 0) && r != 0 ? detail::step_up(q) : q;
    }

    static double sqrt_down(double x) noexcept
    {
        const double s = std::sqrt(x);
        if (x == 0 || !std::isfinite(s)) {
            return s;
        }
        if (x < detail::tiny_threshold) {
            return detail::step_down(s);
        }
        return std::fma(-s, s, x) < 0 ? detail::step_down(s) : s;
    }
    static double sqrt_up(double x) noexcept
    {
        const double s = std::sqrt(x);
        if (x == 0 || !std::isfinite(s)) {
            return s;
        }
        if (x < detail::tiny_threshold) {
            return detail::step_up(s);
        }
        return std::fma(-s, s, x) > 0 ? detail::step_up(s) : s;
    }
};

// Plain round-to-nearest. Used for approximate ("fast float") bound runs.
struct NearestRounding {
    static constexpr bool rigorous = false;

    static double add_down(double a, double b) noexcept { return a + b; }
    static double add_up(double a, double b) noexcept { return a + b; }
    static double sub_down(double a, double b) noexcept { return a - b; }
    static double sub_up(double a, double b) noexcept { return a - b; }
    static double mul_down(double a, double b) noexcept { return a * b; }
    static double mul_up(double a, double b) noexcept { return a * b; }
    static double div_down(double a, double b) noexcept { return a / b; }
    static double div_up(double a, double b) noexcept { return a / b; }
    static double sqrt_down(double x) noexcept { return std::sqrt(x); }
    static double sqrt_up(double x) noexcept { return std::sqrt(x); }
};

// Closed interval [lo, hi] of doubles. Every operation returns an enclosure of
// the exact real result for all real representatives of its operands.
template <class Rounding>
class BasicInterval {
public:
    using rounding = Rounding;

    constexpr BasicInterval() noexcept = default;
    // NOLINTNEXTLINE(google-explicit-constructor)
    constexpr BasicInterval(double x) : lo_(x), hi_(x)
    {
        if (std::isnan(x)) {
            throw DomainError("interval endpoint is NaN");
        }
    }
    BasicInterval(double lo, double hi) : lo_(lo), hi_(hi)
    {
        if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
            throw DomainError("invalid interval endpoints");
        }
    }
    template <class Other>
    explicit BasicInterval(const BasicInterval<Other> &other) noexcept : lo_(other.lo()), hi_(other.hi())
    {
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    // Midpoint (non-rigorous, used to extract floating approximations).
    double mid() const noexcept
    {
        if (lo_ == -hi_) {
            return 0.0;
        }
        return 0.5 * lo_ + 0.5 * hi_;
    }
    double width() const noexcept { return Rounding::sub_up(hi_, lo_); }
    // Upper bound on |x| for x in the interval.
    double mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }
    // Lower bound on |x| for x in the interval.
    double mig() const noexcept
    {
        if (lo_ <= 0 && hi_ >= 0) {
            return 0.0;
        }
        return std::min(std::fabs(lo_), std::fabs(hi_));
    }
    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool contains(const BasicInterval &x) const noexcept { return lo_ <= x.lo_ && x.hi_ <= hi_; }
    bool contains_zero() const noexcept { return contains(0.0); }
    bool is_point() const noexcept { return lo_ == hi_; }

    BasicInterval operator-() const noexcept { return raw(-hi_, -lo_); }

    friend BasicInterval operator+(const BasicInterval &a, const BasicInterval &b) noexcept
    {
        return raw(Rounding::add_down(a.lo_, b.lo_), Rounding::add_up(a.hi_, b.hi_));
    }
    friend BasicInterval operator-(const BasicInterval &a, const BasicInterval &b) noexcept
    {
        return raw(Rounding::sub_down(a.lo_, b.hi_), Rounding::sub_up(a.hi_, b.lo_));
    }
    friend BasicInterval operator*(const BasicInterval &a, const BasicInterval &b) noexcept
    {
        if (a.lo_ >= 0 && b.lo_ >= 0) {
            return raw(Rounding::mul_down(a.lo_, b.lo_), Rounding::mul_up(a.hi_, b.hi_));
        }
        const double lo = std::min({Rounding::mul_down(a.lo_, b.lo_), Rounding::mul_down(a.lo_, b.hi_),
                                    Rounding::mul_down(a.hi_, b.lo_), Rounding::mul_down(a.hi_, b.hi_)});
        const double hi = std::max({Rounding::mul_up(a.lo_, b.lo_), Rounding::mul_up(a.lo_, b.hi_),
                                    Rounding::mul_up(a.hi_, b.lo_), Rounding::mul_up(a.hi_, b.hi_)});
        return raw(lo, hi);
    }
    friend BasicInterval operator/(const BasicInterval &a, const BasicInterval &b)
    {
        if (b.contains_zero()) {
            throw DomainError("division by an interval containing zero");
        }
        const double lo = std::min({Rounding::div_down(a.lo_, b.lo_), Rounding::div_down(a.lo_, b.hi_),
                                    Rounding::div_down(a.hi_, b.lo_), Rounding::div_down(a.hi_, b.hi_)});
        const double hi = std::max({Rounding::div_up(a.lo_, b.lo_), Rounding::div_up(a.lo_, b.hi_),
                                    Rounding::div_up(a.hi_, b.lo_), Rounding::div_up(a.hi_, b.hi_)});
        return raw(lo, hi);
    }

    BasicInterval &operator+=(const BasicInterval &b) noexcept { return *this = *this + b; }
    BasicInterval &operator-=(const BasicInterval &b) noexcept { return *this = *this - b; }
    BasicInterval &operator*=(const BasicInterval &b) noexcept { return *this = *this * b; }
    BasicInterval &operator/=(const BasicInterval &b) { return *this = *this / b; }

    friend bool operator==(const BasicInterval &a, const BasicInterval &b) noexcept
    {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    friend std::ostream &operator<<(std::ostream &os, const BasicInterval &x)
    {
        return os << '[' << x.lo_ << ", " << x.hi_ << ']';
    }

    // Endpoints are trusted: used internally after directed-rounded arithmetic.
    static BasicInterval raw(double lo, double hi) noexcept
    {
        BasicInterval r;
        r.lo_ = lo;
        r.hi_ = hi;
        return r;
    }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

using Interval = BasicInterval<OutwardRounding>;
using FastInterval = BasicInterval<NearestRounding>;

template <class R>
BasicInterval<R> hull(const BasicInterval<R> &a, const BasicInterval<R> &b) noexcept
{
    return BasicInterval<R>::raw(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

// Enclosure of {|x| : x in a}.
template <class R>
BasicInterval<R> abs(const BasicInterval<R> &a) noexcept
{
    return BasicInterval<R>::raw(a.mig(), a.mag());
}

// Enclosure of {max(x, y)}.
template <class R>
BasicInterval<R> max(const BasicInterval<R> &a, const BasicInterval<R> &b) noexcept
{
    return BasicInterval<R>::raw(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

template <class R>
BasicInterval<R> sqrt(const BasicInterval<R> &a)
{
    if (a.lo() < 0) {
        throw DomainError("square root of an interval with negative part");
    }
    return BasicInterval<R>::raw(R::sqrt_down(a.lo()), R::sqrt_up(a.hi()));
}

// Enclosure of x^k for x in a, k >= 0.
template <class R>
BasicInterval<R> pow(const BasicInterval<R> &a, int k)
{
    if (k < 0) {
        throw DomainError("negative integer power");
    }
    if (k == 0) {
        return BasicInterval<R>(1.0);
    }
    if (k % 2 == 0) {
        // Even powers of a sign-straddling interval are nonnegative.
        const auto m = abs(a);
        BasicInterval<R> r = m;
        for (int i = 1; i < k; ++i) {
            r = r * m;
        }
        return r;
    }
    BasicInterval<R> r = a;
    for (int i = 1; i < k; ++i) {
        r = r * a;
    }
    return r;
}

// Interval [-r, r] for r >= 0.
template <class I>
I symmetric(double r)
{
    return I(-r, r);
}

// Upper bound on the exact value of x (x is an enclosure).
template <class R>
double upper(const BasicInterval<R> &x) noexcept
{
    return x.hi();
}

} // namespace bvpcert
