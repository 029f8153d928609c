#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "bvpcert/interval.hpp"
#include "bvpcert/interval_matrix.hpp"
#include "bvpcert/taylor.hpp"
#include "oracle.hpp"

using namespace bvpcert;
using oracle::Big;
using oracle::big;

namespace {

constexpr int samples = 100000;

struct Draw {
    Interval x;
    double px;
};

// Random interval plus a random double inside it.
Draw draw(std::mt19937_64 &rng, int emin, int emax, bool positive = false)
{
    double a = oracle::random_double(rng, emin, emax);
    double b = oracle::random_double(rng, emin, emax);
    std::bernoulli_distribution point(0.1);
    if (point(rng)) {
        b = a;
    }
    if (positive) {
        a = std::fabs(a);
        b = std::fabs(b);
    }
    if (a > b) {
        std::swap(a, b);
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p = std::clamp(a + u(rng) * (b - a), a, b);
    return {Interval(a, b), std::isfinite(p) ? p : a};
}

bool encloses(const Interval &r, const Big &exact)
{
    return big(r.lo()) <= exact && exact <= big(r.hi());
}

template <class Op, class Exact>
int binary_violations(std::uint64_t seed, int emin, int emax, Op op, Exact exact, bool nonzero_rhs = false)
{
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int i = 0; i < samples; ++i) {
        const auto a = draw(rng, emin, emax);
        auto b = draw(rng, emin, emax);
        if (nonzero_rhs) {
            while (b.x.contains_zero()) {
                b = draw(rng, emin, emax);
            }
        }
        const Interval r = op(a.x, b.x);
        if (!encloses(r, exact(big(a.px), big(b.px))) || !encloses(r, exact(big(a.x.lo()), big(b.x.hi())))) {
            ++bad;
        }
    }
    return bad;
}

} // namespace

TEST_SUITE("interval")
{
    TEST_CASE("addition encloses the exact sum")
    {
        auto op = [](const Interval &a, const Interval &b) { return a + b; };
        auto ex = [](const Big &a, const Big &b) { return Big(a + b); };
        CHECK(binary_violations(1, -60, 60, op, ex) == 0);
        // tiny and subnormal magnitudes, where the error term itself underflows
        CHECK(binary_violations(2, -1074, -1000, op, ex) == 0);
    }

    TEST_CASE("subtraction encloses the exact difference")
    {
        auto op = [](const Interval &a, const Interval &b) { return a - b; };
        auto ex = [](const Big &a, const Big &b) { return Big(a - b); };
        CHECK(binary_violations(3, -60, 60, op, ex) == 0);
        CHECK(binary_violations(4, -1074, -1000, op, ex) == 0);
    }

    TEST_CASE("multiplication encloses the exact product")
    {
        auto op = [](const Interval &a, const Interval &b) { return a * b; };
        auto ex = [](const Big &a, const Big &b) { return Big(a * b); };
        CHECK(binary_violations(5, -60, 60, op, ex) == 0);
        CHECK(binary_violations(6, -560, -500, op, ex) == 0);
    }

    TEST_CASE("division encloses the exact quotient")
    {
        auto op = [](const Interval &a, const Interval &b) { return a / b; };
        auto ex = [](const Big &a, const Big &b) { return Big(a / b); };
        CHECK(binary_violations(7, -60, 60, op, ex, true) == 0);
        CHECK(binary_violations(8, -540, -500, op, ex, true) == 0);
    }

    TEST_CASE("sqrt encloses the exact root")
    {
        std::mt19937_64 rng(9);
        int bad = 0;
        for (int i = 0; i < samples; ++i) {
            const auto a = draw(rng, -1074, 1000, true);
            const Interval r = sqrt(a.x);
            if (!encloses(r, Big(sqrt(big(a.px)))) || !encloses(r, Big(sqrt(big(a.x.lo()))))) {
                ++bad;
            }
        }
        CHECK(bad == 0);
    }

    TEST_CASE("integer powers enclose the exact power")
    {
        std::mt19937_64 rng(10);
        std::uniform_int_distribution<int> k(0, 6);
        int bad = 0;
        for (int i = 0; i < samples; ++i) {
            const auto a = draw(rng, -40, 40);
            const int e = k(rng);
            const Interval r = pow(a.x, e);
            Big p = 1;
            for (int j = 0; j < e; ++j) {
                p *= big(a.px);
            }
            if (!encloses(r, p)) {
                ++bad;
            }
        }
        CHECK(bad == 0);
    }

    TEST_CASE("overflow rounds outward to infinity")
    {
        const double big_d = std::numeric_limits<double>::max();
        const Interval r = Interval(big_d) + Interval(big_d);
        CHECK(r.hi() == std::numeric_limits<double>::infinity());
        CHECK(r.lo() == big_d);
    }

    TEST_CASE("fast mode matches rigorous mode on exact operations")
    {
        CHECK((FastInterval(1.5) + FastInterval(2.25)) == FastInterval(3.75));
        CHECK((Interval(1.5) * Interval(2.0)) == Interval(3.0));
        const Interval third = Interval(1.0) / Interval(3.0);
        CHECK(third.lo() < third.hi());
        CHECK(std::nextafter(third.lo(), 1.0) == third.hi());
    }

    TEST_CASE("invalid endpoints are rejected")
    {
        CHECK_THROWS_AS(Interval(2.0, 1.0), DomainError);
        CHECK_THROWS_AS(Interval(std::nan("")), DomainError);
        CHECK_THROWS_AS(Interval(1.0) / Interval(-1.0, 1.0), DomainError);
    }

    TEST_CASE("weighted norms")
    {
        IMatrix m(2, 2);
        m(0, 0) = Interval(1.0);
        m(0, 1) = Interval(-2.0, 3.0);
        m(1, 0) = Interval(4.0);
        m(1, 1) = Interval(0.5);
        const WeightMatrix w({1.0, 0.25});
        // |W M W^-1| row sums: 1 + 3*4 = 13, 0.25*4 + 0.5 = 1.5
        CHECK(weighted_inf_norm(m, w).hi() == doctest::Approx(13.0));
        CHECK(weighted_inf_norm(m, w).hi() >= 13.0);
        IMatrix v(2, 1);
        v(0, 0) = Interval(-0.5);
        v(1, 0) = Interval(8.0);
        CHECK(vector_norm(v, w).hi() >= 2.0);
        CHECK(vector_norm(v, w).hi() == doctest::Approx(2.0));
    }
}

TEST_SUITE("taylor")
{
    TEST_CASE("E and F of a constant matrix enclose the exponential series")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 3;
            const std::size_t m = 15;
            Eigen::MatrixXd A(n, n);
            for (Eigen::Index i = 0; i < 3; ++i) {
                for (Eigen::Index j = 0; j < 3; ++j) {
                    A(i, j) = u(rng);
                }
            }
            TaylorData<Interval> a;
            a.center = 0.5;
            a.halfwidth = 0.01;
            a.coeffs.assign(m, IMatrix::zero(n, n));
            a.coeffs[0] = IMatrix::from(A);
            a.remainder = IMatrix::zero(n, n);
            const auto E = taylor_E(a, m);
            const auto F = taylor_F(a, m);
            REQUIRE(E.degree() == m);

            // A^k / k! and (-A)^k / k! in 400-bit arithmetic
            std::vector<Big> P(n * n, Big(0)), Q(n * n, Big(0));
            for (std::size_t i = 0; i < n; ++i) {
                P[i * n + i] = 1;
                Q[i * n + i] = 1;
            }
            for (std::size_t k = 0; k <= m; ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        const auto &e = E.coeff(k)(i, j);
                        const auto &f = F.coeff(k)(i, j);
                        CHECK(big(e.lo()) <= P[i * n + j]);
                        CHECK(P[i * n + j] <= big(e.hi()));
                        CHECK(big(f.lo()) <= Q[i * n + j]);
                        CHECK(Q[i * n + j] <= big(f.hi()));
                    }
                }
                std::vector<Big> P2(n * n, Big(0)), Q2(n * n, Big(0));
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        for (std::size_t l = 0; l < n; ++l) {
                            P2[i * n + j] += P[i * n + l] * big(A(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)));
                            Q2[i * n + j] -= Q[i * n + l] * big(A(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)));
                        }
                        P2[i * n + j] /= static_cast<int>(k + 1);
                        Q2[i * n + j] /= static_cast<int>(k + 1);
                    }
                }
                P = P2;
                Q = Q2;
            }
        }
    }

    TEST_CASE("polynomial evaluation encloses point values")
    {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<IMatrix> c;
        std::vector<double> cd;
        for (int k = 0; k < 8; ++k) {
            cd.push_back(u(rng));
            IMatrix x(1, 1);
            x(0, 0) = Interval(cd.back());
            c.push_back(x);
        }
        const MatrixPolynomial<Interval> p(0.3, 0.1, c);
        for (int i = 0; i < 1000; ++i) {
            const double t = 0.2 + 0.2 * (u(rng) + 1) / 2;
            Big exact = 0;
            const Big tau = big(t) - big(0.3);
            Big tk = 1;
            for (double ck : cd) {
                exact += big(ck) * tk;
                tk *= tau;
            }
            const auto v = p.evaluate(t)(0, 0);
            CHECK(big(v.lo()) <= exact);
            CHECK(exact <= big(v.hi()));
            const auto r = p.range()(0, 0);
            CHECK(big(r.lo()) <= exact);
            CHECK(exact <= big(r.hi()));
        }
    }

    TEST_CASE("misaligned polynomials are rejected")
    {
        const MatrixPolynomial<Interval> p(0.5, 0.1, {IMatrix::identity(2)});
        const MatrixPolynomial<Interval> q(0.4, 0.1, {IMatrix::identity(2)});
        CHECK_THROWS_AS(p + q, AlignmentError);
    }
}
