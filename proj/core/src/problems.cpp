#include "bvpcert/problems.hpp"

#include <cmath>

namespace bvpcert {

namespace {

using R = OutwardRounding;

IMatrix point2(double a, double b, double c, double d)
{
    IMatrix m(2, 2);
    m(0, 0) = Interval(a);
    m(0, 1) = Interval(b);
    m(1, 0) = Interval(c);
    m(1, 1) = Interval(d);
    return m;
}

Eigen::MatrixXd first_row_selector()
{
    Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(2, 2);
    b0(0, 0) = 1.0;
    return b0;
}

Eigen::MatrixXd last_row_selector()
{
    Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(2, 2);
    b1(1, 0) = 1.0;
    return b1;
}

// Offset of the subinterval center from 1/2 as an enclosure.
Interval center_shift(const Mesh &mesh, std::size_t j)
{
    return Interval(mesh.mid(j)) - Interval(0.5);
}

template <class S>
S conv(const std::vector<S> &a, const std::vector<S> &b, std::size_t k)
{
    S s(0.0);
    for (std::size_t j = 0; j <= k; ++j) {
        s += a[j] * b[k - j];
    }
    return s;
}

// Full product of two coefficient arrays truncated to `len` terms.
template <class S>
std::vector<S> poly_mul(const std::vector<S> &a, const std::vector<S> &b, std::size_t len)
{
    std::vector<S> c(len, S(0.0));
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
            c[i + j] += a[i] * b[j];
        }
    }
    return c;
}

double json_number(const nlohmann::json &params, const char *key, double fallback)
{
    if (!params.contains(key) || params[key].is_null()) {
        return fallback;
    }
    if (!params[key].is_number()) {
        throw ConfigError(std::string("parameter '") + key + "' must be a number");
    }
    return params[key].get<double>();
}

} // namespace

Mesh::Mesh(std::vector<double> nodes) : nodes_(std::move(nodes))
{
    if (nodes_.size() < 2) {
        throw DomainError("mesh needs at least two nodes");
    }
    if (nodes_.front() != 0.0 || nodes_.back() != 1.0) {
        throw DomainError("mesh must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i] < nodes_[i + 1])) {
            throw DomainError("mesh nodes must be strictly increasing");
        }
    }
    const std::size_t n = nodes_.size() - 1;
    mids_.resize(n);
    widths_.resize(n);
    halfwidths_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = nodes_[j];
        const double b = nodes_[j + 1];
        const double c = 0.5 * a + 0.5 * b;
        mids_[j] = c;
        widths_[j] = R::sub_up(b, a);
        halfwidths_[j] = std::max(R::sub_up(b, c), R::sub_up(c, a));
    }
}

Mesh Mesh::uniform(std::size_t intervals)
{
    if (intervals == 0) {
        throw DomainError("mesh needs at least one subinterval");
    }
    std::vector<double> t(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        t[i] = static_cast<double>(i) / static_cast<double>(intervals);
    }
    t.back() = 1.0;
    return Mesh(std::move(t));
}

TaylorData<Interval> polynomial_taylor(double center, double halfwidth, std::vector<IMatrix> coeffs, std::size_t m)
{
    if (coeffs.empty()) {
        throw ShapeError("polynomial needs at least one coefficient");
    }
    const std::size_t rows = coeffs[0].rows();
    const std::size_t cols = coeffs[0].cols();
    TaylorData<Interval> out;
    out.center = center;
    out.halfwidth = halfwidth;
    out.remainder = IMatrix::zero(rows, cols);
    for (std::size_t k = 0; k < m; ++k) {
        out.coeffs.push_back(k < coeffs.size() ? coeffs[k] : IMatrix::zero(rows, cols));
    }
    if (coeffs.size() > m) {
        // sum_{k>=m} C_k tau^{k-m} over |tau| <= halfwidth, by Horner.
        const auto tau = symmetric<Interval>(halfwidth);
        IMatrix r = coeffs.back();
        for (std::size_t k = coeffs.size() - 1; k-- > m;) {
            r = r * tau;
            r += coeffs[k];
        }
        out.remainder = std::move(r);
    }
    return out;
}

LinearBVProblem turning_point(double eps)
{
    if (!(eps > 0) || !std::isfinite(eps)) {
        throw DomainError("eps must be positive");
    }
    LinearBVProblem p;
    p.id = "turning-point";
    p.params = {{"eps", eps}};
    p.n = 2;
    p.B0 = first_row_selector();
    p.B1 = last_row_selector();
    p.w = Eigen::Vector2d(1.0, 1.0);
    p.smoothness = std::numeric_limits<std::size_t>::max();
    p.a_taylor = [eps](const Mesh &mesh, std::size_t j, std::size_t m) {
        const Interval ie(eps);
        // v'' = (t - 1/2) v / eps.
        std::vector<IMatrix> c;
        auto a0 = point2(0, 1, 0, 0);
        a0(1, 0) = center_shift(mesh, j) / ie;
        c.push_back(a0);
        auto a1 = IMatrix::zero(2, 2);
        a1(1, 0) = Interval(1.0) / ie;
        c.push_back(a1);
        return polynomial_taylor(mesh.mid(j), mesh.halfwidth(j), std::move(c), m);
    };
    return p;
}

LinearBVProblem potential_well(double eps, double omega)
{
    if (!(eps > 0) || !std::isfinite(eps)) {
        throw DomainError("eps must be positive");
    }
    if (!std::isfinite(omega)) {
        throw DomainError("omega must be finite");
    }
    LinearBVProblem p;
    p.id = "potential-well";
    p.params = {{"eps", eps}, {"omega", omega}};
    p.n = 2;
    p.B0 = first_row_selector();
    p.B1 = last_row_selector();
    p.w = Eigen::Vector2d(1.0, 2.0);
    p.a_taylor = [eps, omega](const Mesh &mesh, std::size_t j, std::size_t m) {
        const Interval ie(eps);
        const Interval d = center_shift(mesh, j);
        const Interval om(omega);
        // v'' = (omega^2 - (t - 1/2)^2) v / eps with t - 1/2 = d + tau.
        std::vector<IMatrix> c;
        auto a0 = point2(0, 1, 0, 0);
        a0(1, 0) = (om * om - d * d) / ie;
        c.push_back(a0);
        auto a1 = IMatrix::zero(2, 2);
        a1(1, 0) = -(Interval(2.0) * d) / ie;
        c.push_back(a1);
        auto a2 = IMatrix::zero(2, 2);
        a2(1, 0) = -(Interval(1.0) / ie);
        c.push_back(a2);
        return polynomial_taylor(mesh.mid(j), mesh.halfwidth(j), std::move(c), m);
    };
    return p;
}

LinearBVProblem exact_test(double b)
{
    if (!(b > 0) || !std::isfinite(b)) {
        throw DomainError("b must be positive");
    }
    LinearBVProblem p;
    p.id = "exact-test";
    p.params = {{"b", b}};
    p.n = 2;
    p.B0 = first_row_selector();
    p.B1 = last_row_selector();
    p.w = Eigen::Vector2d(1.0, 0.0);
    p.a_taylor = [b](const Mesh &mesh, std::size_t j, std::size_t m) {
        std::vector<IMatrix> c{point2(0, b, b, 0)};
        return polynomial_taylor(mesh.mid(j), mesh.halfwidth(j), std::move(c), m);
    };
    return p;
}

template <class S>
std::array<std::vector<S>, 4> lorenz_solution_taylor(S x0, S y0, S z0, S period, const LorenzParams &p,
                                                     std::size_t m)
{
    if (m == 0) {
        throw DomainError("series degree must be at least 1");
    }
    S sigma(p.sigma);
    S rho(p.rho);
    S beta;
    if constexpr (std::is_same_v<S, Interval>) {
        beta = p.beta_interval();
    } else {
        beta = S(p.beta);
    }
    std::array<std::vector<S>, 4> c;
    for (auto &v : c) {
        v.assign(m + 1, S(0.0));
    }
    c[0][0] = x0;
    c[1][0] = y0;
    c[2][0] = z0;
    c[3][0] = period;
    const S ts = period * sigma;
    for (std::size_t r = 0; r < m; ++r) {
        const S inv = S(1.0) / S(static_cast<double>(r + 1));
        const S xz = conv(c[0], c[2], r);
        const S xy = conv(c[0], c[1], r);
        c[0][r + 1] = ts * (c[1][r] - c[0][r]) * inv;
        c[1][r + 1] = period * (rho * c[0][r] - c[1][r] - xz) * inv;
        c[2][r + 1] = period * (xy - beta * c[2][r]) * inv;
    }
    return c;
}

template std::array<std::vector<double>, 4> lorenz_solution_taylor<double>(double, double, double, double,
                                                                           const LorenzParams &, std::size_t);
template std::array<std::vector<Interval>, 4> lorenz_solution_taylor<Interval>(Interval, Interval, Interval,
                                                                               Interval, const LorenzParams &,
                                                                               std::size_t);

TaylorData<Interval> lorenz_jacobian_taylor(const std::array<std::vector<Interval>, 4> &series,
                                            const LorenzParams &p, double center, double halfwidth,
                                            std::size_t m)
{
    const auto &x = series[0];
    const auto &y = series[1];
    const auto &z = series[2];
    const Interval t = series[3][0];
    const std::size_t deg = x.size() - 1;
    const std::size_t len = 2 * deg + 1;
    const auto xz = poly_mul(x, z, len);
    const auto xy = poly_mul(x, y, len);
    const Interval sigma(p.sigma);
    const Interval rho(p.rho);
    const Interval beta = p.beta_interval();

    std::vector<IMatrix> c(len, IMatrix::zero(4, 4));
    for (std::size_t k = 0; k < len; ++k) {
        auto &a = c[k];
        const Interval xk = k <= deg ? x[k] : Interval(0.0);
        const Interval yk = k <= deg ? y[k] : Interval(0.0);
        const Interval zk = k <= deg ? z[k] : Interval(0.0);
        if (k == 0) {
            a(0, 0) = -(t * sigma);
            a(0, 1) = t * sigma;
            a(1, 0) = t * (rho - zk);
            a(1, 1) = -t;
            a(2, 2) = -(t * beta);
        } else {
            a(1, 0) = -(t * zk);
        }
        a(0, 3) = sigma * (yk - xk);
        a(1, 2) = -(t * xk);
        a(1, 3) = rho * xk - yk - xz[k];
        a(2, 0) = t * yk;
        a(2, 1) = t * xk;
        a(2, 3) = xy[k] - beta * zk;
    }
    return polynomial_taylor(center, halfwidth, std::move(c), m);
}

nlohmann::json LorenzModel::params() const
{
    return {{"sigma", p_.sigma}, {"beta", p_.beta}, {"rho", p_.rho}};
}

std::vector<std::vector<double>> LorenzModel::series(const Eigen::VectorXd &node, std::size_t m) const
{
    if (node.size() != 4) {
        throw ShapeError("Lorenz state has four components");
    }
    auto c = lorenz_solution_taylor<double>(node(0), node(1), node(2), node(3), p_, m);
    return {c.begin(), c.end()};
}

std::vector<std::vector<Interval>> LorenzModel::series(std::span<const Interval> node, std::size_t m) const
{
    if (node.size() != 4) {
        throw ShapeError("Lorenz state has four components");
    }
    auto c = lorenz_solution_taylor<Interval>(node[0], node[1], node[2], node[3], p_, m);
    return {c.begin(), c.end()};
}

FieldExpansion LorenzModel::field(const MatrixPolynomial<Interval> &y) const
{
    if (y.rows() != 4 || y.cols() != 1) {
        throw ShapeError("Lorenz state polynomial must be 4 x 1");
    }
    const std::size_t deg = y.degree();
    std::array<std::vector<Interval>, 4> s;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k <= deg; ++k) {
            s[i].push_back(y.coeff(k)(i, 0));
        }
    }
    const std::size_t len = 3 * deg + 1;
    const auto xz = poly_mul(s[0], s[2], len);
    const auto xy = poly_mul(s[0], s[1], len);
    const auto tx = poly_mul(s[3], s[0], len);
    const auto ty = poly_mul(s[3], s[1], len);
    const auto tz = poly_mul(s[3], s[2], len);
    const auto txz = poly_mul(s[3], xz, len);
    const auto txy = poly_mul(s[3], xy, len);
    const Interval sigma(p_.sigma);
    const Interval rho(p_.rho);
    const Interval beta = p_.beta_interval();
    // T is carried as a polynomial; for genuine series it is constant.
    std::vector<IMatrix> c(len, IMatrix::zero(4, 1));
    for (std::size_t k = 0; k < len; ++k) {
        c[k](0, 0) = sigma * (ty[k] - tx[k]);
        c[k](1, 0) = rho * tx[k] - ty[k] - txz[k];
        c[k](2, 0) = txy[k] - beta * tz[k];
    }
    // Drop trailing zero-only coefficients produced by a constant T.
    while (c.size() > 1) {
        bool zero = true;
        for (const auto &e : c.back().entries()) {
            zero = zero && e.lo() == 0 && e.hi() == 0;
        }
        if (!zero) {
            break;
        }
        c.pop_back();
    }
    return {MatrixPolynomial<Interval>(y.center(), y.halfwidth(), std::move(c)), IMatrix::zero(4, 1)};
}

Eigen::VectorXd LorenzModel::field(const Eigen::VectorXd &v) const
{
    Eigen::VectorXd f(4);
    const double x = v(0), y = v(1), z = v(2), t = v(3);
    f(0) = t * p_.sigma * (y - x);
    f(1) = t * (p_.rho * x - y - x * z);
    f(2) = t * (x * y - p_.beta * z);
    f(3) = 0.0;
    return f;
}

TaylorData<Interval> LorenzModel::jacobian_taylor(const MatrixPolynomial<Interval> &y, std::size_t m) const
{
    if (y.rows() != 4 || y.cols() != 1) {
        throw ShapeError("Lorenz state polynomial must be 4 x 1");
    }
    std::array<std::vector<Interval>, 4> s;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k <= y.degree(); ++k) {
            s[i].push_back(y.coeff(k)(i, 0));
        }
    }
    for (std::size_t k = 1; k < s[3].size(); ++k) {
        if (!(s[3][k].lo() == 0 && s[3][k].hi() == 0)) {
            throw DomainError("period component must be constant on each subinterval");
        }
    }
    return lorenz_jacobian_taylor(s, p_, y.center(), y.halfwidth(), m);
}

Eigen::VectorXd LorenzModel::boundary(const Eigen::VectorXd &y0, const Eigen::VectorXd &y1) const
{
    Eigen::VectorXd g(4);
    g(0) = y0(0) - y1(0);
    g(1) = y0(1) - y1(1);
    g(2) = y0(2) - y1(2);
    g(3) = y0(0) - y0(1);
    return g;
}

IMatrix LorenzModel::boundary(const IMatrix &y0, const IMatrix &y1) const
{
    IMatrix g(4, 1);
    g(0, 0) = y0(0, 0) - y1(0, 0);
    g(1, 0) = y0(1, 0) - y1(1, 0);
    g(2, 0) = y0(2, 0) - y1(2, 0);
    g(3, 0) = y0(0, 0) - y0(1, 0);
    return g;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> LorenzModel::boundary_jacobians(const Eigen::VectorXd &,
                                                                           const Eigen::VectorXd &) const
{
    Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(4, 4);
    d1(0, 0) = 1;
    d1(1, 1) = 1;
    d1(2, 2) = 1;
    d1(3, 0) = 1;
    d1(3, 1) = -1;
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(4, 4);
    d2(0, 0) = -1;
    d2(1, 1) = -1;
    d2(2, 2) = -1;
    return {d1, d2};
}

Interval LorenzModel::second_derivative_bound(std::span<const Interval> box, const WeightMatrix &w) const
{
    if (box.size() != 4 || w.size() != 4) {
        throw ShapeError("Lorenz tube box has four components");
    }
    const Interval &x = box[0];
    const Interval &y = box[1];
    const Interval &z = box[2];
    const Interval &t = box[3];
    const Interval rho(p_.rho);
    const Interval beta = p_.beta_interval();
    // Nonzero second partials (j, k) with j < k of each component; every
    // pair appears twice in the symmetric Hessian.
    struct Entry {
        std::size_t j, k;
        double mag;
    };
    const std::array<std::vector<Entry>, 3> hess{{
        {{0, 3, p_.sigma}, {1, 3, p_.sigma}},
        {{0, 2, t.mag()}, {0, 3, (rho - z).mag()}, {1, 3, 1.0}, {2, 3, x.mag()}},
        {{0, 1, t.mag()}, {0, 3, y.mag()}, {1, 3, x.mag()}, {2, 3, beta.mag()}},
    }};
    double best = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double row = 0.0;
        for (const auto &e : hess[i]) {
            const double scale = R::div_up(w[i], R::mul_down(w[e.j], w[e.k]));
            row = R::add_up(row, R::mul_up(2.0, R::mul_up(e.mag, scale)));
        }
        best = std::max(best, row);
    }
    return Interval::raw(0.0, best);
}

std::vector<Eigen::VectorXd> LorenzModel::initial_guess(const Mesh &mesh) const
{
    // Known approximation of the two-loop orbit; integrate one period
    // with Taylor steps, move the start to the first point with x = y and
    // sample at the subinterval midpoints.
    const double period = 1.559;
    Eigen::VectorXd state(4);
    state << -12.78619, -19.36419, 24.0, period;
    const std::size_t deg = 24;
    const std::size_t steps = 4000;
    const double dt = 1.0 / static_cast<double>(steps);

    auto step = [&](const Eigen::VectorXd &s, double h) {
        auto c = lorenz_solution_taylor<double>(s(0), s(1), s(2), s(3), p_, deg);
        Eigen::VectorXd out = s;
        for (std::size_t i = 0; i < 3; ++i) {
            double v = 0.0;
            for (std::size_t k = deg + 1; k-- > 0;) {
                v = v * h + c[i][k];
            }
            out(static_cast<Eigen::Index>(i)) = v;
        }
        return out;
    };

    {
        Eigen::VectorXd s = state;
        for (std::size_t k = 0; k < steps; ++k) {
            Eigen::VectorXd next = step(s, dt);
            const double g0 = s(0) - s(1);
            const double g1 = next(0) - next(1);
            if (k > 0 && g0 * g1 <= 0 && g0 != g1) {
                double lo = 0.0, hi = dt;
                for (int it = 0; it < 80; ++it) {
                    const double midh = 0.5 * (lo + hi);
                    const Eigen::VectorXd q = step(s, midh);
                    if ((q(0) - q(1)) * g0 > 0) {
                        lo = midh;
                    } else {
                        hi = midh;
                    }
                }
                state = step(s, 0.5 * (lo + hi));
                break;
            }
            s = next;
        }
    }

    std::vector<Eigen::VectorXd> out;
    out.reserve(mesh.intervals());
    Eigen::VectorXd s = state;
    double t = 0.0;
    for (std::size_t j = 0; j < mesh.intervals(); ++j) {
        const double target = mesh.mid(j);
        while (t < target) {
            const double h = std::min(dt, target - t);
            s = step(s, h);
            t += h;
        }
        out.push_back(s);
    }
    return out;
}

ExactTestOracle::ExactTestOracle(double b) : b_(b)
{
    if (!(b > 0) || !std::isfinite(b)) {
        throw DomainError("b must be positive");
    }
}

Eigen::Matrix2d ExactTestOracle::phi(double t) const
{
    const double s = b_ * t;
    const double sb = std::sinh(b_);
    Eigen::Matrix2d m;
    m << std::sinh(b_ - s) / sb, std::sinh(s) / sb, -std::cosh(b_ - s) / sb, std::cosh(s) / sb;
    return m;
}

Eigen::Matrix2d ExactTestOracle::phi_inverse(double t) const
{
    const double s = b_ * t;
    Eigen::Matrix2d m;
    m << std::cosh(s), -std::sinh(s), std::cosh(b_ - s), std::sinh(b_ - s);
    return m;
}

Eigen::Matrix2d ExactTestOracle::green(double t, double s) const
{
    Eigen::Matrix2d b0 = Eigen::Matrix2d::Zero();
    b0(0, 0) = 1.0;
    Eigen::Matrix2d b1 = Eigen::Matrix2d::Zero();
    b1(1, 0) = 1.0;
    if (s <= t) {
        return phi(t) * b0 * phi(0.0) * phi_inverse(s);
    }
    return -phi(t) * b1 * phi(1.0) * phi_inverse(s);
}

Eigen::Vector2d ExactTestOracle::solution(double t) const
{
    const double s = b_ * t;
    const double sb = std::sinh(b_);
    return {std::sinh(b_ - s) / sb, -std::cosh(b_ - s) / sb};
}

Eigen::Matrix2d ExactTestOracle::a() const
{
    Eigen::Matrix2d m;
    m << 0.0, b_, b_, 0.0;
    return m;
}

ExactTestOracle exact_testprob_oracle(double b)
{
    return ExactTestOracle(b);
}

ProblemInstance builtin_problem(const std::string &name, const nlohmann::json &params)
{
    if (!params.is_null() && !params.is_object()) {
        throw ConfigError("problem parameters must be an object");
    }
    const nlohmann::json p = params.is_null() ? nlohmann::json::object() : params;
    try {
        if (name == "turning-point") {
            return turning_point(json_number(p, "eps", 1e-4));
        }
        if (name == "potential-well") {
            return potential_well(json_number(p, "eps", 1e-5), json_number(p, "omega", 0.25));
        }
        if (name == "exact-test") {
            return exact_test(json_number(p, "b", 1.0));
        }
        if (name == "lorenz") {
            LorenzParams lp;
            lp.sigma = json_number(p, "sigma", lp.sigma);
            lp.beta = json_number(p, "beta", lp.beta);
            lp.rho = json_number(p, "rho", lp.rho);
            return std::shared_ptr<const NonlinearModel>(std::make_shared<LorenzModel>(lp));
        }
    } catch (const DomainError &e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown problem '" + name + "'");
}

} // namespace bvpcert
