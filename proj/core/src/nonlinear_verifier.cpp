#include "bvpcert/nonlinear_verifier.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace bvpcert {

namespace {

using R = OutwardRounding;

double elapsed(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

NKParameters newton_kantorovich(const Interval &beta, const Interval &K, const Interval &eta, double radius)
{
    if (beta.lo() < 0 || K.lo() < 0 || eta.lo() < 0) {
        throw DomainError("beta, K and eta must be non-negative");
    }
    if (!(radius > 0)) {
        throw DomainError("ball radius must be positive");
    }
    NKParameters p;
    p.beta = beta;
    p.K = K;
    p.eta = eta;
    p.radius = radius;
    p.h = beta * K * eta;
    if (K.hi() == 0.0) {
        p.s0 = eta;
        p.s1 = Interval::raw(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
    } else {
        if (p.h.hi() > 0.5) {
            p.reason = "h exceeds 1/2";
            return p;
        }
        const Interval disc = Interval(1.0) - Interval(2.0) * p.h;
        const Interval root = sqrt(Interval::raw(std::max(0.0, disc.lo()), std::max(0.0, disc.hi())));
        p.s0 = Interval(2.0) * eta / (Interval(1.0) + root);
        const Interval bk = beta * K;
        p.s1 = bk.lo() > 0 ? (Interval(1.0) + root) / bk
                           : Interval::raw((Interval(1.0) + root).lo() / bk.hi(),
                                           std::numeric_limits<double>::infinity());
    }
    if (p.s0.hi() > radius) {
        p.reason = "ball too small";
        return p;
    }
    p.certified = true;
    return p;
}

std::vector<MatrixPolynomial<Interval>> solution_pieces(const NonlinearModel &model, const Mesh &mesh,
                                                        const std::vector<Eigen::VectorXd> &y_nodes, std::size_t m)
{
    if (y_nodes.size() != mesh.intervals()) {
        throw ShapeError("one node value per subinterval is required");
    }
    const std::size_t n = model.dim();
    std::vector<MatrixPolynomial<Interval>> out;
    out.reserve(mesh.intervals());
    for (std::size_t j = 0; j < mesh.intervals(); ++j) {
        if (static_cast<std::size_t>(y_nodes[j].size()) != n) {
            throw ShapeError("node value has the wrong dimension");
        }
        std::vector<Interval> node(y_nodes[j].data(), y_nodes[j].data() + n);
        const auto s = model.series(std::span<const Interval>(node), m);
        std::vector<IMatrix> c(m + 1, IMatrix::zero(n, 1));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k <= m; ++k) {
                c[k](i, 0) = s[i][k];
            }
        }
        out.emplace_back(mesh.mid(j), mesh.halfwidth(j), std::move(c));
    }
    return out;
}

ResidualNorms bound_residual(const NonlinearModel &model, const Mesh &mesh, const std::vector<Eigen::VectorXd> &y_nodes,
                             std::size_t m, const WeightMatrix &W)
{
    auto ys = solution_pieces(model, mesh, y_nodes, m);
    std::vector<DefectPiece> pieces;
    pieces.reserve(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) {
        auto f = model.field(ys[j]);
        auto defect = ys[j].derivative() - f.poly;
        double rem = 0.0;
        if (!f.remainder.empty()) {
            rem = R::mul_up(mesh.width(j), vector_norm(f.remainder, W).hi());
        }
        // Series coefficients are exact, so y' - f(y) starts at degree m.
        pieces.push_back({std::move(ys[j]), std::move(defect), rem, m});
    }
    const IMatrix y0 = pieces.front().y.evaluate(mesh.node(0));
    const IMatrix y1 = pieces.back().y.evaluate(mesh.node(mesh.intervals()));
    return residual_norms(mesh, pieces, model.boundary(y0, y1), W);
}

Interval bound_lipschitz(const NonlinearModel &model, const Mesh &mesh, const std::vector<Eigen::VectorXd> &y_nodes,
                         std::size_t m, double radius, const WeightMatrix &W)
{
    if (!(radius > 0)) {
        throw DomainError("ball radius must be positive");
    }
    const auto ys = solution_pieces(model, mesh, y_nodes, m);
    double best = 0.0;
    for (const auto &y : ys) {
        const IMatrix range = y.range();
        std::vector<Interval> box;
        for (std::size_t i = 0; i < range.rows(); ++i) {
            const double r = R::div_up(radius, W[i]);
            box.push_back(range(i, 0) + symmetric<Interval>(r));
        }
        best = std::max(best, model.second_derivative_bound(box, W).hi());
    }
    return Interval::raw(0.0, best);
}

namespace {

NonlinearCertificate run(const NonlinearModel &model, const ApproximateSolution &sol, std::vector<double> radii,
                         const VerifyOptions &options, ArithmeticMode mode)
{
    const auto start = std::chrono::steady_clock::now();
    if (sol.n != model.dim()) {
        throw ShapeError("solution dimension does not match the model");
    }
    const auto W = WeightMatrix::identity(model.dim());
    NonlinearCertificate cert;
    const auto lin = linearize(model, sol.mesh, sol.v_nodes);
    cert.linear = certify_linear(lin, sol.mesh, sol.fundamentals, W, mode, options);
    cert.linear.problem = model.id();
    if (!cert.linear.certified) {
        cert.stage = "linear";
        cert.reason = cert.linear.reason;
        cert.seconds = elapsed(start);
        return cert;
    }
    cert.residual = bound_residual(model, sol.mesh, sol.v_nodes, options.m, W);
    cert.residual_norm = cert.residual.total();
    const Interval beta = Interval::raw(0.0, cert.linear.Finv_norm.hi());
    const Interval eta = beta * cert.residual_norm;
    for (double radius : radii) {
        const Interval K = bound_lipschitz(model, sol.mesh, sol.v_nodes, options.m, radius, W);
        cert.nk = newton_kantorovich(beta, K, eta, radius);
        if (cert.nk.certified || cert.nk.reason == "h exceeds 1/2") {
            break;
        }
    }
    cert.certified = cert.nk.certified;
    cert.stage = "newton-kantorovich";
    cert.reason = cert.nk.reason;
    cert.seconds = elapsed(start);
    return cert;
}

} // namespace

NonlinearCertificate certify_nonlinear(const NonlinearModel &model, const ApproximateSolution &sol, double radius,
                                       const VerifyOptions &options, ArithmeticMode mode)
{
    if (!(radius > 0)) {
        throw DomainError("ball radius must be positive");
    }
    return run(model, sol, {radius}, options, mode);
}

NonlinearCertificate certify_nonlinear_search(const NonlinearModel &model, const ApproximateSolution &sol,
                                              double radius, std::size_t max_doublings, const VerifyOptions &options,
                                              ArithmeticMode mode)
{
    if (!(radius > 0)) {
        throw DomainError("ball radius must be positive");
    }
    std::vector<double> radii;
    for (std::size_t k = 0; k <= max_doublings; ++k) {
        radii.push_back(std::ldexp(radius, static_cast<int>(k)));
    }
    return run(model, sol, std::move(radii), options, mode);
}

} // namespace bvpcert
