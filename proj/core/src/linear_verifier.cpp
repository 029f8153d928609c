#include "bvpcert/linear_verifier.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <limits>
#include <thread>

namespace bvpcert {

namespace {

template <class I>
void track_small(const IntervalMatrix<I> &m, double threshold, double &smallest)
{
    for (const auto &x : m.entries()) {
        const double a = x.mag();
        if (a != 0.0 && a < threshold) {
            smallest = std::min(smallest, a);
        }
    }
}

void raise_if_small(double smallest, double threshold, const std::string &where)
{
    if (smallest < threshold) {
        throw UnderflowDiagnostic("relative accuracy lost to underflow in " + where, smallest);
    }
}

template <class R>
double residual_factor(double hw, std::size_t m)
{
    // int_{-hw}^{hw} |tau|^m dtau
    return R::div_up(R::mul_up(2.0, pow_up<R>(hw, static_cast<int>(m + 1))), static_cast<double>(m + 1));
}

template <class I>
IntervalMatrix<I> with_identity(IntervalMatrix<I> m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        m(i, i) += I(1.0);
    }
    return m;
}

struct RowSums {
    double offdiag = 0; // sum_{k != l} h_k |G(l,k)| f_k
    double jump = 0;    // sum_k h_k |D_l X_k| f_k
    double smallest = std::numeric_limits<double>::infinity();
};

template <class I>
struct Workspace {
    std::vector<SubintervalData<I>> sub;
    std::vector<IntervalMatrix<I>> D; // Phi jumps at interior nodes
    std::vector<double> hf;           // h_k ||I+F_k|| ||A||_k
    double b1_factor = 1;             // 1 + |B1|
};

template <class I>
Workspace<I> make_workspace(const LinearBVProblem &problem, const Mesh &mesh, const GreenNodes<I> &green,
                            const WeightMatrix &W, const VerifyOptions &options)
{
    using R = typename I::rounding;
    const std::size_t N = mesh.intervals();
    if (green.intervals() != N) {
        throw ShapeError("node data and mesh have different numbers of subintervals");
    }
    if (green.dim() != problem.n || W.size() != problem.n) {
        throw ShapeError("node data, weights and problem dimension disagree");
    }
    Workspace<I> ws;
    ws.sub = prepare_subintervals<I>(problem, mesh, W, options.m);
    for (std::size_t j = 0; j + 1 < N; ++j) {
        ws.D.push_back(ws.sub[j].E_right * green.Phi[j] - ws.sub[j + 1].E_left * green.Phi[j + 1]);
    }
    for (const auto &s : ws.sub) {
        ws.hf.push_back(R::mul_up(s.width, R::mul_up(s.IF_norm, s.A_norm)));
    }
    ws.b1_factor = R::add_up(1.0, norm_hi(IntervalMatrix<I>::from(problem.B1), W));
    return ws;
}

template <class I>
RowSums row_sums(const GreenNodes<I> &green, const Workspace<I> &ws, const WeightMatrix &W, std::size_t l,
                 bool with_jump, double threshold)
{
    using R = typename I::rounding;
    const std::size_t N = green.intervals();
    RowSums out;
    for (std::size_t k = 0; k < N; ++k) {
        if (k != l) {
            const auto g = green.Phi[l] * green.factor(l, k);
            track_small(g, threshold, out.smallest);
            out.offdiag = R::add_up(out.offdiag, R::mul_up(norm_hi(g, W), ws.hf[k]));
        }
        if (with_jump && l + 1 < N) {
            const auto &x = k <= l ? green.lower[k] : green.upper[k];
            out.jump = R::add_up(out.jump, R::mul_up(norm_hi(ws.D[l] * x, W), ws.hf[k]));
        }
    }
    return out;
}

// The O(N^2 n^3) part. Rows are independent; each row is summed in a fixed
// order and stored by index, so the result does not depend on the worker count.
template <class I>
std::vector<RowSums> row_pass(const GreenNodes<I> &green, const Workspace<I> &ws, const WeightMatrix &W,
                              bool with_jump, const VerifyOptions &options)
{
    const std::size_t N = green.intervals();
    std::vector<RowSums> rows(N);
    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(N)));
    if (workers == 1) {
        for (std::size_t l = 0; l < N; ++l) {
            rows[l] = row_sums(green, ws, W, l, with_jump, options.subnormal_threshold);
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t l = t; l < N; l += workers) {
                        rows[l] = row_sums(green, ws, W, l, with_jump, options.subnormal_threshold);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
        for (auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto &r : rows) {
        smallest = std::min(smallest, r.smallest);
    }
    raise_if_small(smallest, options.subnormal_threshold, "Green's function nodes");
    return rows;
}

template <class I>
double diag_green_sup(const GreenNodes<I> &green, const SubintervalData<I> &s, const WeightMatrix &W, std::size_t j)
{
    const double gm = poly_sup_bound(s.F.left_multiply(green.Gminus[j]), W).hi();
    const double gp = poly_sup_bound(s.F.left_multiply(green.Gplus[j]), W).hi();
    return std::max(gm, gp);
}

template <class I>
AlphaTerms alpha_terms(const LinearBVProblem &problem, const GreenNodes<I> &green, const Workspace<I> &ws,
                       const std::vector<RowSums> &rows, const WeightMatrix &W)
{
    using R = typename I::rounding;
    using Matrix = IntervalMatrix<I>;
    const std::size_t N = green.intervals();
    const std::size_t n = green.dim();
    AlphaTerms t;
    for (std::size_t j = 0; j < N; ++j) {
        const auto &s = ws.sub[j];
        const double rr = R::mul_up(s.residual_factor, s.R.supnorm.hi());
        t.residual_offdiag = R::add_up(t.residual_offdiag, R::mul_up(rr, rows[j].offdiag));
        t.green_jumps = R::add_up(t.green_jumps, rows[j].jump);

        const double diag = R::mul_up(R::mul_up(s.width, diag_green_sup(green, s, W, j)), s.A_norm);
        t.residual_diag = R::add_up(t.residual_diag, R::mul_up(rr, diag));

        // Jump of G across s = t inside subinterval j, which should be -I.
        const Matrix dg = green.Gplus[j] - green.Gminus[j];
        auto prod = s.E.right_multiply(dg) * s.F;
        std::vector<Matrix> c = prod.coeffs();
        c[0] = with_identity(c[0]);
        const double id =
            poly_sup_bound(MatrixPolynomial<I>(prod.center(), prod.halfwidth(), std::move(c)), W).hi();
        t.diagonal_identity = R::add_up(t.diagonal_identity, R::mul_up(R::mul_up(s.width, id), s.A_norm));

        if (j + 1 < N) {
            t.phi_jumps = R::add_up(t.phi_jumps, R::mul_up(norm_hi(ws.D[j], W), ws.b1_factor));
        }
        const double rphi = poly_sup_bound(s.R.as_polynomial(s.a.center, s.a.halfwidth).right_multiply(green.Phi[j]), W).hi();
        t.residual_phi = R::add_up(t.residual_phi, R::mul_up(R::mul_up(s.residual_factor, rphi), ws.b1_factor));
    }
    for (double x : {t.residual_offdiag, t.green_jumps, t.residual_diag, t.diagonal_identity, t.phi_jumps,
                     t.residual_phi}) {
        t.first = R::add_up(t.first, x);
    }

    // Boundary rows of I - FH.
    const Matrix B0 = Matrix::from(problem.B0);
    const Matrix B1 = Matrix::from(problem.B1);
    const Matrix &EL = green.start;
    const Matrix &ER = green.end;
    // B0 G(0, s) + B1 G(1, s) = M2 Psi_k (I + F_k(s)).
    const Matrix M2 = B1 * ER * B0 * EL - B0 * EL * B1 * ER;
    for (std::size_t k = 0; k < N; ++k) {
        const auto &s = ws.sub[k];
        const double g = poly_sup_bound(s.F.left_multiply(M2 * green.Psi[k]), W).hi();
        t.boundary_green = R::add_up(t.boundary_green, R::mul_up(R::mul_up(s.width, g), s.A_norm));
    }
    const Matrix bc = Matrix::identity(n) - B0 * EL - B1 * ER;
    t.boundary_phi = R::mul_up(norm_hi(bc, W), ws.b1_factor);
    t.second = R::add_up(t.boundary_green, t.boundary_phi);
    return t;
}

template <class I>
double h_bound(const GreenNodes<I> &green, const Workspace<I> &ws, const std::vector<RowSums> &rows,
               const WeightMatrix &W)
{
    using R = typename I::rounding;
    double best = 0.0;
    for (std::size_t l = 0; l < green.intervals(); ++l) {
        const auto &s = ws.sub[l];
        double v = 1.0;
        const double diag = R::mul_up(R::mul_up(s.width, diag_green_sup(green, s, W, l)), s.A_norm);
        v = R::add_up(v, R::mul_up(s.E_norm, diag));
        const double phi = poly_sup_bound(s.E.right_multiply(green.Phi[l]), W).hi();
        v = R::add_up(v, R::mul_up(phi, ws.b1_factor));
        v = R::add_up(v, R::mul_up(s.E_norm, rows[l].offdiag));
        best = std::max(best, v);
    }
    return best;
}

} // namespace

template <class I>
IntervalMatrix<I> GreenNodes<I>::G(std::size_t l, std::size_t k) const
{
    return Phi.at(l) * factor(l, k);
}

template <class I>
GreenNodes<I> build_green_nodes(const FundamentalNodes &nodes, const Eigen::MatrixXd &B0, const Eigen::MatrixXd &B1,
                                const IntervalMatrix<I> &phi_start, const IntervalMatrix<I> &phi_end,
                                double subnormal_threshold)
{
    using Matrix = IntervalMatrix<I>;
    const std::size_t N = nodes.Phi.size();
    if (N == 0 || nodes.Psi.size() != N) {
        throw ShapeError("need one Phi and one Psi per subinterval");
    }
    const auto n = nodes.Phi[0].rows();
    if (B0.rows() != n || B0.cols() != n || B1.rows() != n || B1.cols() != n) {
        throw ShapeError("boundary matrices do not match node dimension");
    }
    for (std::size_t j = 0; j < N; ++j) {
        if (nodes.Phi[j].rows() != n || nodes.Phi[j].cols() != n || nodes.Psi[j].rows() != n ||
            nodes.Psi[j].cols() != n) {
            throw ShapeError("node matrix " + std::to_string(j) + " has the wrong shape");
        }
    }
    check_node_magnitudes(nodes, subnormal_threshold);

    GreenNodes<I> g;
    for (std::size_t j = 0; j < N; ++j) {
        g.Phi.push_back(Matrix::from(nodes.Phi[j]));
        g.Psi.push_back(Matrix::from(nodes.Psi[j]));
    }
    if (phi_start.rows() != static_cast<std::size_t>(n) || phi_start.cols() != static_cast<std::size_t>(n) ||
        phi_end.rows() != static_cast<std::size_t>(n) || phi_end.cols() != static_cast<std::size_t>(n)) {
        throw ShapeError("end values of Phi do not match node dimension");
    }
    g.start = phi_start;
    g.end = phi_end;
    const Matrix left = Matrix::from(B0) * g.start;
    const Matrix right = -(Matrix::from(B1) * g.end);
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < N; ++k) {
        g.lower.push_back(left * g.Psi[k]);
        g.upper.push_back(right * g.Psi[k]);
        g.Gminus.push_back(g.Phi[k] * g.lower.back());
        g.Gplus.push_back(g.Phi[k] * g.upper.back());
        track_small(g.lower.back(), subnormal_threshold, smallest);
        track_small(g.upper.back(), subnormal_threshold, smallest);
        track_small(g.Gminus.back(), subnormal_threshold, smallest);
        track_small(g.Gplus.back(), subnormal_threshold, smallest);
    }
    raise_if_small(smallest, subnormal_threshold, "Green's function nodes");
    return g;
}

template <class I>
GreenNodes<I> build_green_nodes(const LinearBVProblem &problem, const Mesh &mesh, const FundamentalNodes &nodes,
                                std::size_t m, double subnormal_threshold)
{
    const std::size_t N = mesh.intervals();
    if (nodes.Phi.size() != N || nodes.Psi.size() != N) {
        throw ShapeError("node data and mesh have different numbers of subintervals");
    }
    if (static_cast<std::size_t>(nodes.Phi[0].rows()) != problem.n) {
        throw ShapeError("node dimension does not match problem");
    }
    check_node_magnitudes(nodes, subnormal_threshold);
    const auto first = taylor_E(problem.a_taylor(mesh, 0, m).template convert<I>(), m);
    const auto last = N == 1 ? first : taylor_E(problem.a_taylor(mesh, N - 1, m).template convert<I>(), m);
    const auto start = first.evaluate(mesh.node(0)) * IntervalMatrix<I>::from(nodes.Phi.front());
    const auto end = last.evaluate(mesh.node(N)) * IntervalMatrix<I>::from(nodes.Phi.back());
    return build_green_nodes<I>(nodes, problem.B0, problem.B1, start, end, subnormal_threshold);
}

template <class I>
std::vector<SubintervalData<I>> prepare_subintervals(const LinearBVProblem &problem, const Mesh &mesh,
                                                     const WeightMatrix &W, std::size_t m)
{
    using R = typename I::rounding;
    if (m == 0) {
        throw DomainError("Taylor degree must be at least 1");
    }
    if (!problem.a_taylor) {
        throw ShapeError("problem has no coefficient provider");
    }
    std::vector<SubintervalData<I>> out;
    out.reserve(mesh.intervals());
    for (std::size_t j = 0; j < mesh.intervals(); ++j) {
        auto a = problem.a_taylor(mesh, j, m).template convert<I>();
        auto E = taylor_E(a, m);
        auto F = taylor_F(a, m);
        auto Rb = residual_R(a, E, W);
        SubintervalData<I> s{a, E, F, Rb, E.evaluate(mesh.node(j)), E.evaluate(mesh.node(j + 1))};
        s.width = mesh.width(j);
        s.residual_factor = residual_factor<R>(a.halfwidth, m);
        s.A_norm = taylor_sup_bound(a, W).hi();
        s.IF_norm = poly_sup_bound(F, W).hi();
        s.E_norm = poly_sup_bound(E, W).hi();
        out.push_back(std::move(s));
    }
    return out;
}

template <class I>
AlphaBound<I> bound_I_minus_FH(const LinearBVProblem &problem, const Mesh &mesh, const GreenNodes<I> &green,
                               const WeightMatrix &W, const VerifyOptions &options)
{
    const auto ws = make_workspace(problem, mesh, green, W, options);
    const auto rows = row_pass(green, ws, W, true, options);
    const auto t = alpha_terms(problem, green, ws, rows, W);
    return {I::raw(0.0, std::max(t.first, t.second)), t};
}

template <class I>
I bound_H(const LinearBVProblem &problem, const Mesh &mesh, const GreenNodes<I> &green, const WeightMatrix &W,
          const VerifyOptions &options)
{
    const auto ws = make_workspace(problem, mesh, green, W, options);
    const auto rows = row_pass(green, ws, W, false, options);
    return I::raw(1.0, h_bound(green, ws, rows, W));
}

template <class I>
LinearCertificate certify_linear(const LinearBVProblem &problem, const Mesh &mesh, const FundamentalNodes &nodes,
                                 const WeightMatrix &W, const VerifyOptions &options)
{
    using R = typename I::rounding;
    const auto start = std::chrono::steady_clock::now();
    if (nodes.Phi.size() != mesh.intervals()) {
        throw ShapeError("node data and mesh have different numbers of subintervals");
    }
    const auto green = build_green_nodes<I>(problem, mesh, nodes, options.m, options.subnormal_threshold);
    const auto ws = make_workspace(problem, mesh, green, W, options);
    const auto rows = row_pass(green, ws, W, true, options);

    LinearCertificate cert;
    cert.problem = problem.id;
    cert.N = mesh.intervals();
    cert.m = options.m;
    cert.mode = R::rigorous ? ArithmeticMode::Rigorous : ArithmeticMode::Fast;
    cert.W = W;
    cert.terms = alpha_terms(problem, green, ws, rows, W);
    const double alpha = std::max(cert.terms.first, cert.terms.second);
    const double H = h_bound(green, ws, rows, W);
    cert.alpha = Interval::raw(0.0, alpha);
    cert.H_norm = Interval::raw(1.0, H);
    if (alpha < 1.0) {
        cert.certified = true;
        cert.Finv_norm = Interval::raw(1.0, R::div_up(H, R::sub_down(1.0, alpha)));
    } else {
        cert.certified = false;
        cert.reason = "contraction test";
        cert.Finv_norm = Interval::raw(1.0, std::numeric_limits<double>::infinity());
    }
    cert.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cert;
}

LinearCertificate certify_linear(const LinearBVProblem &problem, const Mesh &mesh, const FundamentalNodes &nodes,
                                 const WeightMatrix &W, ArithmeticMode mode, const VerifyOptions &options)
{
    if (mode == ArithmeticMode::Fast) {
        return certify_linear<FastInterval>(problem, mesh, nodes, W, options);
    }
    return certify_linear<Interval>(problem, mesh, nodes, W, options);
}

WeightMatrix choose_weights(std::span<const double> sums)
{
    if (sums.empty()) {
        throw ShapeError("no component sums given");
    }
    double smallest = std::numeric_limits<double>::infinity();
    for (double s : sums) {
        if (!(s >= 0) || !std::isfinite(s)) {
            throw DomainError("jump error sums must be finite and non-negative");
        }
        if (s > 0) {
            smallest = std::min(smallest, s);
        }
    }
    std::vector<double> w(sums.size(), 1.0);
    if (!std::isfinite(smallest)) {
        return WeightMatrix(std::move(w));
    }
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (sums[i] > 0) {
            w[i] = smallest / sums[i];
        }
    }
    return WeightMatrix(std::move(w));
}

MatrixPolynomial<Interval> extend_node(const TaylorData<Interval> &a, const TaylorData<Interval> *q,
                                       const Eigen::VectorXd &node, std::size_t m)
{
    if (a.coeffs.size() < m) {
        throw DomainError("not enough Taylor coefficients of A for requested degree");
    }
    if (q && q->coeffs.size() < m) {
        throw DomainError("not enough Taylor coefficients of the forcing for requested degree");
    }
    std::vector<IMatrix> c;
    c.reserve(m + 1);
    c.push_back(IMatrix::from(node));
    for (std::size_t l = 0; l < m; ++l) {
        IMatrix s = q ? q->coeffs[l] : IMatrix::zero(a.dim(), 1);
        for (std::size_t i = 0; i <= l; ++i) {
            s += a.coeffs[i] * c[l - i];
        }
        c.push_back(s * (Interval(1.0) / Interval(static_cast<double>(l + 1))));
    }
    return MatrixPolynomial<Interval>(a.center, a.halfwidth, std::move(c));
}

ResidualNorms residual_norms(const Mesh &mesh, const std::vector<DefectPiece> &pieces, const IMatrix &boundary_residual,
                             const WeightMatrix &W, std::vector<double> *node_sums)
{
    using R = OutwardRounding;
    if (pieces.size() != mesh.intervals()) {
        throw ShapeError("one defect piece per subinterval is required");
    }
    const std::size_t n = pieces.front().y.rows();
    if (node_sums) {
        node_sums->assign(n, 0.0);
    }
    IMatrix S = IMatrix::zero(n, 1);
    double cumulative = 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
        const auto &p = pieces[j];
        if (j > 0) {
            S += p.y.evaluate(mesh.node(j)) - pieces[j - 1].y.evaluate(mesh.node(j));
        }
        if (node_sums) {
            for (std::size_t i = 0; i < n; ++i) {
                (*node_sums)[i] = R::add_up((*node_sums)[i], S(i, 0).mag());
            }
        }
        const Interval a = Interval(mesh.node(j)) - Interval(p.defect.center());
        const Interval b = Interval(mesh.node(j + 1)) - Interval(p.defect.center());
        const Interval tau = symmetric<Interval>(p.defect.halfwidth());
        IMatrix here = S;
        IMatrix step = IMatrix::zero(n, 1);
        for (std::size_t k = p.zero_below; k < p.defect.coeffs().size(); ++k) {
            const Interval kk(static_cast<double>(k + 1));
            const int e = static_cast<int>(k + 1);
            const auto &d = p.defect.coeff(k);
            here += d * ((pow(tau, e) - pow(a, e)) / kk);
            step += d * ((pow(b, e) - pow(a, e)) / kk);
        }
        cumulative = R::add_up(cumulative, p.remainder_integral);
        worst = std::max(worst, R::add_up(vector_norm(here, W).hi(), cumulative));
        S += step;
    }
    ResidualNorms out;
    out.integral = Interval::raw(0.0, worst);
    out.boundary = Interval::raw(0.0, vector_norm(boundary_residual, W).hi());
    return out;
}

namespace {

void linear_defect_pieces(const LinearBVProblem &problem, const Mesh &mesh, const std::vector<Eigen::VectorXd> &v_nodes,
                          std::size_t m, const WeightMatrix &W, std::vector<DefectPiece> &pieces, IMatrix &br)
{
    using R = OutwardRounding;
    if (v_nodes.size() != mesh.intervals()) {
        throw ShapeError("one node value per subinterval is required");
    }
    pieces.clear();
    pieces.reserve(mesh.intervals());
    for (std::size_t j = 0; j < mesh.intervals(); ++j) {
        const auto a = problem.a_taylor(mesh, j, m);
        TaylorData<Interval> q;
        const bool forced = static_cast<bool>(problem.forcing_taylor);
        if (forced) {
            q = problem.forcing_taylor(mesh, j, m);
        }
        auto y = extend_node(a, forced ? &q : nullptr, v_nodes[j], m);
        std::vector<IMatrix> ac(a.coeffs.begin(), a.coeffs.begin() + static_cast<std::ptrdiff_t>(m));
        MatrixPolynomial<Interval> apoly(a.center, a.halfwidth, std::move(ac));
        auto defect = y.derivative() - apoly * y;
        double rem = R::mul_up(norm_hi(a.remainder, W), vector_norm(y.range(), W).hi());
        if (forced) {
            std::vector<IMatrix> qc(q.coeffs.begin(), q.coeffs.begin() + static_cast<std::ptrdiff_t>(m));
            defect = defect - MatrixPolynomial<Interval>(q.center, q.halfwidth, std::move(qc));
            rem = R::add_up(rem, vector_norm(q.remainder, W).hi());
        }
        rem = R::mul_up(rem, residual_factor<R>(a.halfwidth, m));
        // y is the exact real recursion, so coefficients below m of the
        // defect vanish; only their rounding widths would survive.
        pieces.push_back({std::move(y), std::move(defect), rem, m});
    }
    br = IMatrix::from(problem.B0) * pieces.front().y.evaluate(mesh.node(0)) +
         IMatrix::from(problem.B1) * pieces.back().y.evaluate(mesh.node(mesh.intervals())) -
         IMatrix::from(problem.w);
}

} // namespace

InhomogeneousBound verify_inhomogeneous(const LinearCertificate &cert, const LinearBVProblem &problem,
                                        const Mesh &mesh, const std::vector<Eigen::VectorXd> &v_nodes)
{
    using R = OutwardRounding;
    if (!cert.certified) {
        throw StateError("inhomogeneous bound needs a certified operator");
    }
    if (v_nodes.size() != mesh.intervals() || cert.N != mesh.intervals()) {
        throw ShapeError("node values, certificate and mesh disagree");
    }
    const std::size_t m = cert.m;
    const WeightMatrix &W = cert.W;
    std::vector<DefectPiece> pieces;
    IMatrix br;
    linear_defect_pieces(problem, mesh, v_nodes, m, W, pieces, br);

    InhomogeneousBound out;
    out.residual = residual_norms(mesh, pieces, br, W);
    const double b = R::mul_up(cert.Finv_norm.hi(), out.residual.total().hi());
    out.bound = Interval::raw(0.0, b);
    for (std::size_t i = 0; i < W.size(); ++i) {
        out.component_bounds.push_back(R::div_up(b, W[i]));
    }
    return out;
}

std::vector<double> jump_errors(const LinearBVProblem &problem, const Mesh &mesh,
                                const std::vector<Eigen::VectorXd> &v_nodes, std::size_t m)
{
    const auto W = WeightMatrix::identity(problem.n);
    std::vector<DefectPiece> pieces;
    IMatrix br;
    linear_defect_pieces(problem, mesh, v_nodes, m, W, pieces, br);
    std::vector<double> sums;
    residual_norms(mesh, pieces, br, W, &sums);
    return sums;
}

#define BVPCERT_INSTANTIATE(I)                                                                                        \
    template struct GreenNodes<I>;                                                                                     \
    template GreenNodes<I> build_green_nodes<I>(const FundamentalNodes &, const Eigen::MatrixXd &,                     \
                                                const Eigen::MatrixXd &, const IntervalMatrix<I> &,                    \
                                                const IntervalMatrix<I> &, double);                                    \
    template GreenNodes<I> build_green_nodes<I>(const LinearBVProblem &, const Mesh &, const FundamentalNodes &,       \
                                                std::size_t, double);                                                  \
    template std::vector<SubintervalData<I>> prepare_subintervals<I>(const LinearBVProblem &, const Mesh &,            \
                                                                     const WeightMatrix &, std::size_t);               \
    template AlphaBound<I> bound_I_minus_FH<I>(const LinearBVProblem &, const Mesh &, const GreenNodes<I> &,           \
                                               const WeightMatrix &, const VerifyOptions &);                           \
    template I bound_H<I>(const LinearBVProblem &, const Mesh &, const GreenNodes<I> &, const WeightMatrix &,          \
                          const VerifyOptions &);                                                                      \
    template LinearCertificate certify_linear<I>(const LinearBVProblem &, const Mesh &, const FundamentalNodes &,      \
                                                 const WeightMatrix &, const VerifyOptions &);

BVPCERT_INSTANTIATE(Interval)
BVPCERT_INSTANTIATE(FastInterval)

#undef BVPCERT_INSTANTIATE

} // namespace bvpcert
