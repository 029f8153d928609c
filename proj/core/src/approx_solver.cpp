#include "bvpcert/approx_solver.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace bvpcert {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

std::vector<Eigen::MatrixXd> mid_coeffs(const TaylorData<Interval> &a)
{
    std::vector<Eigen::MatrixXd> out;
    out.reserve(a.coeffs.size());
    for (const auto &c : a.coeffs) {
        out.push_back(c.mid());
    }
    return out;
}

// Degree-m Taylor polynomial of the local fundamental matrix Y' = A Y,
// Y(center) = I, using the same recursion as the verifier.
std::vector<Eigen::MatrixXd> local_series(const std::vector<Eigen::MatrixXd> &a, std::size_t m)
{
    const auto n = a.at(0).rows();
    std::vector<Eigen::MatrixXd> e;
    e.reserve(m + 1);
    e.push_back(Eigen::MatrixXd::Identity(n, n));
    for (std::size_t k = 1; k <= m; ++k) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t l = 0; l < k && l < a.size(); ++l) {
            s += a[l] * e[k - l - 1];
        }
        e.push_back(s / static_cast<double>(k));
    }
    return e;
}

// Particular solution p' = A p + q, p(center) = 0.
std::vector<Eigen::MatrixXd> particular_series(const std::vector<Eigen::MatrixXd> &a,
                                               const std::vector<Eigen::MatrixXd> &q, std::size_t m)
{
    const auto n = a.at(0).rows();
    std::vector<Eigen::MatrixXd> p;
    p.reserve(m + 1);
    p.push_back(Eigen::MatrixXd::Zero(n, 1));
    for (std::size_t k = 0; k < m; ++k) {
        Eigen::MatrixXd s = k < q.size() ? q[k] : Eigen::MatrixXd::Zero(n, 1);
        for (std::size_t l = 0; l <= k && l < a.size(); ++l) {
            s += a[l] * p[k - l];
        }
        p.push_back(s / static_cast<double>(k + 1));
    }
    return p;
}

Eigen::MatrixXd horner(const std::vector<Eigen::MatrixXd> &c, double tau)
{
    Eigen::MatrixXd r = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        r = r * tau + c[k];
    }
    return r;
}

struct LocalPieces {
    Eigen::MatrixXd left, right;   // Y at the two endpoints
    Eigen::VectorXd pleft, pright; // particular solution at the endpoints
};

double left_offset(const Mesh &mesh, std::size_t j)
{
    return mesh.node(j) - mesh.mid(j);
}

double right_offset(const Mesh &mesh, std::size_t j)
{
    return mesh.node(j + 1) - mesh.mid(j);
}

std::vector<LocalPieces> linear_pieces(const LinearBVProblem &problem, const Mesh &mesh, std::size_t m,
                                       bool with_forcing)
{
    std::vector<LocalPieces> out(mesh.intervals());
    for (std::size_t j = 0; j < mesh.intervals(); ++j) {
        const auto a = mid_coeffs(problem.a_taylor(mesh, j, m));
        const auto e = local_series(a, m);
        const double ta = left_offset(mesh, j);
        const double tb = right_offset(mesh, j);
        out[j].left = horner(e, ta);
        out[j].right = horner(e, tb);
        if (with_forcing && problem.forcing_taylor) {
            const auto q = mid_coeffs(problem.forcing_taylor(mesh, j, m));
            const auto p = particular_series(a, q, m);
            out[j].pleft = horner(p, ta);
            out[j].pright = horner(p, tb);
        } else {
            out[j].pleft = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.n));
            out[j].pright = out[j].pleft;
        }
    }
    return out;
}

// Block matching system: continuity of neighbouring local pieces at interior
// nodes plus the boundary rows.
SpMat matching_matrix(const std::vector<LocalPieces> &pieces, const Eigen::MatrixXd &b0, const Eigen::MatrixXd &b1)
{
    const std::size_t nint = pieces.size();
    const auto n = b0.rows();
    const auto size = static_cast<Eigen::Index>(nint) * n;
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(2 * n * n) * (nint + 1));
    auto put = [&](Eigen::Index row0, Eigen::Index col0, const Eigen::MatrixXd &blk) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < n; ++k) {
                if (blk(i, k) != 0.0) {
                    trip.emplace_back(row0 + i, col0 + k, blk(i, k));
                }
            }
        }
    };
    for (std::size_t j = 0; j + 1 < nint; ++j) {
        const auto r0 = static_cast<Eigen::Index>(j) * n;
        put(r0, r0, pieces[j].right);
        put(r0, r0 + n, -pieces[j + 1].left);
    }
    const auto rb = static_cast<Eigen::Index>(nint - 1) * n;
    put(rb, 0, b0 * pieces.front().left);
    put(rb, rb, b1 * pieces.back().right);
    SpMat mat(size, size);
    mat.setFromTriplets(trip.begin(), trip.end());
    mat.makeCompressed();
    return mat;
}

Eigen::MatrixXd solve_sparse(const SpMat &mat, const Eigen::MatrixXd &rhs, double tol, double threshold,
                             const char *what)
{
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(mat);
    lu.factorize(mat);
    if (lu.info() != Eigen::Success) {
        throw SolveError(std::string(what) + ": global system is singular", std::numeric_limits<double>::infinity());
    }
    Eigen::MatrixXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw SolveError(std::string(what) + ": global solve produced non-finite values",
                         std::numeric_limits<double>::infinity());
    }
    // Subnormal entries mean decaying modes were lost; report that rather
    // than the residual failure it usually causes.
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double a = std::fabs(x(k));
        if (a != 0.0 && a < threshold) {
            smallest = std::min(smallest, a);
        }
    }
    if (smallest < threshold) {
        throw UnderflowDiagnostic(std::string(what) + ": global solution has entries below the subnormal threshold",
                                  smallest);
    }
    // Normwise backward error per right-hand side,
    // ||Mx - b|| / (||M|| ||x|| + ||b||) in the max norm.
    const Eigen::MatrixXd res = mat * x - rhs;
    const SpMat amat = mat.cwiseAbs();
    const double mnorm = (amat * Eigen::VectorXd::Ones(amat.cols())).maxCoeff();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < res.cols(); ++k) {
        const double scale = mnorm * x.col(k).cwiseAbs().maxCoeff() + rhs.col(k).cwiseAbs().maxCoeff();
        if (scale > 0) {
            worst = std::max(worst, res.col(k).cwiseAbs().maxCoeff() / scale);
        }
    }
    if (worst > tol) {
        // Residual growth relative to unit roundoff is a crude conditioning proxy.
        throw SolveError(std::string(what) + ": scaled residual " + std::to_string(worst) + " exceeds tolerance",
                         worst / std::numeric_limits<double>::epsilon());
    }
    return x;
}

FundamentalNodes nodes_from_solution(const Eigen::MatrixXd &x, std::size_t nint, Eigen::Index n,
                                     double threshold)
{
    FundamentalNodes out;
    out.Phi.reserve(nint);
    for (std::size_t j = 0; j < nint; ++j) {
        out.Phi.push_back(x.block(static_cast<Eigen::Index>(j) * n, 0, n, n));
    }
    // Check before inverting: underflowed entries make the inverse meaningless.
    FundamentalNodes probe;
    probe.Phi = out.Phi;
    check_node_magnitudes(probe, threshold);
    out.Psi.reserve(nint);
    for (std::size_t j = 0; j < nint; ++j) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(out.Phi[j]);
        // Columns legitimately differ by hundreds of orders of magnitude.
        lu.setThreshold(std::numeric_limits<double>::min());
        if (!lu.isInvertible()) {
            throw SolveError("approximate fundamental matrix is singular at node " + std::to_string(j),
                             std::numeric_limits<double>::infinity());
        }
        out.Psi.push_back(lu.inverse());
    }
    check_node_magnitudes(out, threshold);
    return out;
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void validate_mesh_problem(const LinearBVProblem &problem)
{
    const auto n = static_cast<Eigen::Index>(problem.n);
    if (problem.n == 0 || problem.B0.rows() != n || problem.B0.cols() != n || problem.B1.rows() != n ||
        problem.B1.cols() != n || problem.w.size() != n) {
        throw ShapeError("boundary data does not match problem dimension");
    }
    if (!problem.a_taylor) {
        throw ShapeError("problem has no coefficient provider");
    }
}

} // namespace

void check_node_magnitudes(const FundamentalNodes &nodes, double threshold)
{
    double smallest = std::numeric_limits<double>::infinity();
    bool bad = false;
    std::string where;
    auto scan = [&](const std::vector<Eigen::MatrixXd> &mats, const char *name) {
        for (std::size_t j = 0; j < mats.size(); ++j) {
            for (Eigen::Index k = 0; k < mats[j].size(); ++k) {
                const double v = mats[j](k);
                if (!std::isfinite(v)) {
                    bad = true;
                    smallest = std::min(smallest, 0.0);
                    where = std::string(name) + " node " + std::to_string(j) + " has a non-finite entry";
                } else if (v != 0.0 && std::fabs(v) < threshold) {
                    if (std::fabs(v) < smallest) {
                        smallest = std::fabs(v);
                        where = std::string(name) + " node " + std::to_string(j) + " has an entry below the threshold";
                    }
                    bad = true;
                }
            }
        }
    };
    scan(nodes.Phi, "Phi");
    scan(nodes.Psi, "Psi");
    if (bad) {
        throw UnderflowDiagnostic("fundamental solution lost relative accuracy: " + where, smallest);
    }
}

FundamentalNodes solve_fundamentals(const LinearBVProblem &problem, const Mesh &mesh, const SolverOptions &options)
{
    validate_mesh_problem(problem);
    const auto pieces = linear_pieces(problem, mesh, options.m, false);
    const auto mat = matching_matrix(pieces, problem.B0, problem.B1);
    const auto n = static_cast<Eigen::Index>(problem.n);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(mat.rows(), n);
    rhs.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd x = solve_sparse(mat, rhs, options.tol, options.subnormal_threshold, "fundamental solution");
    return nodes_from_solution(x, mesh.intervals(), n, options.subnormal_threshold);
}

ApproximateSolution solve_linear_bvp(const LinearBVProblem &problem, const Mesh &mesh, const SolverOptions &options)
{
    validate_mesh_problem(problem);
    const auto start = std::chrono::steady_clock::now();
    const auto pieces = linear_pieces(problem, mesh, options.m, true);
    const auto mat = matching_matrix(pieces, problem.B0, problem.B1);
    const auto n = static_cast<Eigen::Index>(problem.n);
    const std::size_t nint = mesh.intervals();

    // Columns 0..n-1: fundamental solution; column n: the solution itself.
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(mat.rows(), n + 1);
    rhs.bottomRightCorner(n, n + 1).leftCols(n) = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t j = 0; j + 1 < nint; ++j) {
        rhs.block(static_cast<Eigen::Index>(j) * n, n, n, 1) = pieces[j + 1].pleft - pieces[j].pright;
    }
    rhs.block(static_cast<Eigen::Index>(nint - 1) * n, n, n, 1) =
        problem.w - problem.B0 * pieces.front().pleft - problem.B1 * pieces.back().pright;

    const Eigen::MatrixXd x = solve_sparse(mat, rhs, options.tol, options.subnormal_threshold, "linear BVP");

    ApproximateSolution sol;
    sol.problem = problem.id;
    sol.params = problem.params;
    sol.n = problem.n;
    sol.mesh = mesh;
    sol.m = options.m;
    sol.fundamentals = nodes_from_solution(x.leftCols(n), nint, n, options.subnormal_threshold);
    sol.v_nodes.reserve(nint);
    for (std::size_t j = 0; j < nint; ++j) {
        sol.v_nodes.push_back(x.block(static_cast<Eigen::Index>(j) * n, n, n, 1));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    sol.meta = {{"solver", "taylor-matching"},
                {"local_degree", options.m},
                {"tol", options.tol},
                {"subnormal_threshold", options.subnormal_threshold},
                {"created", utc_timestamp()},
                {"seconds", secs}};
    return sol;
}

LinearBVProblem linearize(const NonlinearModel &model, const Mesh &mesh, const std::vector<Eigen::VectorXd> &y_nodes)
{
    if (y_nodes.size() != mesh.intervals()) {
        throw ShapeError("one node value per subinterval is required");
    }
    const std::size_t n = model.dim();
    Eigen::VectorXd y0 = y_nodes.front();
    Eigen::VectorXd y1 = y_nodes.back();
    const auto [d1, d2] = model.boundary_jacobians(y0, y1);
    LinearBVProblem p;
    p.id = model.id() + "-linearized";
    p.params = model.params();
    p.n = n;
    p.B0 = d1;
    p.B1 = d2;
    p.w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    // The model is shared by value capture of a pointer; callers keep it alive.
    const NonlinearModel *mp = &model;
    auto nodes = y_nodes;
    p.a_taylor = [mp, nodes, mesh](const Mesh &msh, std::size_t j, std::size_t m) {
        if (!(msh == mesh)) {
            throw AlignmentError("linearization used with a different mesh");
        }
        std::vector<Interval> node;
        for (Eigen::Index i = 0; i < nodes[j].size(); ++i) {
            node.push_back(Interval(nodes[j](i)));
        }
        const auto s = mp->series(std::span<const Interval>(node), m);
        std::vector<IMatrix> coeffs;
        for (std::size_t k = 0; k <= m; ++k) {
            IMatrix c(s.size(), 1);
            for (std::size_t i = 0; i < s.size(); ++i) {
                c(i, 0) = s[i][k];
            }
            coeffs.push_back(std::move(c));
        }
        MatrixPolynomial<Interval> poly(msh.mid(j), msh.halfwidth(j), std::move(coeffs));
        return mp->jacobian_taylor(poly, m);
    };
    return p;
}

ApproximateSolution solve_nonlinear_bvp(const NonlinearModel &model, const Mesh &mesh, const SolverOptions &options,
                                        const std::vector<Eigen::VectorXd> *initial_guess)
{
    const auto start = std::chrono::steady_clock::now();
    const std::size_t nint = mesh.intervals();
    const auto n = static_cast<Eigen::Index>(model.dim());
    std::vector<Eigen::VectorXd> y = initial_guess ? *initial_guess : model.initial_guess(mesh);
    if (y.size() != nint) {
        throw ShapeError("initial guess needs one value per subinterval");
    }
    const std::size_t m = options.m;

    auto endpoint_values = [&](const std::vector<Eigen::VectorXd> &nodes) {
        std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> ends(nint);
        for (std::size_t j = 0; j < nint; ++j) {
            const auto s = model.series(nodes[j], m);
            std::vector<Eigen::MatrixXd> c(m + 1, Eigen::MatrixXd::Zero(n, 1));
            for (Eigen::Index i = 0; i < n; ++i) {
                for (std::size_t k = 0; k <= m; ++k) {
                    c[k](i, 0) = s[static_cast<std::size_t>(i)][k];
                }
            }
            ends[j] = {horner(c, left_offset(mesh, j)), horner(c, right_offset(mesh, j))};
        }
        return ends;
    };
    auto residual = [&](const std::vector<Eigen::VectorXd> &nodes) {
        const auto ends = endpoint_values(nodes);
        Eigen::VectorXd f(static_cast<Eigen::Index>(nint) * n);
        for (std::size_t j = 0; j + 1 < nint; ++j) {
            f.segment(static_cast<Eigen::Index>(j) * n, n) = ends[j].second - ends[j + 1].first;
        }
        f.tail(n) = model.boundary(ends.front().first, ends.back().second);
        return f;
    };

    Eigen::VectorXd f = residual(y);
    double fnorm = f.lpNorm<Eigen::Infinity>();
    std::size_t iter = 0;
    std::size_t polish = 0;
    while (iter < options.max_iterations) {
        if (fnorm <= options.tol && polish >= 2) {
            break;
        }
        ++iter;
        const auto lin = linearize(model, mesh, y);
        const auto pieces = linear_pieces(lin, mesh, m, false);
        const auto ends = endpoint_values(y);
        const auto [d1, d2] = model.boundary_jacobians(ends.front().first, ends.back().second);
        const auto mat = matching_matrix(pieces, d1, d2);
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(mat);
        if (lu.info() != Eigen::Success) {
            throw SolveError("Newton matrix is singular", std::numeric_limits<double>::infinity());
        }
        const Eigen::VectorXd step = lu.solve(-f);
        double lambda = 1.0;
        bool improved = false;
        while (lambda >= 1.0 / 1024) {
            std::vector<Eigen::VectorXd> trial = y;
            for (std::size_t j = 0; j < nint; ++j) {
                trial[j] += lambda * step.segment(static_cast<Eigen::Index>(j) * n, n);
            }
            const Eigen::VectorXd ft = residual(trial);
            const double tn = ft.lpNorm<Eigen::Infinity>();
            if (std::isfinite(tn) && tn < fnorm) {
                y = std::move(trial);
                f = ft;
                fnorm = tn;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (fnorm <= options.tol) {
            ++polish;
        }
        if (!improved) {
            break;
        }
    }
    if (!(fnorm <= options.tol)) {
        throw SolveError("Newton iteration did not converge (residual " + std::to_string(fnorm) + ")", fnorm);
    }

    ApproximateSolution sol;
    sol.problem = model.id();
    sol.params = model.params();
    sol.n = model.dim();
    sol.mesh = mesh;
    sol.m = m;
    sol.v_nodes = y;
    sol.fundamentals = solve_fundamentals(linearize(model, mesh, y), mesh, options);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    sol.meta = {{"solver", "taylor-matching-newton"},
                {"local_degree", m},
                {"tol", options.tol},
                {"newton_iterations", iter},
                {"matching_residual", fnorm},
                {"created", utc_timestamp()},
                {"seconds", secs}};
    return sol;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd &m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row.push_back(m(i, k));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double read_number(const nlohmann::json &v, const std::string &path)
{
    if (!v.is_number()) {
        throw FormatError(path, v.is_null() ? "NaN or missing number" : "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw FormatError(path, "non-finite number");
    }
    return d;
}

const nlohmann::json &require(const nlohmann::json &doc, const char *key)
{
    if (!doc.contains(key)) {
        throw FormatError(key, "missing field");
    }
    return doc[key];
}

const nlohmann::json &require_array(const nlohmann::json &v, const std::string &path, std::size_t len)
{
    if (!v.is_array()) {
        throw FormatError(path, "expected an array");
    }
    if (v.size() != len) {
        throw FormatError(path, "expected " + std::to_string(len) + " entries, found " + std::to_string(v.size()));
    }
    return v;
}

Eigen::MatrixXd read_matrix(const nlohmann::json &v, const std::string &path, std::size_t n)
{
    require_array(v, path, n);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const std::string rp = path + "[" + std::to_string(i) + "]";
        require_array(v[i], rp, n);
        for (std::size_t k = 0; k < n; ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                read_number(v[i][k], rp + "[" + std::to_string(k) + "]");
        }
    }
    return m;
}

std::size_t read_count(const nlohmann::json &v, const char *path)
{
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw FormatError(path, "expected a positive integer");
    }
    return v.get<std::size_t>();
}

} // namespace

nlohmann::json solution_to_json(const ApproximateSolution &sol)
{
    nlohmann::json doc;
    doc["problem"] = sol.problem;
    doc["params"] = sol.params;
    doc["n"] = sol.n;
    doc["mesh"] = sol.mesh.nodes();
    doc["m"] = sol.m;
    nlohmann::json v = nlohmann::json::array();
    for (const auto &x : sol.v_nodes) {
        v.push_back(std::vector<double>(x.data(), x.data() + x.size()));
    }
    doc["v_nodes"] = std::move(v);
    nlohmann::json phi = nlohmann::json::array();
    nlohmann::json psi = nlohmann::json::array();
    for (const auto &p : sol.fundamentals.Phi) {
        phi.push_back(matrix_json(p));
    }
    for (const auto &p : sol.fundamentals.Psi) {
        psi.push_back(matrix_json(p));
    }
    doc["phi_nodes"] = std::move(phi);
    doc["psi_nodes"] = std::move(psi);
    doc["meta"] = sol.meta;
    return doc;
}

ApproximateSolution solution_from_json(const nlohmann::json &doc)
{
    if (!doc.is_object()) {
        throw FormatError("$", "solution document must be an object");
    }
    ApproximateSolution sol;
    const auto &prob = require(doc, "problem");
    if (!prob.is_string()) {
        throw FormatError("problem", "expected a string");
    }
    sol.problem = prob.get<std::string>();
    if (doc.contains("params")) {
        if (!doc["params"].is_object()) {
            throw FormatError("params", "expected an object");
        }
        sol.params = doc["params"];
    }
    sol.n = read_count(require(doc, "n"), "n");
    sol.m = read_count(require(doc, "m"), "m");

    const auto &mesh = require(doc, "mesh");
    if (!mesh.is_array() || mesh.size() < 2) {
        throw FormatError("mesh", "expected at least two nodes");
    }
    std::vector<double> t;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        t.push_back(read_number(mesh[i], "mesh[" + std::to_string(i) + "]"));
    }
    try {
        sol.mesh = Mesh(std::move(t));
    } catch (const DomainError &e) {
        throw FormatError("mesh", e.what());
    }
    const std::size_t nint = sol.mesh.intervals();

    const auto &v = require_array(require(doc, "v_nodes"), "v_nodes", nint);
    for (std::size_t j = 0; j < nint; ++j) {
        const std::string path = "v_nodes[" + std::to_string(j) + "]";
        require_array(v[j], path, sol.n);
        Eigen::VectorXd x(static_cast<Eigen::Index>(sol.n));
        for (std::size_t i = 0; i < sol.n; ++i) {
            x(static_cast<Eigen::Index>(i)) = read_number(v[j][i], path + "[" + std::to_string(i) + "]");
        }
        sol.v_nodes.push_back(std::move(x));
    }
    const auto &phi = require_array(require(doc, "phi_nodes"), "phi_nodes", nint);
    const auto &psi = require_array(require(doc, "psi_nodes"), "psi_nodes", nint);
    for (std::size_t j = 0; j < nint; ++j) {
        sol.fundamentals.Phi.push_back(read_matrix(phi[j], "phi_nodes[" + std::to_string(j) + "]", sol.n));
        sol.fundamentals.Psi.push_back(read_matrix(psi[j], "psi_nodes[" + std::to_string(j) + "]", sol.n));
    }
    if (doc.contains("meta")) {
        sol.meta = doc["meta"];
    }
    return sol;
}

void export_solution(const ApproximateSolution &sol, const std::string &path)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << solution_to_json(sol).dump(1) << '\n';
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

ApproximateSolution ingest_solution(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("$", "cannot open '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw FormatError("$", std::string("invalid JSON: ") + e.what());
    }
    return solution_from_json(doc);
}

} // namespace bvpcert
