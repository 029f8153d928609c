#include "bvpcert/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace bvpcert {

namespace {

using json = nlohmann::json;

double elapsed(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SolverOptions solver_options(const RunOptions &o)
{
    SolverOptions s;
    s.m = o.m;
    s.tol = o.solver_tol;
    return s;
}

VerifyOptions verify_options(const RunOptions &o)
{
    VerifyOptions v;
    v.m = o.m;
    v.workers = std::max(1u, o.workers);
    return v;
}

// Each subinterval split in three; the middle piece shares the midpoint.
Mesh refine3(const Mesh &mesh)
{
    std::vector<double> t{mesh.node(0)};
    for (std::size_t j = 0; j < mesh.intervals(); ++j) {
        const double a = mesh.node(j);
        const double h = mesh.node(j + 1) - a;
        t.push_back(a + h / 3);
        t.push_back(a + 2 * h / 3);
        t.push_back(mesh.node(j + 1));
    }
    return Mesh(std::move(t));
}

double refinement_delta(const LinearBVProblem &problem, const ApproximateSolution &coarse, const RunOptions &o)
{
    const auto fine = solve_linear_bvp(problem, refine3(coarse.mesh), solver_options(o));
    double d = 0;
    for (std::size_t j = 0; j < coarse.v_nodes.size(); ++j) {
        d = std::max(d, (coarse.v_nodes[j] - fine.v_nodes[3 * j + 1]).cwiseAbs().maxCoeff());
    }
    return d;
}

json strip_meta(json meta, bool deterministic)
{
    if (deterministic) {
        meta.erase("created");
        meta.erase("seconds");
    }
    return meta;
}

json terms_json(const AlphaTerms &t)
{
    return {{"residual_offdiag", t.residual_offdiag}, {"green_jumps", t.green_jumps},
            {"residual_diag", t.residual_diag},       {"diagonal_identity", t.diagonal_identity},
            {"phi_jumps", t.phi_jumps},               {"residual_phi", t.residual_phi},
            {"first", t.first},                       {"boundary_green", t.boundary_green},
            {"boundary_phi", t.boundary_phi},         {"second", t.second}};
}

json options_json(const RunOptions &o)
{
    return {{"m", o.m},
            {"mode", to_string(o.mode)},
            {"weights", to_string(o.weights)},
            {"workers", o.workers},
            {"solver_tol", o.solver_tol},
            {"deterministic", o.deterministic}};
}

std::string fmt(const json &v)
{
    if (v.is_null()) {
        return "-";
    }
    if (v.is_number_float()) {
        std::ostringstream s;
        s << std::setprecision(3) << std::scientific << v.get<double>();
        return s.str();
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

std::string short_eps(double eps)
{
    std::ostringstream s;
    s << std::setprecision(0) << std::scientific << eps;
    return s.str();
}

// Upper endpoint of an interval object, or the value itself.
json upper(const json &v)
{
    if (v.is_object() && v.contains("hi")) {
        return v["hi"];
    }
    return v;
}

} // namespace

std::string to_string(ArithmeticMode mode)
{
    return mode == ArithmeticMode::Rigorous ? "rigorous" : "fast";
}

std::string to_string(WeightRule rule)
{
    return rule == WeightRule::Identity ? "identity" : "adaptive";
}

ArithmeticMode parse_mode(const std::string &s)
{
    if (s == "rigorous") {
        return ArithmeticMode::Rigorous;
    }
    if (s == "fast" || s == "fast-float") {
        return ArithmeticMode::Fast;
    }
    throw ConfigError("unknown mode '" + s + "' (rigorous, fast)");
}

WeightRule parse_weights(const std::string &s)
{
    if (s == "identity") {
        return WeightRule::Identity;
    }
    if (s == "adaptive") {
        return WeightRule::Adaptive;
    }
    throw ConfigError("unknown weights '" + s + "' (identity, adaptive)");
}

LinearRun run_linear(const LinearBVProblem &problem, const Mesh &mesh, const RunOptions &options)
{
    const auto start = std::chrono::steady_clock::now();
    LinearRun run;
    try {
        run.solution = solve_linear_bvp(problem, mesh, solver_options(options));
    } catch (const UnderflowDiagnostic &e) {
        run.status = "underflow";
        run.diagnostic = e.what();
        run.seconds = elapsed(start);
        return run;
    }
    const auto sol = *run.solution;
    run = run_linear(problem, sol, options);
    run.solution = sol;
    if (options.input_error) {
        try {
            run.input_error = refinement_delta(problem, sol, options);
        } catch (const UnderflowDiagnostic &) {
            // no estimate on the refined mesh; the run itself stands
        }
    }
    run.seconds = elapsed(start);
    return run;
}

LinearRun run_linear(const LinearBVProblem &problem, const ApproximateSolution &sol, const RunOptions &options)
{
    const auto start = std::chrono::steady_clock::now();
    LinearRun run;
    if (sol.n != problem.n) {
        throw ShapeError("solution dimension does not match the problem");
    }
    run.solution = sol;
    try {
        auto W = WeightMatrix::identity(problem.n);
        if (options.weights == WeightRule::Adaptive) {
            W = choose_weights(jump_errors(problem, sol.mesh, sol.v_nodes, options.m));
        }
        run.cert = certify_linear(problem, sol.mesh, sol.fundamentals, W, options.mode, verify_options(options));
        if (run.cert->certified) {
            run.bound = verify_inhomogeneous(*run.cert, problem, sol.mesh, sol.v_nodes);
            run.status = "certified";
        } else {
            run.status = "failed";
            run.diagnostic = run.cert->reason;
        }
    } catch (const UnderflowDiagnostic &e) {
        run.status = "underflow";
        run.diagnostic = e.what();
    }
    run.seconds = elapsed(start);
    return run;
}

NonlinearRun run_nonlinear(const NonlinearModel &model, const Mesh &mesh, double radius, bool search,
                           const RunOptions &options)
{
    const auto start = std::chrono::steady_clock::now();
    NonlinearRun run;
    try {
        run.solution = solve_nonlinear_bvp(model, mesh, solver_options(options));
    } catch (const UnderflowDiagnostic &e) {
        run.status = "underflow";
        run.diagnostic = e.what();
        run.seconds = elapsed(start);
        return run;
    }
    const auto sol = *run.solution;
    run = run_nonlinear(model, sol, radius, search, options);
    run.solution = sol;
    run.seconds = elapsed(start);
    return run;
}

NonlinearRun run_nonlinear(const NonlinearModel &model, const ApproximateSolution &sol, double radius, bool search,
                           const RunOptions &options)
{
    const auto start = std::chrono::steady_clock::now();
    NonlinearRun run;
    run.solution = sol;
    try {
        run.cert = search ? certify_nonlinear_search(model, sol, radius, 20, verify_options(options), options.mode)
                          : certify_nonlinear(model, sol, radius, verify_options(options), options.mode);
        run.status = run.cert->certified ? "certified" : "failed";
        if (!run.cert->certified) {
            run.diagnostic = run.cert->stage + ": " + run.cert->reason;
        }
    } catch (const UnderflowDiagnostic &e) {
        run.status = "underflow";
        run.diagnostic = e.what();
    }
    run.seconds = elapsed(start);
    return run;
}

const std::vector<TableRow> &reference_table()
{
    static const std::vector<TableRow> rows = {
        {"turning-point", 1e-4, 230, 1.4e-12, 5.2e-9, 3.1e-10},
        {"turning-point", 1e-5, 250, 5.1e-8, 6.1e-5, 1.2e-4},
        {"turning-point", 1e-6, 600, 2.2e-6, 3.6e-3, 4.0e-4},
        {"potential-well", 1e-5, 350, 6.0e-8, 7.0e-6, 8.7e-4},
        {"potential-well", 1e-6, 600, 3.9e-8, 1.8e-4, 1.3e-4},
    };
    return rows;
}

std::vector<TableResult> run_table(const RunOptions &options)
{
    std::vector<TableResult> out;
    for (const auto &row : reference_table()) {
        TableResult r{row, {}};
        try {
            const auto problem = row.problem == "turning-point" ? turning_point(row.eps) : potential_well(row.eps);
            r.run = run_linear(problem, Mesh::uniform(row.N), options);
        } catch (const std::exception &e) {
            r.run.status = "error";
            r.run.diagnostic = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

json interval_json(const Interval &x)
{
    return {{"lo", x.lo()}, {"hi", x.hi()}};
}

json to_json(const LinearCertificate &cert, bool deterministic)
{
    json j = {{"problem", cert.problem},
              {"N", cert.N},
              {"m", cert.m},
              {"mode", to_string(cert.mode)},
              {"weights", cert.W.diag()},
              {"alpha", interval_json(cert.alpha)},
              {"H_norm", interval_json(cert.H_norm)},
              {"Finv_norm", interval_json(cert.Finv_norm)},
              {"certified", cert.certified},
              {"reason", cert.reason},
              {"terms", terms_json(cert.terms)}};
    if (!deterministic) {
        j["seconds"] = cert.seconds;
    }
    return j;
}

json to_json(const NonlinearCertificate &cert, bool deterministic)
{
    const auto &nk = cert.nk;
    json j = {{"linear", to_json(cert.linear, deterministic)},
              {"residual",
               {{"integral", interval_json(cert.residual.integral)},
                {"boundary", interval_json(cert.residual.boundary)},
                {"norm", interval_json(cert.residual_norm)}}},
              {"newton_kantorovich",
               {{"beta", interval_json(nk.beta)},
                {"K", interval_json(nk.K)},
                {"eta", interval_json(nk.eta)},
                {"h", interval_json(nk.h)},
                {"s0", interval_json(nk.s0)},
                {"s1", interval_json(nk.s1)},
                {"radius", nk.radius},
                {"certified", nk.certified},
                {"reason", nk.reason}}},
              {"certified", cert.certified},
              {"stage", cert.stage},
              {"reason", cert.reason}};
    if (!deterministic) {
        j["seconds"] = cert.seconds;
    }
    return j;
}

json report_json(const std::string &problem, const json &params, const LinearRun &run, const RunOptions &options)
{
    json j = {{"kind", "linear"},
              {"problem", problem},
              {"params", params},
              {"options", options_json(options)},
              {"status", run.status},
              {"diagnostic", run.diagnostic}};
    if (run.solution) {
        j["N"] = run.solution->mesh.intervals();
        j["solver"] = strip_meta(run.solution->meta, options.deterministic);
    }
    if (run.cert) {
        j["certificate"] = to_json(*run.cert, options.deterministic);
    }
    if (run.bound) {
        j["error_bound"] = {{"bound", interval_json(run.bound->bound)},
                            {"residual",
                             {{"integral", interval_json(run.bound->residual.integral)},
                              {"boundary", interval_json(run.bound->residual.boundary)}}},
                            {"component_bounds", run.bound->component_bounds}};
    }
    if (run.input_error) {
        j["input_error"] = *run.input_error;
    }
    if (!options.deterministic) {
        j["seconds"] = run.seconds;
    }
    return j;
}

json report_json(const std::string &problem, const json &params, const NonlinearRun &run, const RunOptions &options)
{
    json j = {{"kind", "nonlinear"},
              {"problem", problem},
              {"params", params},
              {"options", options_json(options)},
              {"status", run.status},
              {"diagnostic", run.diagnostic}};
    if (run.solution) {
        j["N"] = run.solution->mesh.intervals();
        j["solver"] = strip_meta(run.solution->meta, options.deterministic);
    }
    if (run.cert) {
        j["certificate"] = to_json(*run.cert, options.deterministic);
    }
    if (!options.deterministic) {
        j["seconds"] = run.seconds;
    }
    return j;
}

json report_json(const std::vector<TableResult> &rows, const RunOptions &options)
{
    json out = json::array();
    for (const auto &r : rows) {
        const auto &ref = r.reference;
        json row = {{"problem", ref.problem},
                    {"eps", ref.eps},
                    {"N", ref.N},
                    {"status", r.run.status},
                    {"diagnostic", r.run.diagnostic},
                    {"reference",
                     {{"input_error", ref.input_error}, {"alpha", ref.alpha}, {"error_bound", ref.error_bound}}},
                    {"input_error", nullptr},
                    {"alpha", nullptr},
                    {"error_bound", nullptr}};
        if (r.run.input_error) {
            row["input_error"] = *r.run.input_error;
        }
        if (r.run.cert) {
            row["alpha"] = r.run.cert->alpha.hi();
            row["weights"] = r.run.cert->W.diag();
        }
        if (r.run.bound) {
            row["error_bound"] = r.run.bound->bound.hi();
            row["error_bound_ratio"] = r.run.bound->bound.hi() / ref.error_bound;
        }
        if (!options.deterministic) {
            row["seconds"] = r.run.seconds;
        }
        out.push_back(std::move(row));
    }
    return {{"kind", "table"}, {"options", options_json(options)}, {"rows", out}};
}

void write_text(std::ostream &out, const json &report)
{
    const std::string kind = report.value("kind", "");
    if (kind == "table") {
        out << std::left << std::setw(16) << "problem" << std::setw(8) << "eps" << std::setw(6) << "N"
            << std::setw(24) << "input error" << std::setw(24) << "alpha" << std::setw(24) << "error bound"
            << "status\n";
        out << std::setw(30) << "" << "ours / reference\n";
        for (const auto &r : report["rows"]) {
            const auto &ref = r["reference"];
            auto pair = [](const json &a, const json &b) { return fmt(a) + " / " + fmt(b); };
            out << std::setw(16) << r["problem"].get<std::string>() << std::setw(8) << short_eps(r["eps"].get<double>())
                << std::setw(6) << r["N"].get<std::size_t>() << std::setw(24)
                << pair(r["input_error"], ref["input_error"]) << std::setw(24) << pair(r["alpha"], ref["alpha"])
                << std::setw(24) << pair(r["error_bound"], ref["error_bound"]) << r["status"].get<std::string>();
            if (!r["diagnostic"].get<std::string>().empty()) {
                out << " (" << r["diagnostic"].get<std::string>() << ")";
            }
            out << "\n";
        }
        return;
    }
    out << kind << " certificate for " << report.value("problem", "?");
    if (report.contains("N")) {
        out << ", N = " << report["N"].get<std::size_t>();
    }
    out << ", m = " << report["options"]["m"].get<std::size_t>() << ", " << report["options"]["mode"].get<std::string>()
        << "\n";
    out << "  status: " << report["status"].get<std::string>();
    if (!report["diagnostic"].get<std::string>().empty()) {
        out << " (" << report["diagnostic"].get<std::string>() << ")";
    }
    out << "\n";
    if (!report.contains("certificate")) {
        return;
    }
    const auto &c = report["certificate"];
    const auto &lin = kind == "nonlinear" ? c["linear"] : c;
    out << "  ||I - FH|| <= " << fmt(upper(lin["alpha"])) << "\n";
    out << "  ||H||      <= " << fmt(upper(lin["H_norm"])) << "\n";
    out << "  ||F^-1||   <= " << fmt(upper(lin["Finv_norm"])) << "\n";
    out << "  weights:";
    for (const auto &w : lin["weights"]) {
        out << " " << fmt(w);
    }
    out << "\n";
    if (kind == "linear" && report.contains("error_bound")) {
        out << "  error bound (weighted): " << fmt(upper(report["error_bound"]["bound"])) << "\n";
    }
    if (report.contains("input_error")) {
        out << "  input error (refinement): " << fmt(report["input_error"]) << "\n";
    }
    if (kind == "nonlinear") {
        const auto &nk = c["newton_kantorovich"];
        out << "  ||G(y0)||  <= " << fmt(upper(c["residual"]["norm"])) << "\n";
        out << "  K <= " << fmt(upper(nk["K"])) << ", eta <= " << fmt(upper(nk["eta"])) << ", h <= "
            << fmt(upper(nk["h"])) << "\n";
        if (nk["certified"].get<bool>()) {
            out << "  exists in radius s0 <= " << fmt(upper(nk["s0"])) << ", unique in radius s1 >= "
                << fmt(nk["s1"]["lo"]) << "\n";
        }
    }
    if (report.contains("seconds")) {
        out << "  wall time: " << std::fixed << std::setprecision(2) << report["seconds"].get<double>() << " s\n"
            << std::defaultfloat;
    }
}

} // namespace bvpcert
