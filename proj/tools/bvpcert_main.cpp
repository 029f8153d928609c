#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "bvpcert/report.hpp"

using namespace bvpcert;
using json = nlohmann::json;

namespace {

struct Config {
    std::string problem;
    std::string solution;
    std::optional<double> eps, b, omega, sigma, beta, rho;
    std::size_t N = 0;
    std::size_t m = 15;
    std::string mode = "rigorous";
    std::string weights;
    std::optional<double> radius;
    bool search = false;
    std::string output;
    bool deterministic = false;
    unsigned workers = 1;
    double tol = 1e-10;
};

unsigned default_workers()
{
    if (const char *env = std::getenv("BVPCERT_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception &) {
        }
        std::cerr << "warning: ignoring BVPCERT_WORKERS=" << env << "\n";
    }
    return 1;
}

json collect_params(const Config &c, json base)
{
    auto put = [&](const char *key, const std::optional<double> &v) {
        if (v) {
            base[key] = *v;
        }
    };
    put("eps", c.eps);
    put("b", c.b);
    put("omega", c.omega);
    put("sigma", c.sigma);
    put("beta", c.beta);
    put("rho", c.rho);
    return base;
}

std::size_t default_N(const std::string &problem)
{
    if (problem == "lorenz") {
        return 35;
    }
    if (problem == "exact-test") {
        return 32;
    }
    return 230;
}

RunOptions run_options(const Config &c, WeightRule fallback)
{
    RunOptions o;
    o.m = c.m;
    o.mode = parse_mode(c.mode);
    o.weights = c.weights.empty() ? fallback : parse_weights(c.weights);
    o.workers = c.deterministic ? 1 : c.workers;
    o.solver_tol = c.tol;
    o.deterministic = c.deterministic;
    return o;
}

void emit(const json &report, const Config &c)
{
    write_text(std::cout, report);
    if (!c.output.empty()) {
        std::ofstream f(c.output);
        if (!f) {
            throw ConfigError("cannot write report to " + c.output);
        }
        f << report.dump(2) << "\n";
    }
}

int exit_code(const std::string &status)
{
    return status == "certified" ? 0 : 2;
}

int cmd_certify(const Config &c)
{
    std::optional<ApproximateSolution> sol;
    std::string name = c.problem;
    json params = json::object();
    if (!c.solution.empty()) {
        sol = ingest_solution(c.solution);
        if (name.empty()) {
            name = sol->problem;
        }
        params = sol->params;
    }
    if (name.empty()) {
        throw ConfigError("--problem or --solution is required");
    }
    params = collect_params(c, params);
    const auto instance = builtin_problem(name, params);
    if (std::holds_alternative<LinearBVProblem>(instance)) {
        const auto &problem = std::get<LinearBVProblem>(instance);
        const auto o = run_options(c, WeightRule::Identity);
        const auto run = sol ? run_linear(problem, *sol, o)
                             : run_linear(problem, Mesh::uniform(c.N ? c.N : default_N(name)), o);
        emit(report_json(name, problem.params, run, o), c);
        return exit_code(run.status);
    }
    const auto &model = *std::get<std::shared_ptr<const NonlinearModel>>(instance);
    if (!c.radius) {
        throw ConfigError("--radius is required for nonlinear problems");
    }
    const auto o = run_options(c, WeightRule::Identity);
    if (o.weights != WeightRule::Identity) {
        throw ConfigError("nonlinear certification uses identity weights");
    }
    const auto run = sol ? run_nonlinear(model, *sol, *c.radius, c.search, o)
                         : run_nonlinear(model, Mesh::uniform(c.N ? c.N : default_N(name)), *c.radius, c.search, o);
    emit(report_json(name, model.params(), run, o), c);
    return exit_code(run.status);
}

int cmd_table1(const Config &c)
{
    auto o = run_options(c, WeightRule::Adaptive);
    o.input_error = true;
    const auto rows = run_table(o);
    emit(report_json(rows, o), c);
    for (const auto &r : rows) {
        if (r.run.status == "error") {
            return 1;
        }
    }
    for (const auto &r : rows) {
        if (r.run.status != "certified") {
            return 2;
        }
    }
    return 0;
}

int cmd_solve(const Config &c)
{
    if (c.problem.empty()) {
        throw ConfigError("--problem is required");
    }
    if (c.output.empty()) {
        throw ConfigError("--output is required");
    }
    const auto instance = builtin_problem(c.problem, collect_params(c, json::object()));
    const auto mesh = Mesh::uniform(c.N ? c.N : default_N(c.problem));
    SolverOptions so;
    so.m = c.m;
    so.tol = c.tol;
    ApproximateSolution sol;
    try {
        sol = std::holds_alternative<LinearBVProblem>(instance)
                  ? solve_linear_bvp(std::get<LinearBVProblem>(instance), mesh, so)
                  : solve_nonlinear_bvp(*std::get<std::shared_ptr<const NonlinearModel>>(instance), mesh, so);
    } catch (const UnderflowDiagnostic &e) {
        std::cerr << "underflow: " << e.what() << "\n";
        return 2;
    }
    export_solution(sol, c.output);
    std::cout << "wrote " << c.output << " (N = " << mesh.intervals() << ", n = " << sol.n << ")\n";
    return 0;
}

void add_problem_flags(CLI::App *cmd, Config &c)
{
    cmd->add_option("--problem", c.problem, "turning-point, potential-well, exact-test, lorenz")
        ->check(CLI::IsMember({"turning-point", "potential-well", "exact-test", "lorenz"}));
    cmd->add_option("--eps", c.eps, "perturbation parameter")->check(CLI::PositiveNumber);
    cmd->add_option("--b", c.b, "interval length of the exact test problem")->check(CLI::PositiveNumber);
    cmd->add_option("--omega", c.omega, "potential well half-width");
    cmd->add_option("--sigma", c.sigma, "Lorenz sigma");
    cmd->add_option("--beta", c.beta, "Lorenz beta");
    cmd->add_option("--rho", c.rho, "Lorenz rho");
    cmd->add_option("--N", c.N, "number of subintervals")->check(CLI::PositiveNumber);
    cmd->add_option("--m", c.m, "local Taylor degree")->check(CLI::Range(1, 60));
    cmd->add_option("--tol", c.tol, "solver backward-error tolerance")->check(CLI::PositiveNumber);
}

void add_run_flags(CLI::App *cmd, Config &c)
{
    cmd->add_option("--mode", c.mode, "rigorous or fast")->check(CLI::IsMember({"rigorous", "fast", "fast-float"}));
    cmd->add_option("--weights", c.weights, "identity or adaptive")->check(CLI::IsMember({"identity", "adaptive"}));
    cmd->add_option("--workers", c.workers, "worker threads (default BVPCERT_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--deterministic", c.deterministic, "single worker, no timings in the report");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rigorous a posteriori certification of two-point boundary value problems"};
    app.require_subcommand(1);
    Config c;
    c.workers = default_workers();

    auto *certify = app.add_subcommand("certify", "certify a built-in problem or a solution file");
    add_problem_flags(certify, c);
    add_run_flags(certify, c);
    certify->add_option("--solution", c.solution, "solution file from `solve` or an external solver")
        ->check(CLI::ExistingFile);
    certify->add_option("--radius", c.radius, "ball radius for the nonlinear test")->check(CLI::PositiveNumber);
    certify->add_flag("--search", c.search, "double the radius until the nonlinear test passes");
    certify->add_option("--output", c.output, "JSON report path");

    auto *table = app.add_subcommand("table1", "rerun the five reference benchmark rows");
    table->add_option("--m", c.m, "local Taylor degree")->check(CLI::Range(1, 60));
    add_run_flags(table, c);
    table->add_option("--output", c.output, "JSON report path");

    auto *solve = app.add_subcommand("solve", "compute and export an approximate solution");
    add_problem_flags(solve, c);
    solve->add_option("--output", c.output, "solution file path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (certify->parsed()) {
            return cmd_certify(c);
        }
        if (table->parsed()) {
            return cmd_table1(c);
        }
        return cmd_solve(c);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
