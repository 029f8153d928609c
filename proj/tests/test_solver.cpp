#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "bvpcert/approx_solver.hpp"
#include "oracle.hpp"

using namespace bvpcert;

namespace {

LinearBVProblem constant_problem(const Eigen::Vector2d &c)
{
    LinearBVProblem p;
    p.id = "constant";
    p.n = 2;
    p.B0 = Eigen::Matrix2d::Identity();
    p.B1 = Eigen::Matrix2d::Zero();
    p.w = c;
    p.a_taylor = [](const Mesh &mesh, std::size_t j, std::size_t m) {
        return polynomial_taylor(mesh.mid(j), mesh.halfwidth(j), {IMatrix::zero(2, 2)}, m);
    };
    return p;
}

std::string temp_path(const char *name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

double max_node_error(const ApproximateSolution &sol, const oracle::SinhProblem &s)
{
    double e = 0;
    for (std::size_t j = 0; j < sol.v_nodes.size(); ++j) {
        e = std::max(e, (sol.v_nodes[j] - s.solution(sol.mesh.mid(j))).cwiseAbs().maxCoeff());
    }
    return e;
}

} // namespace

TEST_SUITE("solver")
{
    TEST_CASE("v' = 0 gives constant nodes")
    {
        const Eigen::Vector2d c(3.5, -1.25);
        const auto sol = solve_linear_bvp(constant_problem(c), Mesh::uniform(5));
        for (const auto &v : sol.v_nodes) {
            CHECK((v - c).cwiseAbs().maxCoeff() < 1e-14);
        }
    }

    TEST_CASE("turning point nodes match the Airy solution")
    {
        const double eps = 1e-4;
        const oracle::AiryTurningPoint airy(eps);
        const auto sol = solve_linear_bvp(turning_point(eps), Mesh::uniform(230));
        double worst = 0;
        for (std::size_t j = 0; j < sol.v_nodes.size(); ++j) {
            worst = std::max(worst, (sol.v_nodes[j] - airy.solution(sol.mesh.mid(j))).cwiseAbs().maxCoeff());
        }
        MESSAGE("max node error " << worst);
        CHECK(worst <= 1e-8);
    }

    TEST_CASE("fundamental nodes and their inverses")
    {
        const auto sol = solve_linear_bvp(exact_test(1.0), Mesh::uniform(32));
        const oracle::SinhProblem s{1.0};
        for (std::size_t j = 0; j < 32; ++j) {
            const Eigen::MatrixXd prod = sol.fundamentals.Phi[j] * sol.fundamentals.Psi[j];
            CHECK((prod - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((sol.fundamentals.Phi[j] - s.fundamental(sol.mesh.mid(j))).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }

    TEST_CASE("error decreases at the order of the local series")
    {
        const oracle::SinhProblem s{3.0};
        SolverOptions o;
        o.m = 3;
        std::vector<double> err;
        for (std::size_t N : {8, 16, 32}) {
            err.push_back(max_node_error(solve_linear_bvp(exact_test(3.0), Mesh::uniform(N), o), s));
        }
        const double slope1 = std::log2(err[0] / err[1]);
        const double slope2 = std::log2(err[1] / err[2]);
        MESSAGE("observed orders " << slope1 << ", " << slope2);
        CHECK(slope1 >= 2.5);
        CHECK(slope2 >= 2.5);
    }

    TEST_CASE("underflowing decay is reported, not solved")
    {
        CHECK_THROWS_AS(solve_linear_bvp(turning_point(1e-7), Mesh::uniform(600)), UnderflowDiagnostic);
    }

    TEST_CASE("Lorenz orbit converges with the phase condition")
    {
        LorenzModel model;
        const auto sol = solve_nonlinear_bvp(model, Mesh::uniform(35));
        const double T = sol.v_nodes[0](3);
        CHECK(T == doctest::Approx(1.559).epsilon(0.01));
        // start of the orbit from the first local series
        const auto c = model.series(sol.v_nodes[0], 15);
        const double h = -sol.mesh.halfwidth(0);
        double x0 = 0, y0 = 0, z0 = 0;
        for (std::size_t k = 16; k-- > 0;) {
            x0 = x0 * h + c[0][k];
            y0 = y0 * h + c[1][k];
            z0 = z0 * h + c[2][k];
        }
        CHECK(std::fabs(x0 - y0) <= 1e-10);
        // closed orbit: an independent integration over one period returns
        using State = std::array<double, 3>;
        State u{x0, y0, z0};
        namespace ode = boost::numeric::odeint;
        ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<State>()),
                                [T](const State &s, State &ds, double) {
                                    ds = {T * 10 * (s[1] - s[0]), T * (s[0] * (28 - s[2]) - s[1]),
                                          T * (s[0] * s[1] - 8.0 / 3.0 * s[2])};
                                },
                                u, 0.0, 1.0, 1e-3);
        CHECK(std::fabs(u[0] - x0) + std::fabs(u[1] - y0) + std::fabs(u[2] - z0) <= 1e-6);
        CHECK(sol.meta["matching_residual"].get<double>() <= 1e-10);
        for (const auto &v : sol.v_nodes) {
            CHECK(v(3) == T);
        }
    }

    TEST_CASE("export then ingest is bit-exact")
    {
        const auto sol = solve_linear_bvp(turning_point(1e-5), Mesh::uniform(250));
        const auto path = temp_path("bvpcert_roundtrip.json");
        export_solution(sol, path);
        const auto back = ingest_solution(path);
        std::remove(path.c_str());
        CHECK(back.problem == sol.problem);
        CHECK(back.n == sol.n);
        CHECK(back.mesh == sol.mesh);
        bool same = true;
        for (std::size_t j = 0; j < sol.v_nodes.size(); ++j) {
            same = same && (back.v_nodes[j].array() == sol.v_nodes[j].array()).all();
            same = same && (back.fundamentals.Phi[j].array() == sol.fundamentals.Phi[j].array()).all();
            same = same && (back.fundamentals.Psi[j].array() == sol.fundamentals.Psi[j].array()).all();
        }
        CHECK(same);
    }

    TEST_CASE("malformed solution files name the offending field")
    {
        const auto good = solution_to_json(solve_linear_bvp(exact_test(1.0), Mesh::uniform(4)));
        auto field_of = [](const nlohmann::json &doc) {
            try {
                solution_from_json(doc);
            } catch (const FormatError &e) {
                return e.field();
            }
            return std::string("<accepted>");
        };
        auto short_nodes = good;
        short_nodes["v_nodes"].erase(0);
        CHECK(field_of(short_nodes).rfind("v_nodes", 0) == 0);

        auto bad_mesh = good;
        bad_mesh["mesh"][2] = 0.1;
        CHECK(field_of(bad_mesh).rfind("mesh", 0) == 0);

        auto nan_entry = good;
        nan_entry["phi_nodes"][1][0][1] = "nan";
        CHECK(field_of(nan_entry) == "phi_nodes[1][0][1]");

        auto wrong_dim = good;
        wrong_dim["n"] = 3;
        CHECK(field_of(wrong_dim) != "<accepted>");

        CHECK(field_of(nlohmann::json::array()) == "$");
        CHECK(field_of(good) == "<accepted>");
    }
}
