#pragma once

#include <cfloat>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bvpcert/problems.hpp"

namespace bvpcert {

// Floating node data of the approximate BVP fundamental solution.
struct FundamentalNodes {
    std::vector<Eigen::MatrixXd> Phi; // values at subinterval midpoints
    std::vector<Eigen::MatrixXd> Psi; // approximate inverses of Phi
};

struct ApproximateSolution {
    std::string problem;
    nlohmann::json params = nlohmann::json::object();
    std::size_t n = 0;
    Mesh mesh = Mesh::uniform(1);
    std::size_t m = 15;
    std::vector<Eigen::VectorXd> v_nodes;
    FundamentalNodes fundamentals;
    nlohmann::json meta = nlohmann::json::object();
};

struct SolverOptions {
    // Degree of the local Taylor pieces that are matched across nodes.
    std::size_t m = 15;
    // Scaled residual tolerance of the global system (linear) or of the
    // matching equations (nonlinear).
    double tol = 1e-10;
    // Node entries with 0 < |x| < threshold are reported as underflow.
    double subnormal_threshold = DBL_MIN;
    std::size_t max_iterations = 60;
};

// Raise UnderflowDiagnostic if any entry is non-finite or below the
// threshold in magnitude (exact zeros are allowed).
void check_node_magnitudes(const FundamentalNodes &nodes, double threshold);

ApproximateSolution solve_linear_bvp(const LinearBVProblem &problem, const Mesh &mesh,
                                     const SolverOptions &options = {});
ApproximateSolution solve_nonlinear_bvp(const NonlinearModel &model, const Mesh &mesh,
                                        const SolverOptions &options = {},
                                        const std::vector<Eigen::VectorXd> *initial_guess = nullptr);

// BVP fundamental nodes only (w and the forcing are ignored).
FundamentalNodes solve_fundamentals(const LinearBVProblem &problem, const Mesh &mesh,
                                    const SolverOptions &options = {});

// The linearization of a nonlinear model about node values, as a linear
// problem whose A(t) is D_y f along the local series.
LinearBVProblem linearize(const NonlinearModel &model, const Mesh &mesh, const std::vector<Eigen::VectorXd> &y_nodes);

nlohmann::json solution_to_json(const ApproximateSolution &sol);
ApproximateSolution solution_from_json(const nlohmann::json &doc);
void export_solution(const ApproximateSolution &sol, const std::string &path);
ApproximateSolution ingest_solution(const std::string &path);

} // namespace bvpcert
