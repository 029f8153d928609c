#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bvpcert/approx_solver.hpp"
#include "bvpcert/linear_verifier.hpp"
#include "bvpcert/nonlinear_verifier.hpp"

namespace bvpcert {

enum class WeightRule { Identity, Adaptive };

std::string to_string(ArithmeticMode mode);
std::string to_string(WeightRule rule);
ArithmeticMode parse_mode(const std::string &s);
WeightRule parse_weights(const std::string &s);

struct RunOptions {
    std::size_t m = 15;
    ArithmeticMode mode = ArithmeticMode::Rigorous;
    WeightRule weights = WeightRule::Identity;
    unsigned workers = 1;
    double solver_tol = 1e-10;
    // Also solve on the mesh refined by 3 and compare at shared midpoints.
    bool input_error = false;
    // Drop wall times and timestamps from reports.
    bool deterministic = false;
};

// Outcome of one linear run. status is "certified", "failed" or "underflow";
// the latter two are valid runs whose test did not pass.
struct LinearRun {
    std::string status;
    std::string diagnostic;
    std::optional<ApproximateSolution> solution;
    std::optional<LinearCertificate> cert;
    std::optional<InhomogeneousBound> bound;
    std::optional<double> input_error;
    double seconds = 0;
};

LinearRun run_linear(const LinearBVProblem &problem, const Mesh &mesh, const RunOptions &options);
// Certify externally supplied nodes; no solve.
LinearRun run_linear(const LinearBVProblem &problem, const ApproximateSolution &sol, const RunOptions &options);

struct NonlinearRun {
    std::string status;
    std::string diagnostic;
    std::optional<ApproximateSolution> solution;
    std::optional<NonlinearCertificate> cert;
    double seconds = 0;
};

NonlinearRun run_nonlinear(const NonlinearModel &model, const Mesh &mesh, double radius, bool search,
                           const RunOptions &options);
NonlinearRun run_nonlinear(const NonlinearModel &model, const ApproximateSolution &sol, double radius, bool search,
                           const RunOptions &options);

// Reference values for one row of the benchmark table.
struct TableRow {
    std::string problem;
    double eps;
    std::size_t N;
    double input_error;
    double alpha;
    double error_bound;
};

const std::vector<TableRow> &reference_table();

struct TableResult {
    TableRow reference;
    LinearRun run;
};

std::vector<TableResult> run_table(const RunOptions &options);

nlohmann::json interval_json(const Interval &x);
nlohmann::json to_json(const LinearCertificate &cert, bool deterministic = false);
nlohmann::json to_json(const NonlinearCertificate &cert, bool deterministic = false);
nlohmann::json report_json(const std::string &problem, const nlohmann::json &params, const LinearRun &run,
                           const RunOptions &options);
nlohmann::json report_json(const std::string &problem, const nlohmann::json &params, const NonlinearRun &run,
                           const RunOptions &options);
nlohmann::json report_json(const std::vector<TableResult> &rows, const RunOptions &options);

void write_text(std::ostream &out, const nlohmann::json &report);

} // namespace bvpcert
