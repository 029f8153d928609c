#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvpcert/approx_solver.hpp"
#include "bvpcert/linear_verifier.hpp"
#include "bvpcert/problems.hpp"

namespace bvpcert {

struct NKParameters {
    Interval beta{0.0};
    Interval K{0.0};
    Interval eta{0.0};
    Interval h{0.0};
    Interval s0{0.0};
    Interval s1{0.0};
    double radius = 0;
    bool certified = false;
    std::string reason;
};

// h = beta K eta; existence in the ball of radius s0 and uniqueness in the
// ball of radius s1, with s0 = (1 - sqrt(1 - 2h)) / (beta K) evaluated as
// 2 eta / (1 + sqrt(1 - 2h)) to avoid cancellation. K = 0 gives s0 = eta.
NKParameters newton_kantorovich(const Interval &beta, const Interval &K, const Interval &eta, double radius);

// Local pieces of the approximate solution, one per subinterval, degree m.
std::vector<MatrixPolynomial<Interval>> solution_pieces(const NonlinearModel &model, const Mesh &mesh,
                                                        const std::vector<Eigen::VectorXd> &y_nodes, std::size_t m);

// Bound on ||G(y0)|| for y' = f(y), g(y(0), y(1)) = 0 in integral form.
ResidualNorms bound_residual(const NonlinearModel &model, const Mesh &mesh, const std::vector<Eigen::VectorXd> &y_nodes,
                             std::size_t m, const WeightMatrix &W);

// Lipschitz constant of DG over the ball of the given radius around y0.
// Boundary conditions are assumed affine (true for the built-in models),
// so only the field contributes.
Interval bound_lipschitz(const NonlinearModel &model, const Mesh &mesh, const std::vector<Eigen::VectorXd> &y_nodes,
                         std::size_t m, double radius, const WeightMatrix &W);

struct NonlinearCertificate {
    LinearCertificate linear;
    NKParameters nk;
    ResidualNorms residual;
    Interval residual_norm{0.0};
    bool certified = false;
    std::string stage; // where it stopped: linear, newton-kantorovich
    std::string reason;
    double seconds = 0;
};

NonlinearCertificate certify_nonlinear(const NonlinearModel &model, const ApproximateSolution &sol, double radius,
                                       const VerifyOptions &options = {},
                                       ArithmeticMode mode = ArithmeticMode::Rigorous);

// Starting from `radius`, double the ball until the NK test passes or h
// exceeds 1/2 (K only grows with the radius).
NonlinearCertificate certify_nonlinear_search(const NonlinearModel &model, const ApproximateSolution &sol,
                                              double radius, std::size_t max_doublings = 20,
                                              const VerifyOptions &options = {},
                                              ArithmeticMode mode = ArithmeticMode::Rigorous);

} // namespace bvpcert
