#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bvpcert/taylor.hpp"

namespace bvpcert {

// Strictly increasing nodes 0 = t_0 < ... < t_N = 1. Subintervals are
// indexed j = 0..N-1 and span [t_j, t_{j+1}].
class Mesh {
public:
    explicit Mesh(std::vector<double> nodes);
    static Mesh uniform(std::size_t intervals);

    std::size_t intervals() const noexcept { return nodes_.size() - 1; }
    const std::vector<double> &nodes() const noexcept { return nodes_; }
    double node(std::size_t i) const { return nodes_.at(i); }
    double mid(std::size_t j) const { return mids_.at(j); }
    // Upper bound on t_{j+1} - t_j.
    double width(std::size_t j) const { return widths_.at(j); }
    // Half-width of the expansion interval about mid(j); it covers [t_j, t_{j+1}].
    double halfwidth(std::size_t j) const { return halfwidths_.at(j); }

    friend bool operator==(const Mesh &a, const Mesh &b) { return a.nodes_ == b.nodes_; }

private:
    std::vector<double> nodes_;
    std::vector<double> mids_;
    std::vector<double> widths_;
    std::vector<double> halfwidths_;
};

// Taylor data of A(t) (or of a vector forcing) on subinterval j, order m.
using TaylorProvider = std::function<TaylorData<Interval>(const Mesh &, std::size_t, std::size_t)>;

// B0 v(0) + B1 v(1) = w,  v(t) - v(0) - int_0^t A v = r(t),  r(t) = int_0^t q.
struct LinearBVProblem {
    std::string id;
    nlohmann::json params = nlohmann::json::object();
    std::size_t n = 0;
    Eigen::MatrixXd B0;
    Eigen::MatrixXd B1;
    Eigen::VectorXd w;
    TaylorProvider a_taylor;
    // Taylor data of q = r' with n x 1 coefficients; empty means r = 0.
    TaylorProvider forcing_taylor;
    std::size_t smoothness = std::numeric_limits<std::size_t>::max();
};

// f(y(t)) for a polynomial y on one subinterval: polynomial part plus an
// enclosure of whatever is not represented exactly by it.
struct FieldExpansion {
    MatrixPolynomial<Interval> poly;
    IMatrix remainder;
};

// Nonlinear BVP y' = f(y), g(y(0), y(1)) = 0 supplied programmatically.
class NonlinearModel {
public:
    virtual ~NonlinearModel() = default;

    virtual std::string id() const = 0;
    virtual nlohmann::json params() const = 0;
    virtual std::size_t dim() const = 0;

    // Taylor coefficients about the subinterval center of the local solution
    // through `node`; result[i][k] is coefficient k of component i.
    virtual std::vector<std::vector<double>> series(const Eigen::VectorXd &node, std::size_t m) const = 0;
    virtual std::vector<std::vector<Interval>> series(std::span<const Interval> node, std::size_t m) const = 0;

    virtual FieldExpansion field(const MatrixPolynomial<Interval> &y) const = 0;
    virtual Eigen::VectorXd field(const Eigen::VectorXd &y) const = 0;
    // Taylor data of D_y f(y(t)) along the polynomial y, order m.
    virtual TaylorData<Interval> jacobian_taylor(const MatrixPolynomial<Interval> &y, std::size_t m) const = 0;

    virtual Eigen::VectorXd boundary(const Eigen::VectorXd &y0, const Eigen::VectorXd &y1) const = 0;
    virtual IMatrix boundary(const IMatrix &y0, const IMatrix &y1) const = 0;
    // (D_{y1} g, D_{y2} g) at the given end values.
    virtual std::pair<Eigen::MatrixXd, Eigen::MatrixXd> boundary_jacobians(const Eigen::VectorXd &y0,
                                                                         const Eigen::VectorXd &y1) const = 0;
    // Upper bound on sup over the box of ||D_y f(a) - D_y f(b)|| / ||a - b||
    // in the weighted norm.
    virtual Interval second_derivative_bound(std::span<const Interval> box, const WeightMatrix &w) const = 0;

    // Approximate solution values at the subinterval midpoints.
    virtual std::vector<Eigen::VectorXd> initial_guess(const Mesh &mesh) const = 0;
};

// Turn an exact polynomial expansion of A about the center (coefficients of
// tau^k, any degree) into Taylor data of order m.
TaylorData<Interval> polynomial_taylor(double center, double halfwidth, std::vector<IMatrix> coeffs, std::size_t m);

// eps v'' - (t - 1/2) v = 0, v(0) = v(1) = 1, state (v, v').
LinearBVProblem turning_point(double eps);
// eps v'' + ((t - 1/2)^2 - omega^2) v = 0, v(0) = 1, v(1) = 2.
LinearBVProblem potential_well(double eps, double omega = 0.25);
// y'' = y on [0, b], y(0) = 1, y(b) = 0, rescaled to t in [0, 1].
LinearBVProblem exact_test(double b);

struct LorenzParams {
    double sigma = 10.0;
    double beta = 8.0 / 3.0;
    double rho = 28.0;

    // 8/3 has no double representation; the nearest double is read as the
    // exact fraction so that interval runs enclose the classical parameter.
    Interval beta_interval() const
    {
        if (beta == 8.0 / 3.0) {
            return Interval(8.0) / Interval(3.0);
        }
        return Interval(beta);
    }
};

// Coefficients of x, y, z, T about the center for the period-scaled Lorenz
// field x' = T sigma (y - x), y' = T (rho x - y - x z), z' = T (x y - beta z).
template <class S>
std::array<std::vector<S>, 4> lorenz_solution_taylor(S x0, S y0, S z0, S period, const LorenzParams &p,
                                                     std::size_t m);

// Taylor data (order m) of the Lorenz Jacobian along a solution series.
TaylorData<Interval> lorenz_jacobian_taylor(const std::array<std::vector<Interval>, 4> &series,
                                            const LorenzParams &p, double center, double halfwidth,
                                            std::size_t m);

class LorenzModel final : public NonlinearModel {
public:
    explicit LorenzModel(LorenzParams p = {}) : p_(p) {}

    const LorenzParams &lorenz_params() const noexcept { return p_; }

    std::string id() const override { return "lorenz"; }
    nlohmann::json params() const override;
    std::size_t dim() const override { return 4; }
    std::vector<std::vector<double>> series(const Eigen::VectorXd &node, std::size_t m) const override;
    std::vector<std::vector<Interval>> series(std::span<const Interval> node, std::size_t m) const override;
    FieldExpansion field(const MatrixPolynomial<Interval> &y) const override;
    Eigen::VectorXd field(const Eigen::VectorXd &y) const override;
    TaylorData<Interval> jacobian_taylor(const MatrixPolynomial<Interval> &y, std::size_t m) const override;
    Eigen::VectorXd boundary(const Eigen::VectorXd &y0, const Eigen::VectorXd &y1) const override;
    IMatrix boundary(const IMatrix &y0, const IMatrix &y1) const override;
    std::pair<Eigen::MatrixXd, Eigen::MatrixXd> boundary_jacobians(const Eigen::VectorXd &y0,
                                                                 const Eigen::VectorXd &y1) const override;
    Interval second_derivative_bound(std::span<const Interval> box, const WeightMatrix &w) const override;
    std::vector<Eigen::VectorXd> initial_guess(const Mesh &mesh) const override;

private:
    LorenzParams p_;
};

// Closed-form fundamental solution and Green's function of exact_test(b),
// in the rescaled variable t in [0, 1].
class ExactTestOracle {
public:
    explicit ExactTestOracle(double b);
    double b() const noexcept { return b_; }
    Eigen::Matrix2d phi(double t) const;
    Eigen::Matrix2d phi_inverse(double t) const;
    Eigen::Matrix2d green(double t, double s) const;
    // Exact solution (y, dy/ds) of y'' = y, y(0) = 1, y(b) = 0.
    Eigen::Vector2d solution(double t) const;
    Eigen::Matrix2d a() const;

private:
    double b_;
};

ExactTestOracle exact_testprob_oracle(double b);

using ProblemInstance = std::variant<LinearBVProblem, std::shared_ptr<const NonlinearModel>>;

// name in {turning-point, potential-well, lorenz, exact-test}; params keys:
// eps, omega, b, sigma, beta, rho.
ProblemInstance builtin_problem(const std::string &name, const nlohmann::json &params);

} // namespace bvpcert
