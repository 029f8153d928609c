#pragma once

#include <cfloat>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvpcert/approx_solver.hpp"
#include "bvpcert/interval_matrix.hpp"
#include "bvpcert/problems.hpp"
#include "bvpcert/taylor.hpp"

namespace bvpcert {

enum class ArithmeticMode { Rigorous, Fast };

struct VerifyOptions {
    std::size_t m = 15;
    // Row tasks of the O(N^2) pass; results are combined in row order so the
    // bound does not depend on this.
    unsigned workers = 1;
    double subnormal_threshold = DBL_MIN;
};

// Green's function node data in factored form. With 0-based subintervals,
//   G(l, k) = Phi_l B0 Phi(0) Psi_k   for k < l,
//   G(l, k) = -Phi_l B1 Phi(1) Psi_k  for k > l,
// and the two diagonal versions Gminus/Gplus use the k < l / k > l formula.
// Phi(0) and Phi(1) are the end values of the local expansions of the first
// and last node, not the nodes themselves: only then is
// Gminus - Gplus = Phi_l (B0 Phi(0) + B1 Phi(1)) Psi_l close to I.
// Storing the N x N array explicitly is O(N^2 n^2) memory; entries are
// formed on demand instead.
template <class I>
struct GreenNodes {
    using Matrix = IntervalMatrix<I>;

    std::vector<Matrix> Phi;
    std::vector<Matrix> Psi;
    Matrix start, end;         // Phi(0), Phi(1)
    std::vector<Matrix> lower; // B0 Phi(0) Psi_k
    std::vector<Matrix> upper; // -B1 Phi(1) Psi_k
    std::vector<Matrix> Gminus;
    std::vector<Matrix> Gplus;

    std::size_t intervals() const noexcept { return Phi.size(); }
    std::size_t dim() const noexcept { return Phi.empty() ? 0 : Phi[0].rows(); }
    const Matrix &factor(std::size_t l, std::size_t k) const { return k < l ? lower[k] : upper[k]; }
    Matrix G(std::size_t l, std::size_t k) const;
};

template <class I>
GreenNodes<I> build_green_nodes(const FundamentalNodes &nodes, const Eigen::MatrixXd &B0, const Eigen::MatrixXd &B1,
                                const IntervalMatrix<I> &phi_start, const IntervalMatrix<I> &phi_end,
                                double subnormal_threshold = DBL_MIN);

// Same, with Phi(0) and Phi(1) taken from the degree-m expansions of A.
template <class I>
GreenNodes<I> build_green_nodes(const LinearBVProblem &problem, const Mesh &mesh, const FundamentalNodes &nodes,
                                std::size_t m, double subnormal_threshold = DBL_MIN);

// Everything the bounds need from one subinterval.
template <class I>
struct SubintervalData {
    using Matrix = IntervalMatrix<I>;

    TaylorData<I> a;
    MatrixPolynomial<I> E; // I + E_j(t)
    MatrixPolynomial<I> F; // I + F_j(t)
    ResidualBound<I> R;
    Matrix E_left, E_right; // I + E_j at t_j and t_{j+1}
    double width = 0;       // upper bound on h_j
    double residual_factor = 0; // integral of |tau|^m over the subinterval
    double A_norm = 0;
    double IF_norm = 0;
    double E_norm = 0;
};

template <class I>
std::vector<SubintervalData<I>> prepare_subintervals(const LinearBVProblem &problem, const Mesh &mesh,
                                                     const WeightMatrix &W, std::size_t m);

struct AlphaTerms {
    // First component of I - FH.
    double residual_offdiag = 0; // R_j against G(j,k), k != j
    double green_jumps = 0;      // jumps of Phi at interior nodes, applied to G
    double residual_diag = 0;    // R_j against the diagonal block
    double diagonal_identity = 0;
    double phi_jumps = 0;        // jumps of Phi times (1 + |B1|)
    double residual_phi = 0;     // R_j Phi_j times (1 + |B1|)
    double first = 0;
    // Second component (boundary rows).
    double boundary_green = 0;
    double boundary_phi = 0;
    double second = 0;
};

template <class I>
struct AlphaBound {
    I alpha;
    AlphaTerms terms;
};

template <class I>
AlphaBound<I> bound_I_minus_FH(const LinearBVProblem &problem, const Mesh &mesh, const GreenNodes<I> &green,
                               const WeightMatrix &W, const VerifyOptions &options = {});

template <class I>
I bound_H(const LinearBVProblem &problem, const Mesh &mesh, const GreenNodes<I> &green, const WeightMatrix &W,
          const VerifyOptions &options = {});

struct LinearCertificate {
    std::string problem;
    std::size_t N = 0;
    std::size_t m = 0;
    ArithmeticMode mode = ArithmeticMode::Rigorous;
    Interval alpha{0.0};
    Interval H_norm{0.0};
    Interval Finv_norm{0.0};
    WeightMatrix W = WeightMatrix::identity(1);
    bool certified = false;
    std::string reason;
    AlphaTerms terms;
    double seconds = 0;
};

template <class I>
LinearCertificate certify_linear(const LinearBVProblem &problem, const Mesh &mesh, const FundamentalNodes &nodes,
                                 const WeightMatrix &W, const VerifyOptions &options = {});

LinearCertificate certify_linear(const LinearBVProblem &problem, const Mesh &mesh, const FundamentalNodes &nodes,
                                 const WeightMatrix &W, ArithmeticMode mode, const VerifyOptions &options = {});

// w_i sum_j |err_j^i| = const with max_i w_i = 1; zero sums get weight 1.
WeightMatrix choose_weights(std::span<const double> sums);

// Per-component sums over the nodes of the zero-order residual term
// |v(t_j) - v(0) - int_0^{t_j} (A v + q)|, which collects the jumps of the
// local pieces. Measured in interval arithmetic (upper magnitude).
std::vector<double> jump_errors(const LinearBVProblem &problem, const Mesh &mesh,
                                const std::vector<Eigen::VectorXd> &v_nodes, std::size_t m);

// Residual of a piecewise polynomial approximation measured the way the
// bounds need it: sup over t of |y(t) - y(0) - int_0^t f - r(t)| and the
// boundary mismatch.
struct ResidualNorms {
    Interval integral{0.0};
    Interval boundary{0.0};
    Interval total() const { return max(integral, boundary); }
};

// Piece data for residual_norms: y on each subinterval, its defect
// y' - f(y) - q as a polynomial, and an enclosure bound on the
// sup of the unrepresented remainder integrated over the subinterval.
struct DefectPiece {
    MatrixPolynomial<Interval> y;
    MatrixPolynomial<Interval> defect;
    double remainder_integral = 0;
    // Defect coefficients below this degree are exactly zero in real
    // arithmetic and are skipped.
    std::size_t zero_below = 0;
};

// node_sums, if given, receives per-component sums of the running value at
// the left end of each subinterval.
ResidualNorms residual_norms(const Mesh &mesh, const std::vector<DefectPiece> &pieces, const IMatrix &boundary_residual,
                             const WeightMatrix &W, std::vector<double> *node_sums = nullptr);

struct InhomogeneousBound {
    Interval bound{0.0};
    ResidualNorms residual;
    // |v_i - v~_i| <= bound / w_i
    std::vector<double> component_bounds;
};

InhomogeneousBound verify_inhomogeneous(const LinearCertificate &cert, const LinearBVProblem &problem,
                                        const Mesh &mesh, const std::vector<Eigen::VectorXd> &v_nodes);

// Local expansion of the approximate solution through the node value on
// subinterval j, degree m.
MatrixPolynomial<Interval> extend_node(const TaylorData<Interval> &a, const TaylorData<Interval> *q,
                                       const Eigen::VectorXd &node, std::size_t m);

} // namespace bvpcert
