#include "bvpcert/interval_matrix.hpp"

#include <cmath>

namespace bvpcert {

WeightMatrix::WeightMatrix(std::vector<double> diag) : diag_(std::move(diag))
{
    if (diag_.empty()) {
        throw ShapeError("weight matrix needs at least one entry");
    }
    for (double w : diag_) {
        if (!(w > 0) || !std::isfinite(w)) {
            throw DomainError("weights must be positive and finite");
        }
    }
}

double weighted_norm(const Eigen::MatrixXd &m, const WeightMatrix &w)
{
    if (static_cast<std::size_t>(m.rows()) != w.size() || static_cast<std::size_t>(m.cols()) != w.size()) {
        throw ShapeError("weight dimension does not match matrix");
    }
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row += w[static_cast<std::size_t>(i)] * std::fabs(m(i, j)) / w[static_cast<std::size_t>(j)];
        }
        best = std::max(best, row);
    }
    return best;
}

double weighted_norm(const Eigen::VectorXd &v, const WeightMatrix &w)
{
    if (static_cast<std::size_t>(v.size()) != w.size()) {
        throw ShapeError("weight dimension does not match vector");
    }
    double best = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        best = std::max(best, w[static_cast<std::size_t>(i)] * std::fabs(v(i)));
    }
    return best;
}

} // namespace bvpcert
