#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bvpcert/errors.hpp"
#include "bvpcert/interval.hpp"

namespace bvpcert {

// Diagonal weight W of the weighted infinity norm |W v|.
class WeightMatrix {
public:
    explicit WeightMatrix(std::vector<double> diag);
    static WeightMatrix identity(std::size_t n) { return WeightMatrix(std::vector<double>(n, 1.0)); }

    std::size_t size() const noexcept { return diag_.size(); }
    double operator[](std::size_t i) const noexcept { return diag_[i]; }
    const std::vector<double> &diag() const noexcept { return diag_; }

private:
    std::vector<double> diag_;
};

enum class NormMode { Operator, Vector };

// Dense row-major matrix of intervals. Vectors are n x 1 matrices.
template <class I>
class IntervalMatrix {
public:
    using value_type = I;

    IntervalMatrix() = default;
    IntervalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, I(0.0))
    {
        if (rows == 0 || cols == 0) {
            throw ShapeError("interval matrix dimensions must be positive");
        }
    }
    static IntervalMatrix identity(std::size_t n)
    {
        IntervalMatrix r(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            r(i, i) = I(1.0);
        }
        return r;
    }
    static IntervalMatrix zero(std::size_t rows, std::size_t cols) { return IntervalMatrix(rows, cols); }
    // Degenerate (point) intervals.
    static IntervalMatrix from(const Eigen::MatrixXd &m)
    {
        IntervalMatrix r(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
        for (std::size_t i = 0; i < r.rows_; ++i) {
            for (std::size_t j = 0; j < r.cols_; ++j) {
                r(i, j) = I(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            }
        }
        return r;
    }
    static IntervalMatrix from(const Eigen::VectorXd &v)
    {
        IntervalMatrix r(static_cast<std::size_t>(v.size()), 1);
        for (std::size_t i = 0; i < r.rows_; ++i) {
            r(i, 0) = I(v(static_cast<Eigen::Index>(i)));
        }
        return r;
    }
    template <class J>
    static IntervalMatrix convert(const IntervalMatrix<J> &m)
    {
        IntervalMatrix r(m.rows(), m.cols());
        for (std::size_t k = 0; k < m.entries().size(); ++k) {
            r.data_[k] = I(m.entries()[k]);
        }
        return r;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }
    I &operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const I &operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    std::span<const I> entries() const noexcept { return data_; }
    std::span<I> entries() noexcept { return data_; }

    Eigen::MatrixXd mid() const
    {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).mid();
            }
        }
        return m;
    }

    bool contains(const Eigen::MatrixXd &m) const
    {
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!(*this)(i, j).contains(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) {
                    return false;
                }
            }
        }
        return true;
    }

    double max_width() const noexcept
    {
        double w = 0.0;
        for (const auto &x : data_) {
            w = std::max(w, x.width());
        }
        return w;
    }

    IntervalMatrix &operator+=(const IntervalMatrix &b)
    {
        check_same(b);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += b.data_[k];
        }
        return *this;
    }
    IntervalMatrix &operator-=(const IntervalMatrix &b)
    {
        check_same(b);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= b.data_[k];
        }
        return *this;
    }
    IntervalMatrix &operator*=(const I &s)
    {
        for (auto &x : data_) {
            x *= s;
        }
        return *this;
    }

    friend IntervalMatrix operator+(IntervalMatrix a, const IntervalMatrix &b) { return a += b; }
    friend IntervalMatrix operator-(IntervalMatrix a, const IntervalMatrix &b) { return a -= b; }
    friend IntervalMatrix operator*(IntervalMatrix a, const I &s) { return a *= s; }
    friend IntervalMatrix operator*(const I &s, IntervalMatrix a) { return a *= s; }
    friend IntervalMatrix operator-(IntervalMatrix a)
    {
        for (auto &x : a.data_) {
            x = -x;
        }
        return a;
    }
    friend IntervalMatrix operator*(const IntervalMatrix &a, const IntervalMatrix &b) { return mat_mul(a, b); }

    friend IntervalMatrix mat_mul(const IntervalMatrix &a, const IntervalMatrix &b)
    {
        if (a.cols_ != b.rows_) {
            throw ShapeError("inner dimensions of matrix product disagree");
        }
        IntervalMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const I &aik = a(i, k);
                if (aik.lo() == 0 && aik.hi() == 0) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    r(i, j) += aik * b(k, j);
                }
            }
        }
        return r;
    }

private:
    void check_same(const IntervalMatrix &b) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_) {
            throw ShapeError("matrix dimensions disagree");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<I> data_;
};

// Rigorous enclosure of the weighted infinity norm. In Operator mode this is
// the induced norm max_i sum_j w_i |M_ij| / w_j (i.e. |W M W^-1|); in Vector
// mode M must be a column and the result is max_i w_i |M_i|. The upper
// endpoint bounds the norm of every real representative of M, the lower
// endpoint is a lower bound for all of them.
template <class I>
I weighted_inf_norm(const IntervalMatrix<I> &m, const WeightMatrix &w, NormMode mode = NormMode::Operator)
{
    using R = typename I::rounding;
    if (mode == NormMode::Vector && m.cols() != 1) {
        throw ShapeError("vector norm requires a single column");
    }
    if (w.size() != m.rows() || (mode == NormMode::Operator && w.size() != m.cols())) {
        throw ShapeError("weight dimension does not match matrix");
    }
    double best_hi = 0.0;
    double best_lo = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double row_hi = 0.0;
        double row_lo = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double scale_hi = mode == NormMode::Operator ? R::div_up(w[i], w[j]) : w[i];
            const double scale_lo = mode == NormMode::Operator ? R::div_down(w[i], w[j]) : w[i];
            row_hi = R::add_up(row_hi, R::mul_up(scale_hi, m(i, j).mag()));
            row_lo = R::add_down(row_lo, R::mul_down(scale_lo, m(i, j).mig()));
        }
        best_hi = std::max(best_hi, row_hi);
        best_lo = std::max(best_lo, row_lo);
    }
    return I::raw(best_lo, best_hi);
}

template <class I>
I vector_norm(const IntervalMatrix<I> &v, const WeightMatrix &w)
{
    return weighted_inf_norm(v, w, NormMode::Vector);
}

template <class I>
double norm_hi(const IntervalMatrix<I> &m, const WeightMatrix &w, NormMode mode = NormMode::Operator)
{
    return weighted_inf_norm(m, w, mode).hi();
}

// Plain double weighted norms (non-rigorous, for diagnostics).
double weighted_norm(const Eigen::MatrixXd &m, const WeightMatrix &w);
double weighted_norm(const Eigen::VectorXd &v, const WeightMatrix &w);

using IMatrix = IntervalMatrix<Interval>;

} // namespace bvpcert
