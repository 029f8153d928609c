#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bvpcert/interval_matrix.hpp"

namespace bvpcert {

// Upper bound on x^k for x >= 0.
template <class R>
double pow_up(double x, int k) noexcept
{
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r = R::mul_up(r, x);
    }
    return r;
}

// Matrix-valued polynomial sum_k C_k (t - center)^k with interval
// coefficients, living on [center - halfwidth, center + halfwidth].
// Column vectors are n x 1 coefficient matrices.
template <class I>
class MatrixPolynomial {
public:
    using Matrix = IntervalMatrix<I>;

    MatrixPolynomial(double center, double halfwidth, std::vector<Matrix> coeffs)
        : center_(center), halfwidth_(halfwidth), coeffs_(std::move(coeffs))
    {
        if (!(halfwidth > 0)) {
            throw DomainError("polynomial halfwidth must be positive");
        }
        if (coeffs_.empty()) {
            throw ShapeError("polynomial needs at least one coefficient");
        }
        for (const auto &c : coeffs_) {
            if (c.rows() != coeffs_[0].rows() || c.cols() != coeffs_[0].cols()) {
                throw ShapeError("polynomial coefficients differ in shape");
            }
        }
    }
    static MatrixPolynomial constant(double center, double halfwidth, Matrix c)
    {
        return MatrixPolynomial(center, halfwidth, {std::move(c)});
    }

    double center() const noexcept { return center_; }
    double halfwidth() const noexcept { return halfwidth_; }
    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    std::size_t rows() const noexcept { return coeffs_[0].rows(); }
    std::size_t cols() const noexcept { return coeffs_[0].cols(); }
    const std::vector<Matrix> &coeffs() const noexcept { return coeffs_; }
    const Matrix &coeff(std::size_t k) const { return coeffs_.at(k); }

    // Horner evaluation at an offset (interval) tau = t - center.
    Matrix evaluate_offset(const I &tau) const
    {
        Matrix r = coeffs_.back();
        for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
            r = r * tau;
            r += coeffs_[k];
        }
        return r;
    }
    Matrix evaluate(double t) const { return evaluate_offset(I(t) - I(center_)); }
    Matrix left_value() const { return evaluate_offset(I(-halfwidth_)); }
    Matrix right_value() const { return evaluate_offset(I(halfwidth_)); }
    // Enclosure of the range over the whole subinterval.
    Matrix range() const { return evaluate_offset(symmetric<I>(halfwidth_)); }

    MatrixPolynomial derivative() const
    {
        if (coeffs_.size() == 1) {
            return constant(center_, halfwidth_, Matrix::zero(rows(), cols()));
        }
        std::vector<Matrix> d;
        d.reserve(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) {
            d.push_back(coeffs_[k] * I(static_cast<double>(k)));
        }
        return MatrixPolynomial(center_, halfwidth_, std::move(d));
    }

    MatrixPolynomial left_multiply(const Matrix &m) const
    {
        std::vector<Matrix> c;
        c.reserve(coeffs_.size());
        for (const auto &x : coeffs_) {
            c.push_back(m * x);
        }
        return MatrixPolynomial(center_, halfwidth_, std::move(c));
    }
    MatrixPolynomial right_multiply(const Matrix &m) const
    {
        std::vector<Matrix> c;
        c.reserve(coeffs_.size());
        for (const auto &x : coeffs_) {
            c.push_back(x * m);
        }
        return MatrixPolynomial(center_, halfwidth_, std::move(c));
    }

    void check_aligned(const MatrixPolynomial &q) const
    {
        if (center_ != q.center_ || halfwidth_ != q.halfwidth_) {
            throw AlignmentError("polynomials expanded about different subintervals");
        }
    }

private:
    double center_;
    double halfwidth_;
    std::vector<Matrix> coeffs_;
};

template <class I>
MatrixPolynomial<I> operator+(const MatrixPolynomial<I> &p, const MatrixPolynomial<I> &q)
{
    p.check_aligned(q);
    const std::size_t n = std::max(p.coeffs().size(), q.coeffs().size());
    std::vector<IntervalMatrix<I>> c;
    c.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k < p.coeffs().size() && k < q.coeffs().size()) {
            c.push_back(p.coeff(k) + q.coeff(k));
        } else {
            c.push_back(k < p.coeffs().size() ? p.coeff(k) : q.coeff(k));
        }
    }
    return MatrixPolynomial<I>(p.center(), p.halfwidth(), std::move(c));
}

template <class I>
MatrixPolynomial<I> operator-(const MatrixPolynomial<I> &p, const MatrixPolynomial<I> &q)
{
    std::vector<IntervalMatrix<I>> neg;
    neg.reserve(q.coeffs().size());
    for (const auto &c : q.coeffs()) {
        neg.push_back(-c);
    }
    return p + MatrixPolynomial<I>(q.center(), q.halfwidth(), std::move(neg));
}

// Full product, degree deg(P) + deg(Q).
template <class I>
MatrixPolynomial<I> operator*(const MatrixPolynomial<I> &p, const MatrixPolynomial<I> &q)
{
    p.check_aligned(q);
    const std::size_t n = p.coeffs().size() + q.coeffs().size() - 1;
    std::vector<IntervalMatrix<I>> c(n, IntervalMatrix<I>::zero(p.rows(), q.cols()));
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        for (std::size_t j = 0; j < q.coeffs().size(); ++j) {
            c[i + j] += p.coeff(i) * q.coeff(j);
        }
    }
    return MatrixPolynomial<I>(p.center(), p.halfwidth(), std::move(c));
}

template <class I>
struct TruncatedProduct {
    MatrixPolynomial<I> poly;
    // Entrywise enclosure of the discarded terms over the whole subinterval.
    IntervalMatrix<I> tail;
};

// Product truncated above `degree`; dropped monomials are folded into `tail`.
template <class I>
TruncatedProduct<I> mul_truncate(const MatrixPolynomial<I> &p, const MatrixPolynomial<I> &q, std::size_t degree)
{
    auto full = p * q;
    const auto &c = full.coeffs();
    if (c.size() <= degree + 1) {
        return {full, IntervalMatrix<I>::zero(full.rows(), full.cols())};
    }
    std::vector<IntervalMatrix<I>> kept(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(degree + 1));
    std::vector<IntervalMatrix<I>> dropped(c.begin() + static_cast<std::ptrdiff_t>(degree + 1), c.end());
    const auto tau = symmetric<I>(full.halfwidth());
    MatrixPolynomial<I> rest(full.center(), full.halfwidth(), std::move(dropped));
    auto tail = rest.evaluate_offset(tau) * pow(tau, static_cast<int>(degree + 1));
    return {MatrixPolynomial<I>(full.center(), full.halfwidth(), std::move(kept)), std::move(tail)};
}

// Sup over the subinterval of the weighted norm, bounded by summing the
// norms of the individual monomials.
template <class I>
I poly_sup_bound(const MatrixPolynomial<I> &p, const WeightMatrix &w, NormMode mode = NormMode::Operator)
{
    using R = typename I::rounding;
    double total = 0.0;
    double hk = 1.0;
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        total = R::add_up(total, R::mul_up(norm_hi(p.coeff(k), w, mode), hk));
        hk = R::mul_up(hk, p.halfwidth());
    }
    return I::raw(0.0, total);
}

// Taylor data of A(t) on one subinterval:
//   A(t) = sum_{k<m} A_k tau^k + r_m(t) tau^m,  tau = t - center,
// where `remainder` encloses r_m(t) for every t in the subinterval.
template <class I>
struct TaylorData {
    double center = 0.0;
    double halfwidth = 0.0;
    std::vector<IntervalMatrix<I>> coeffs;
    IntervalMatrix<I> remainder;

    std::size_t order() const noexcept { return coeffs.size(); }
    std::size_t dim() const noexcept { return remainder.rows(); }

    // Enclosure of A(center + tau).
    IntervalMatrix<I> evaluate_offset(const I &tau) const
    {
        IntervalMatrix<I> r = remainder * pow(tau, static_cast<int>(coeffs.size()));
        I tk(1.0);
        for (const auto &c : coeffs) {
            r += c * tk;
            tk = tk * tau;
        }
        return r;
    }
    IntervalMatrix<I> range() const { return evaluate_offset(symmetric<I>(halfwidth)); }

    template <class J>
    TaylorData<J> convert() const
    {
        TaylorData<J> r;
        r.center = center;
        r.halfwidth = halfwidth;
        for (const auto &c : coeffs) {
            r.coeffs.push_back(IntervalMatrix<J>::convert(c));
        }
        r.remainder = IntervalMatrix<J>::convert(remainder);
        return r;
    }
};

// Sup bound on ||A(t)|| over the subinterval including the remainder term.
template <class I>
I taylor_sup_bound(const TaylorData<I> &a, const WeightMatrix &w)
{
    auto coeffs = a.coeffs;
    coeffs.push_back(a.remainder);
    return poly_sup_bound(MatrixPolynomial<I>(a.center, a.halfwidth, std::move(coeffs)), w);
}

// I + E(t) with E^0 = I and E^k = (1/k) sum_{l<k} A_l E^{k-l-1}; solves
// Phi' = A Phi through degree m - 1.
template <class I>
MatrixPolynomial<I> taylor_E(const TaylorData<I> &a, std::size_t m)
{
    if (m == 0) {
        throw DomainError("Taylor degree must be at least 1");
    }
    if (a.coeffs.size() < m) {
        throw DomainError("not enough Taylor coefficients of A for requested degree");
    }
    const std::size_t n = a.dim();
    std::vector<IntervalMatrix<I>> e;
    e.reserve(m + 1);
    e.push_back(IntervalMatrix<I>::identity(n));
    for (std::size_t k = 1; k <= m; ++k) {
        auto s = IntervalMatrix<I>::zero(n, n);
        for (std::size_t l = 0; l < k; ++l) {
            s += a.coeffs[l] * e[k - l - 1];
        }
        e.push_back(s * (I(1.0) / I(static_cast<double>(k))));
    }
    return MatrixPolynomial<I>(a.center, a.halfwidth, std::move(e));
}

// I + F(t) with F^0 = I and F^k = -(1/k) sum_{l<k} F^{k-l-1} A_l; solves
// Psi' = -Psi A through degree m - 1.
template <class I>
MatrixPolynomial<I> taylor_F(const TaylorData<I> &a, std::size_t m)
{
    if (m == 0) {
        throw DomainError("Taylor degree must be at least 1");
    }
    if (a.coeffs.size() < m) {
        throw DomainError("not enough Taylor coefficients of A for requested degree");
    }
    const std::size_t n = a.dim();
    std::vector<IntervalMatrix<I>> f;
    f.reserve(m + 1);
    f.push_back(IntervalMatrix<I>::identity(n));
    for (std::size_t k = 1; k <= m; ++k) {
        auto s = IntervalMatrix<I>::zero(n, n);
        for (std::size_t l = 0; l < k; ++l) {
            s += f[k - l - 1] * a.coeffs[l];
        }
        f.push_back(s * (I(-1.0) / I(static_cast<double>(k))));
    }
    return MatrixPolynomial<I>(a.center, a.halfwidth, std::move(f));
}

template <class I>
struct ResidualBound {
    // C_m .. C_{2m}: A(t)(I+E(t)) - E'(t) = sum_{k=m}^{2m} tau^k C_k,
    // with the remainder r_m(t) standing in for A_m.
    std::vector<IntervalMatrix<I>> coeffs;
    // Upper bound on sup |R(t)| where R(t) = sum_k C_k tau^{k-m}.
    I supnorm;

    // R(t) as a polynomial in tau (degree m).
    MatrixPolynomial<I> as_polynomial(double center, double halfwidth) const
    {
        return MatrixPolynomial<I>(center, halfwidth, coeffs);
    }
};

template <class I>
ResidualBound<I> residual_R(const TaylorData<I> &a, const MatrixPolynomial<I> &e, const WeightMatrix &w)
{
    const std::size_t m = e.degree();
    if (a.coeffs.size() < m) {
        throw DomainError("Taylor data order below polynomial degree");
    }
    const std::size_t n = a.dim();
    // A_0..A_{m-1} followed by the remainder as A_m.
    auto coef_a = [&](std::size_t l) -> const IntervalMatrix<I> & {
        return l < m ? a.coeffs[l] : a.remainder;
    };
    std::vector<IntervalMatrix<I>> c;
    c.reserve(m + 1);
    for (std::size_t k = m; k <= 2 * m; ++k) {
        auto s = IntervalMatrix<I>::zero(n, n);
        for (std::size_t l = k - m; l <= m; ++l) {
            s += coef_a(l) * e.coeff(k - l);
        }
        c.push_back(std::move(s));
    }
    auto sup = poly_sup_bound(MatrixPolynomial<I>(a.center, a.halfwidth, c), w);
    return {std::move(c), sup};
}

// Coefficient k of A(t)(I + E(t)) - E'(t) for k < m; all must contain 0.
template <class I>
std::vector<IntervalMatrix<I>> low_order_defect(const TaylorData<I> &a, const MatrixPolynomial<I> &e)
{
    const std::size_t m = e.degree();
    const std::size_t n = a.dim();
    std::vector<IntervalMatrix<I>> out;
    for (std::size_t k = 0; k < m; ++k) {
        auto s = IntervalMatrix<I>::zero(n, n);
        for (std::size_t l = 0; l <= k; ++l) {
            s += a.coeffs[l] * e.coeff(k - l);
        }
        s -= e.coeff(k + 1) * I(static_cast<double>(k + 1));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace bvpcert
