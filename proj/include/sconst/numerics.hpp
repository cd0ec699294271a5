#pragma once
// Dense complex linear algebra, truncated power series, and a damped Newton
// iteration. Everything here is exact rational arithmetic over doubles; no
// numerical differentiation is used unless the caller omits the Jacobian.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sconst/errors.hpp"

namespace sconst {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline bool is_finite(Complex c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

// Integer power by repeated squaring, exact for negative exponents via the
// reciprocal of the positive power.
inline Complex pow_int(Complex base, long long e) {
    if (e < 0) return 1.0 / pow_int(base, -e);
    Complex acc{1.0, 0.0};
    Complex sq = base;
    while (e > 0) {
        if (e & 1) acc *= sq;
        sq *= sq;
        e >>= 1;
    }
    return acc;
}

// Dense n x n complex matrix, row-major. n = 0 is the legal empty matrix.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, Complex{0.0, 0.0}) {}

    static SquareMatrix identity(std::size_t n) {
        SquareMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const noexcept { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    Complex operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    SquareMatrix operator*(const SquareMatrix& o) const {
        if (n_ != o.n_) throw InvalidInput("matrix product requires equal sizes");
        SquareMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                const Complex f = (*this)(i, k);
                if (f == Complex{}) continue;
                for (std::size_t j = 0; j < n_; ++j) r(i, j) += f * o(k, j);
            }
        return r;
    }

    SquareMatrix operator-(const SquareMatrix& o) const {
        if (n_ != o.n_) throw InvalidInput("matrix difference requires equal sizes");
        SquareMatrix r(n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& c : a_) m = std::max(m, std::abs(c));
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<Complex> a_;
};

namespace detail {

// Shared LU elimination with partial pivoting. order[i] records which input
// row ended up in position i. Returns false (singular to working precision)
// when a pivot column drops entirely below threshold * max row norm.
inline bool lu_factor(SquareMatrix& m, std::vector<std::size_t>& order, int& swaps,
                      double threshold = 1e-13) {
    const std::size_t n = m.size();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!is_finite(m(i, j))) throw InvalidInput("matrix entry is not finite");
            row += std::abs(m(i, j));
        }
        scale = std::max(scale, row);
    }
    swaps = 0;
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (n == 0) return true;
    if (scale == 0.0) return false;
    const double tiny = threshold * scale;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
        if (std::abs(m(p, k)) < tiny) return false;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            std::swap(order[k], order[p]);
            ++swaps;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = m(i, k) / m(k, k);
            m(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return true;
}

}  // namespace detail

// Determinant via LU with partial pivoting. A pivot column entirely below the
// relative threshold makes the matrix singular to working precision and the
// result is an exact 0. The empty matrix has determinant 1.
inline Complex det(SquareMatrix m) {
    std::vector<std::size_t> order;
    int swaps = 0;
    if (!detail::lu_factor(m, order, swaps)) return Complex{0.0, 0.0};
    Complex d{1.0, 0.0};
    for (std::size_t k = 0; k < m.size(); ++k) d *= m(k, k);
    return (swaps & 1) ? -d : d;
}

// Solve A x = b, throwing when A is singular to working precision.
inline CVector solve_linear(SquareMatrix a, const CVector& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw InvalidInput("right-hand side size mismatch");
    std::vector<std::size_t> order;
    int swaps = 0;
    if (!detail::lu_factor(a, order, swaps))
        throw SingularJacobian("linear system is singular to working precision");
    CVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = b[order[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) y[i] -= a(i, j) * y[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) y[i] -= a(i, j) * y[j];
        y[i] /= a(i, i);
    }
    return y;
}

// Truncated Taylor expansion about 0: coefficient m multiplies eps^m.
class PowerSeries {
public:
    explicit PowerSeries(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw InvalidInput("power series needs at least order 0");
    }

    std::size_t order() const noexcept { return c_.size() - 1; }
    Complex coeff(std::size_t m) const { return c_.at(m); }
    const std::vector<Complex>& coeffs() const noexcept { return c_; }

private:
    std::vector<Complex> c_;
};

// Expansion of 1/(c - eps) to the requested order: coefficient m is c^-(m+1).
inline PowerSeries pole_series(Complex c, std::size_t order) {
    if (!is_finite(c)) throw InvalidInput("pole location is not finite");
    if (std::abs(c) < 1e-12)
        throw PoleAtExpansionPoint("pole lies at the expansion point");
    std::vector<Complex> out(order + 1);
    const Complex inv = 1.0 / c;
    Complex cur = inv;
    for (std::size_t m = 0; m <= order; ++m) {
        out[m] = cur;
        cur *= inv;
    }
    return PowerSeries(std::move(out));
}

inline PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b) {
    if (a.order() != b.order())
        throw InvalidInput("series product requires equal truncation orders");
    std::vector<Complex> out(a.order() + 1, Complex{0.0, 0.0});
    for (std::size_t m = 0; m <= a.order(); ++m)
        for (std::size_t k = 0; k <= m; ++k) out[m] += a.coeff(k) * b.coeff(m - k);
    return PowerSeries(std::move(out));
}

inline PowerSeries series_sub(const PowerSeries& a, const PowerSeries& b) {
    if (a.order() != b.order())
        throw InvalidInput("series difference requires equal truncation orders");
    std::vector<Complex> out(a.order() + 1);
    for (std::size_t m = 0; m <= a.order(); ++m) out[m] = a.coeff(m) - b.coeff(m);
    return PowerSeries(std::move(out));
}

inline double inf_norm(const CVector& v) {
    double m = 0.0;
    for (const Complex& c : v) m = std::max(m, std::abs(c));
    return m;
}

using ResidualFn = std::function<CVector(const CVector&)>;
using JacobianFn = std::function<SquareMatrix(const CVector&)>;

// Central-difference Jacobian, used only when no analytic one is supplied.
// The residual is assumed holomorphic, so a real step recovers the complex
// derivative.
inline SquareMatrix fd_jacobian(const ResidualFn& f, const CVector& x) {
    const std::size_t n = x.size();
    SquareMatrix j(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double h = 1e-7 * (1.0 + std::abs(x[k]));
        CVector xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const CVector fp = f(xp), fm = f(xm);
        if (fp.size() != n || fm.size() != n)
            throw InvalidInput("residual dimension does not match unknowns");
        for (std::size_t i = 0; i < n; ++i) j(i, k) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return j;
}

// Damped Newton iteration for square holomorphic systems. A full step that
// fails to decrease the residual norm is halved up to 30 times; if no
// shortening helps the full step is taken anyway so plateaus near roots do
// not stall progress. Throws NoConvergence carrying the best iterate seen.
inline CVector newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                            CVector x0, double tol, int max_iter = 50) {
    if (!(tol > 0.0)) throw InvalidInput("newton tolerance must be positive");
    if (max_iter < 1) throw InvalidInput("newton needs at least one iteration");
    for (const Complex& c : x0)
        if (!is_finite(c)) throw InvalidInput("newton start point is not finite");

    CVector x = std::move(x0);
    CVector r = residual(x);
    if (r.size() != x.size())
        throw InvalidInput("residual dimension does not match unknowns");
    double rn = inf_norm(r);
    CVector best = x;
    double best_rn = rn;

    for (int iter = 0; iter < max_iter; ++iter) {
        if (rn <= tol) return x;
        const SquareMatrix j = jacobian ? jacobian(x) : fd_jacobian(residual, x);
        CVector rhs(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
        const CVector step = solve_linear(j, rhs);

        double lambda = 1.0;
        CVector x_new, r_new;
        double rn_new = 0.0;
        bool first = true;
        CVector x_full, r_full;
        double rn_full = 0.0;
        bool accepted = false;
        for (int halvings = 0; halvings <= 30; ++halvings) {
            CVector xt(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] + lambda * step[i];
            CVector rt = residual(xt);
            const double rtn = inf_norm(rt);
            if (first) {
                x_full = xt;
                r_full = rt;
                rn_full = rtn;
                first = false;
            }
            if (rtn < rn) {
                x_new = std::move(xt);
                r_new = std::move(rt);
                rn_new = rtn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            x_new = std::move(x_full);
            r_new = std::move(r_full);
            rn_new = rn_full;
        }
        x = std::move(x_new);
        r = std::move(r_new);
        rn = rn_new;
        if (rn < best_rn) {
            best = x;
            best_rn = rn;
        }
    }
    if (rn <= tol) return x;
    throw NoConvergence("newton iteration did not reach tolerance", best, best_rn);
}

}  // namespace sconst
