#pragma once
// Determinant evaluations: the domain-wall partition function, its
// homogeneous limit, the restricted scalar product of a Bethe state with a
// mixed dual reference, its homogeneous limit, and the on-shell norm.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "sconst/bethe.hpp"
#include "sconst/errors.hpp"
#include "sconst/numerics.hpp"
#include "sconst/vertex_model.hpp"

namespace sconst {

// Domain-wall partition function of an N x N block with line rapidities w and
// column rapidities z.
inline Complex izergin(const std::vector<Complex>& w, const std::vector<Complex>& z,
                       Complex eta) {
    if (w.size() != z.size())
        throw InvalidInput("line and column rapidity counts must match");
    const std::size_t n = w.size();
    if (eta == Complex{0.0, 0.0}) throw InvalidInput("crossing parameter is zero");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            require_separated(w[i], w[j], "line rapidities");
            require_separated(z[i], z[j], "column rapidities");
        }
        for (std::size_t j = 0; j < n; ++j) {
            require_separated(w[i], z[j], "line and column rapidity");
            require_separated(w[i] + eta, z[j], "shifted line and column rapidity");
        }
    }
    if (n == 0) return Complex{1.0, 0.0};

    Complex pref{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pref *= w[i] - z[j] + eta;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            pref /= (w[i] - w[j]) * (z[j] - z[i]);

    SquareMatrix k(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            k(i, j) = eta / ((w[i] - z[j] + eta) * (w[i] - z[j]));
    return pref * det(k);
}

// Homogeneous limit of the domain-wall partition function: all columns at z.
// Column degeneration turns the kernel columns into derivative columns, whose
// partial-fraction form is exact.
inline Complex izergin_hom(const std::vector<Complex>& w, Complex z, Complex eta) {
    const std::size_t n = w.size();
    if (eta == Complex{0.0, 0.0}) throw InvalidInput("crossing parameter is zero");
    for (std::size_t i = 0; i < n; ++i) {
        require_separated(w[i], z, "line rapidity and homogeneous point");
        require_separated(w[i] + eta, z, "shifted line rapidity and homogeneous point");
        for (std::size_t j = i + 1; j < n; ++j)
            require_separated(w[i], w[j], "line rapidities");
    }
    if (n == 0) return Complex{1.0, 0.0};

    Complex pref{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
        pref *= pow_int(w[i] - z + eta, static_cast<long long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pref /= w[i] - w[j];

    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = pow_int(w[i] - z, -static_cast<long long>(j) - 1) -
                      pow_int(w[i] - z + eta, -static_cast<long long>(j) - 1);
    return pref * det(m);
}

namespace detail {

inline void check_restricted_counts(int L, int N1, int N2) {
    if (L < 0) throw InvalidInput("chain length must be nonnegative");
    if (N2 < 0 || N1 < N2 || L < N1)
        throw InvalidGeometry("rapidity counts must satisfy 0 <= N2 <= N1 <= L");
}

}  // namespace detail

// Scalar product of the state built by N1 B lines with the dual state whose
// first N1-N2 columns point down, after N2 C lines. Valid on shell in u; the
// v are free. Column order in the determinant is the N2 v columns first,
// then the N1-N2 kernel columns; the lattice transfer fixes this orientation.
inline Complex slavnov_restricted(int L, const std::vector<Complex>& u,
                                  const std::vector<Complex>& v,
                                  const std::vector<Complex>& z, Complex eta) {
    const int N1 = static_cast<int>(u.size());
    const int N2 = static_cast<int>(v.size());
    const int N3 = N1 - N2;
    detail::check_restricted_counts(L, N1, N2);
    if (static_cast<int>(z.size()) != L)
        throw InvalidInput("one column rapidity per site is required");
    if (eta == Complex{0.0, 0.0}) throw InvalidInput("crossing parameter is zero");
    for (int i = 0; i < N1; ++i) {
        for (int j = i + 1; j < N1; ++j) require_separated(u[i], u[j], "bethe roots");
        for (int j = 0; j < N2; ++j) require_separated(u[i], v[j], "u and v rapidities");
        for (int j = 0; j < N3; ++j) {
            require_separated(u[i], z[j], "bethe root and column rapidity");
            require_separated(u[i] + eta, z[j], "shifted bethe root and column rapidity");
        }
    }
    for (int i = 0; i < N2; ++i) {
        for (int j = i + 1; j < N2; ++j) require_separated(v[i], v[j], "v rapidities");
        for (int j = 0; j < L; ++j) require_separated(v[i], z[j], "v rapidity and column rapidity");
    }
    for (int i = 0; i < N3; ++i)
        for (int j = i + 1; j < N3; ++j) require_separated(z[i], z[j], "column rapidities");
    if (N1 == 0) return Complex{1.0, 0.0};

    Complex pref{1.0, 0.0};
    for (int i = 0; i < N1; ++i)
        for (int j = 0; j < N3; ++j) pref *= u[i] - z[j] + eta;
    for (int i = 0; i < N1; ++i)
        for (int j = i + 1; j < N1; ++j) pref /= u[j] - u[i];
    for (int i = 0; i < N2; ++i)
        for (int j = i + 1; j < N2; ++j) pref /= v[i] - v[j];
    for (int i = 0; i < N3; ++i)
        for (int j = i + 1; j < N3; ++j) pref /= z[i] - z[j];

    SquareMatrix m(static_cast<std::size_t>(N1));
    for (int i = 0; i < N1; ++i) {
        for (int j = 0; j < N2; ++j) {
            Complex ratio{1.0, 0.0};
            for (int k = 0; k < L; ++k)
                ratio *= (v[j] - z[k] + eta) / (v[j] - z[k]);
            Complex plus{1.0, 0.0}, minus{1.0, 0.0};
            for (int k = 0; k < N1; ++k) {
                if (k == i) continue;
                plus *= u[k] - v[j] + eta;
                minus *= u[k] - v[j] - eta;
            }
            m(i, j) = eta / (u[i] - v[j]) * (ratio * plus - minus);
        }
        for (int j = 0; j < N3; ++j) {
            Complex f = eta / ((u[i] - z[j] + eta) * (u[i] - z[j]));
            for (int k = 0; k < N2; ++k) f /= v[k] - z[j];
            m(i, N2 + j) = f;
        }
    }
    return pref * det(m);
}

// Homogeneous limit of the restricted scalar product, with the same column
// order as the inhomogeneous form. The kernel columns degenerate into Taylor
// columns of the pole product, computed by exact series arithmetic; the
// degeneration of the ordered column Vandermonde leaves the alternating
// prefactor below.
inline Complex slavnov_hom(int L, const std::vector<Complex>& u,
                           const std::vector<Complex>& v, Complex z, Complex eta,
                           bool verify_roots = true) {
    const int N1 = static_cast<int>(u.size());
    const int N2 = static_cast<int>(v.size());
    const int N3 = N1 - N2;
    detail::check_restricted_counts(L, N1, N2);
    if (eta == Complex{0.0, 0.0}) throw InvalidInput("crossing parameter is zero");
    for (int i = 0; i < N1; ++i) {
        for (int j = i + 1; j < N1; ++j) require_separated(u[i], u[j], "bethe roots");
        for (int j = 0; j < N2; ++j) require_separated(u[i], v[j], "u and v rapidities");
        require_separated(u[i], z, "bethe root and homogeneous point");
        require_separated(u[i] + eta, z, "shifted bethe root and homogeneous point");
    }
    for (int i = 0; i < N2; ++i) {
        for (int j = i + 1; j < N2; ++j) require_separated(v[i], v[j], "v rapidities");
        require_separated(v[i], z, "v rapidity and homogeneous point");
    }
    if (verify_roots) {
        const double res = max_bethe_residual(u, L, z, eta);
        if (res > 1e-8)
            throw UnverifiedRoots("u list does not satisfy the bethe equations, residual " +
                                  std::to_string(res));
    }
    if (N1 == 0) return Complex{1.0, 0.0};

    Complex pref{1.0, 0.0};
    for (int i = 0; i < N1; ++i) pref *= pow_int(u[i] - z + eta, N3);
    for (int i = 0; i < N1; ++i)
        for (int j = i + 1; j < N1; ++j) pref /= u[j] - u[i];
    for (int i = 0; i < N2; ++i)
        for (int j = i + 1; j < N2; ++j) pref /= v[i] - v[j];
    if (((static_cast<long long>(N3) * (N3 - 1) / 2) & 1LL) != 0) pref = -pref;

    SquareMatrix m(static_cast<std::size_t>(N1));
    for (int i = 0; i < N1; ++i) {
        for (int j = 0; j < N2; ++j) {
            const Complex ratio = pow_int((v[j] - z + eta) / (v[j] - z), L);
            Complex plus{1.0, 0.0}, minus{1.0, 0.0};
            for (int k = 0; k < N1; ++k) {
                if (k == i) continue;
                plus *= u[k] - v[j] + eta;
                minus *= u[k] - v[j] - eta;
            }
            m(i, j) = eta / (u[i] - v[j]) * (ratio * plus - minus);
        }
        if (N3 > 0) {
            PowerSeries s = series_sub(pole_series(u[i] - z, N3 - 1),
                                       pole_series(u[i] - z + eta, N3 - 1));
            for (int k = 0; k < N2; ++k)
                s = series_mul(s, pole_series(v[k] - z, N3 - 1));
            for (int j = 0; j < N3; ++j) m(i, N2 + j) = s.coeff(j);
        }
    }
    return pref * det(m);
}

// On-shell norm of a Bethe state on the homogeneous chain.
inline Complex gaudin_norm(int L, const std::vector<Complex>& u, Complex z,
                           Complex eta, bool verify_roots = true) {
    const int n = static_cast<int>(u.size());
    if (L < 0) throw InvalidInput("chain length must be nonnegative");
    if (n > L) throw InvalidGeometry("more roots than sites");
    if (eta == Complex{0.0, 0.0}) throw InvalidInput("crossing parameter is zero");
    for (int i = 0; i < n; ++i) {
        require_separated(u[i], z, "bethe root and homogeneous point");
        require_separated(u[i], -z, "bethe root and reflected homogeneous point");
        for (int j = i + 1; j < n; ++j) require_separated(u[i], u[j], "bethe roots");
    }
    if (verify_roots) {
        const double res = max_bethe_residual(u, L, z, eta);
        if (res > 1e-8)
            throw UnverifiedRoots("u list does not satisfy the bethe equations, residual " +
                                  std::to_string(res));
    }
    if (n == 0) return Complex{1.0, 0.0};

    Complex pref = pow_int(eta, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            pref *= (u[i] - u[j] + eta) / (u[i] - u[j]);
        }

    SquareMatrix phi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Complex diag = static_cast<double>(L) * (1.0 / (u[i] - z) - 1.0 / (u[i] + z));
        for (int k = 0; k < n; ++k) {
            if (k == i) continue;
            diag += 1.0 / (u[i] - u[k] + eta) - 1.0 / (u[i] - u[k] - eta);
        }
        phi(i, i) = diag;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            phi(i, j) = -(1.0 / (u[j] - u[i] + eta) - 1.0 / (u[j] - u[i] - eta));
        }
    }
    return pref * det(phi);
}

}  // namespace sconst
