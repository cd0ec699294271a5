#pragma once
// Monodromy blocks on the full spin space, Bethe equations in multiplicative
// and logarithmic form, root finding seeded by mode numbers, Bethe vectors,
// and transfer-matrix eigenchecks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sconst/errors.hpp"
#include "sconst/numerics.hpp"
#include "sconst/vertex_model.hpp"

namespace sconst {

struct MonodromyBlocks {
    int L = 0;
    Complex x;
    SquareMatrix A, B, C, D;
};

// Ordered product of site L-operators, leftmost column first, assembled block
// by block in the auxiliary 2x2 structure. Site j occupies basis bit j, so
// appending a site doubles every block with the new site as the high bit.
inline MonodromyBlocks build_monodromy(Complex x, const std::vector<Complex>& z,
                                       const VertexWeights& w) {
    const int L = static_cast<int>(z.size());
    check_chain_length(L, 10);

    SquareMatrix A = SquareMatrix::identity(1);
    SquareMatrix D = SquareMatrix::identity(1);
    SquareMatrix B(1), C(1);

    for (int j = 0; j < L; ++j) {
        const Complex aj = weight(WeightKind::a, x, z[j], w);
        const Complex cj = weight(WeightKind::c, x, z[j], w);
        const std::size_t dim = std::size_t{1} << j;
        const std::size_t ndim = dim << 1;
        // site factors: diag(a, 1) on a kept up carry, diag(1, a) on a kept
        // down carry, c times a site toggle on a carry flip
        SquareMatrix nA(ndim), nB(ndim), nC(ndim), nD(ndim);
        for (std::size_t mo = 0; mo < dim; ++mo) {
            for (std::size_t mi = 0; mi < dim; ++mi) {
                const Complex a0 = A(mo, mi), b0 = B(mo, mi);
                const Complex c0 = C(mo, mi), d0 = D(mo, mi);
                // site stays up
                nA(mo, mi) = aj * a0;
                nB(mo, mi) = b0;
                nC(mo, mi) = aj * c0;
                nD(mo, mi) = d0;
                // site stays down
                nA(dim + mo, dim + mi) = a0;
                nB(dim + mo, dim + mi) = aj * b0;
                nC(dim + mo, dim + mi) = c0;
                nD(dim + mo, dim + mi) = aj * d0;
                // site up -> down, carry flips up -> down
                nB(dim + mo, mi) = cj * a0;
                nD(dim + mo, mi) = cj * c0;
                // site down -> up, carry flips down -> up
                nA(mo, dim + mi) = cj * b0;
                nC(mo, dim + mi) = cj * d0;
            }
        }
        A = std::move(nA);
        B = std::move(nB);
        C = std::move(nC);
        D = std::move(nD);
    }
    return MonodromyBlocks{L, x, std::move(A), std::move(B), std::move(C), std::move(D)};
}

// Multiplicative Bethe equation deviations |lhs/rhs - 1| per root, for a
// homogeneous chain of length L with the column rapidity z.
inline std::vector<double> bethe_residual(const std::vector<Complex>& u, int L,
                                          Complex z, Complex eta) {
    if (L < 0) throw InvalidInput("chain length must be nonnegative");
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_finite(u[i])) throw InvalidInput("bethe root is not finite");
        require_separated(u[i], z, "bethe root and column rapidity");
        for (std::size_t j = i + 1; j < n; ++j)
            require_separated(u[i], u[j], "bethe roots");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex lhs = pow_int((u[i] - z + eta) / (u[i] - z), L);
        Complex rhs{1.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            rhs *= (u[i] - u[j] + eta) / (u[i] - u[j] - eta);
        }
        out[i] = std::abs(lhs / rhs - 1.0);
    }
    return out;
}

// Same deviations against an inhomogeneous column-rapidity list.
inline std::vector<double> bethe_residual_inhom(const std::vector<Complex>& u,
                                                const std::vector<Complex>& z,
                                                Complex eta) {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (const Complex& zk : z) require_separated(u[i], zk, "bethe root and column rapidity");
        for (std::size_t j = i + 1; j < n; ++j)
            require_separated(u[i], u[j], "bethe roots");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex lhs{1.0, 0.0};
        for (const Complex& zk : z) lhs *= (u[i] - zk + eta) / (u[i] - zk);
        Complex rhs{1.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            rhs *= (u[i] - u[j] + eta) / (u[i] - u[j] - eta);
        }
        out[i] = std::abs(lhs / rhs - 1.0);
    }
    return out;
}

inline double max_bethe_residual(const std::vector<Complex>& u, int L, Complex z,
                                 Complex eta) {
    const std::vector<double> r = bethe_residual(u, L, z, eta);
    double m = 0.0;
    for (double v : r) m = std::max(m, v);
    return m;
}

struct BetheRoots {
    int L = 0;
    int N = 0;
    Complex eta{0.0, 1.0};
    Complex z{0.0, 0.5};
    std::vector<Complex> roots;
    std::vector<int> mode_numbers;  // empty when seeded from explicit guesses
    double residual = 0.0;          // max multiplicative deviation
    bool verified = false;
};

namespace detail {

// Logarithmic Bethe system with fixed branch constants: one principal log per
// factor, minus 2 pi i times the mode number.
inline CVector bethe_log_residual(const CVector& u, const std::vector<Complex>& z,
                                  Complex eta, const std::vector<int>& modes) {
    const std::size_t n = u.size();
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex s{0.0, 0.0};
        for (const Complex& zk : z) s += std::log((u[i] - zk + eta) / (u[i] - zk));
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            s -= std::log((u[i] - u[j] + eta) / (u[i] - u[j] - eta));
        }
        s -= Complex{0.0, 2.0 * std::numbers::pi * modes[i]};
        out[i] = s;
    }
    return out;
}

inline SquareMatrix bethe_log_jacobian(const CVector& u, const std::vector<Complex>& z,
                                       Complex eta) {
    const std::size_t n = u.size();
    SquareMatrix jac(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex diag{0.0, 0.0};
        for (const Complex& zk : z)
            diag += 1.0 / (u[i] - zk + eta) - 1.0 / (u[i] - zk);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Complex pair =
                1.0 / (u[i] - u[j] + eta) - 1.0 / (u[i] - u[j] - eta);
            diag -= pair;
            jac(i, j) = pair;
        }
        jac(i, i) = diag;
    }
    return jac;
}

// Branch constants that make the log system vanish as nearly as possible at
// the given point.
inline std::vector<int> infer_modes(const CVector& u, const std::vector<Complex>& z,
                                    Complex eta) {
    const std::size_t n = u.size();
    std::vector<int> modes(n, 0);
    const CVector r = bethe_log_residual(u, z, eta, modes);
    for (std::size_t i = 0; i < n; ++i)
        modes[i] = static_cast<int>(std::lround(r[i].imag() / (2.0 * std::numbers::pi)));
    return modes;
}

inline void check_distinct_roots(const std::vector<Complex>& roots) {
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-10)
                throw CollidingRoots("solver produced coinciding roots");
}

inline std::vector<Complex> newton_on_log_system(const CVector& seed,
                                                 const std::vector<Complex>& z,
                                                 Complex eta,
                                                 const std::vector<int>& modes,
                                                 double tol, int max_iter) {
    const ResidualFn res = [&](const CVector& x) {
        return bethe_log_residual(x, z, eta, modes);
    };
    const JacobianFn jac = [&](const CVector& x) {
        return bethe_log_jacobian(x, z, eta);
    };
    return newton_solve(res, jac, seed, tol, max_iter);
}

// Cleared-denominator form of the same equations. Unlike the log form it has
// no branch cuts, so it can track a solution whose left-hand side passes
// through the negative real axis (a root at the origin does exactly that).
inline CVector bethe_poly_residual(const CVector& u, const std::vector<Complex>& z,
                                   Complex eta) {
    const std::size_t n = u.size();
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex lhs{1.0, 0.0}, rhs{1.0, 0.0};
        for (const Complex& zk : z) {
            lhs *= u[i] - zk + eta;
            rhs *= u[i] - zk;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            lhs *= u[i] - u[j] - eta;
            rhs *= u[i] - u[j] + eta;
        }
        out[i] = lhs - rhs;
    }
    return out;
}

inline Complex product_without(const std::vector<Complex>& f, std::size_t skip) {
    Complex p{1.0, 0.0};
    for (std::size_t m = 0; m < f.size(); ++m)
        if (m != skip) p *= f[m];
    return p;
}

inline SquareMatrix bethe_poly_jacobian(const CVector& u, const std::vector<Complex>& z,
                                        Complex eta) {
    const std::size_t n = u.size();
    const std::size_t L = z.size();
    SquareMatrix jac(n);
    std::vector<Complex> lf(L + n - 1), rf(L + n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> pair_pos(n);  // factor slot of each u_j, j != i
        std::size_t slot = 0;
        for (const Complex& zk : z) {
            lf[slot] = u[i] - zk + eta;
            rf[slot] = u[i] - zk;
            ++slot;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            pair_pos[j] = slot;
            lf[slot] = u[i] - u[j] - eta;
            rf[slot] = u[i] - u[j] + eta;
            ++slot;
        }
        // every factor moves with u_i at unit rate; leave-one-out sums give
        // the derivative without dividing by possibly small factors
        Complex diag{0.0, 0.0};
        for (std::size_t m = 0; m < slot; ++m)
            diag += product_without(lf, m) - product_without(rf, m);
        jac(i, i) = diag;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const std::size_t m = pair_pos[j];
            jac(i, j) = -product_without(lf, m) + product_without(rf, m);
        }
    }
    return jac;
}

inline std::vector<Complex> newton_on_poly_system(const CVector& seed,
                                                  const std::vector<Complex>& z,
                                                  Complex eta, double tol,
                                                  int max_iter) {
    const ResidualFn res = [&](const CVector& x) {
        return bethe_poly_residual(x, z, eta);
    };
    const JacobianFn jac = [&](const CVector& x) {
        return bethe_poly_jacobian(x, z, eta);
    };
    return newton_solve(res, jac, seed, tol, max_iter);
}

}  // namespace detail

// Seed rapidity of a single free magnon with the given mode number.
inline Complex bethe_mode_seed(int L, int mode) {
    if (L < 1) throw InvalidInput("chain length must be positive");
    if (mode % L == 0)
        throw InvalidInput("mode number must be nonzero modulo the chain length");
    return Complex{0.5 / std::tan(std::numbers::pi * mode / L), 0.0};
}

// Solve the Bethe equations of the homogeneous length-L chain from mode
// seeds, polishing with Newton on the logarithmic form at fixed branch
// constants, then verify the multiplicative residual.
inline BetheRoots solve_bethe(int L, int N, const std::vector<int>& modes,
                              Complex z = Complex{0.0, 0.5},
                              Complex eta = Complex{0.0, 1.0}, double tol = 1e-10) {
    check_chain_length(L);
    if (N < 0 || N > L) throw InvalidInput("root count must satisfy 0 <= N <= L");
    if (static_cast<int>(modes.size()) != N)
        throw InvalidInput("one mode number per root is required");
    BetheRoots out;
    out.L = L;
    out.N = N;
    out.eta = eta;
    out.z = z;
    out.mode_numbers = modes;
    if (N == 0) {
        out.verified = true;
        return out;
    }
    CVector seed(N);
    for (int i = 0; i < N; ++i) seed[i] = bethe_mode_seed(L, modes[i]);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (std::abs(seed[i] - seed[j]) < 1e-12)
                throw InvalidInput("mode numbers give coinciding seeds");
    const std::vector<Complex> zs(L, z);
    const double newton_tol = std::min(tol * 1e-2, 1e-13);
    out.roots = detail::newton_on_log_system(seed, zs, eta, modes, newton_tol, 80);
    detail::check_distinct_roots(out.roots);
    out.residual = max_bethe_residual(out.roots, L, z, eta);
    out.verified = out.residual <= tol;
    if (!out.verified)
        throw NoConvergence("bethe residual above tolerance after polishing",
                            out.roots, out.residual);
    return out;
}

// Same solve from explicit starting guesses; branch constants are inferred at
// the seed and held fixed.
inline BetheRoots solve_bethe_from_guess(int L, const std::vector<Complex>& guess,
                                         Complex z = Complex{0.0, 0.5},
                                         Complex eta = Complex{0.0, 1.0},
                                         double tol = 1e-10) {
    check_chain_length(L);
    const int N = static_cast<int>(guess.size());
    BetheRoots out;
    out.L = L;
    out.N = N;
    out.eta = eta;
    out.z = z;
    if (N == 0) {
        out.verified = true;
        return out;
    }
    const std::vector<Complex> zs(L, z);
    const std::vector<int> modes = detail::infer_modes(guess, zs, eta);
    const double newton_tol = std::min(tol * 1e-2, 1e-13);
    out.roots = detail::newton_on_log_system(guess, zs, eta, modes, newton_tol, 80);
    out.mode_numbers = modes;
    detail::check_distinct_roots(out.roots);
    out.residual = max_bethe_residual(out.roots, L, z, eta);
    out.verified = out.residual <= tol;
    if (!out.verified)
        throw NoConvergence("bethe residual above tolerance after polishing",
                            out.roots, out.residual);
    return out;
}

struct InhomogeneousRoots {
    Complex eta{0.0, 1.0};
    std::vector<Complex> z;
    std::vector<Complex> roots;
    double residual = 0.0;
};

// Follow a verified homogeneous solution to an inhomogeneous column-rapidity
// list along a straight path, re-solving at each step.
inline InhomogeneousRoots continue_roots(const BetheRoots& start,
                                         const std::vector<Complex>& z_target,
                                         int steps = 8, double tol = 1e-10) {
    if (static_cast<int>(z_target.size()) != start.L)
        throw InvalidInput("one target rapidity per column is required");
    if (steps < 1) throw InvalidInput("continuation needs at least one step");
    InhomogeneousRoots out;
    out.eta = start.eta;
    out.z = z_target;
    if (start.N == 0) {
        out.roots = {};
        return out;
    }
    CVector roots = start.roots;
    const std::vector<Complex> z0(start.L, start.z);
    const double newton_tol = std::min(tol * 1e-2, 1e-13);
    for (int s = 1; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        std::vector<Complex> zs(start.L);
        for (int j = 0; j < start.L; ++j)
            zs[j] = (1.0 - t) * z0[j] + t * z_target[j];
        roots = detail::newton_on_poly_system(roots, zs, start.eta, newton_tol, 60);
    }
    detail::check_distinct_roots(roots);
    out.roots = std::move(roots);
    const std::vector<double> r = bethe_residual_inhom(out.roots, z_target, start.eta);
    for (double v : r) out.residual = std::max(out.residual, v);
    if (out.residual > tol)
        throw NoConvergence("continued roots miss the inhomogeneous equations",
                            out.roots, out.residual);
    return out;
}

struct BetheState {
    BetheRoots roots;
    LatticeStateVector vector;
};

// Stack one B line per root on the reference state of the homogeneous chain.
inline BetheState build_bethe_state(const BetheRoots& roots) {
    check_chain_length(roots.L);
    if (static_cast<int>(roots.roots.size()) != roots.N)
        throw InvalidInput("root list does not match its declared count");
    const std::vector<Complex> zs(roots.L, roots.z);
    const VertexWeights w{roots.eta};
    LatticeStateVector state = reference_state(roots.L);
    for (int i = roots.N - 1; i >= 0; --i)
        state = apply_b_line(roots.roots[i], zs, state, w);
    return BetheState{roots, std::move(state)};
}

// Transfer-matrix eigencheck at spectral parameter x: apply A + D by line
// transfer and compare against the least-squares eigenvalue estimate. The
// estimate conjugates the state; the bilinear self-pairing would vanish
// identically for any plane-wave component whose momentum is a nonzero
// quantized mode.
inline std::pair<Complex, double> eigencheck(const BetheState& state, Complex x) {
    const int L = state.roots.L;
    const std::vector<Complex> zs(L, state.roots.z);
    const VertexWeights w{state.roots.eta};
    const LatticeStateVector ta = apply_a_line(x, zs, state.vector, w);
    const LatticeStateVector td = apply_d_line(x, zs, state.vector, w);

    double psi_norm = 0.0;
    for (const Complex& c : state.vector.amps) psi_norm = std::max(psi_norm, std::abs(c));
    if (psi_norm == 0.0) throw InvalidInput("eigencheck on the zero vector");

    Complex num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t m = 0; m < state.vector.amps.size(); ++m) {
        const Complex t = ta.amps[m] + td.amps[m];
        num += std::conj(state.vector.amps[m]) * t;
        den += std::norm(state.vector.amps[m]);
    }
    const Complex lambda = num / den;

    double dev = 0.0;
    for (std::size_t m = 0; m < state.vector.amps.size(); ++m) {
        const Complex t = ta.amps[m] + td.amps[m];
        dev = std::max(dev, std::abs(t - lambda * state.vector.amps[m]));
    }
    return {lambda, dev / psi_norm};
}

}  // namespace sconst
