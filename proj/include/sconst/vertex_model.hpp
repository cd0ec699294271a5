#pragma once
// Rational six-vertex weights and brute-force horizontal-line transfer over
// the full 2^L spin basis. Basis index is the down-spin bitmask; bit j is
// column j, column 0 leftmost.

#include <array>
#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sconst/errors.hpp"
#include "sconst/numerics.hpp"

namespace sconst {

struct VertexWeights {
    Complex eta{0.0, 1.0};
};

enum class WeightKind { a, b, c };

inline void require_separated(Complex u, Complex z, const char* what) {
    if (std::abs(u - z) < 1e-12 * (1.0 + std::abs(u) + std::abs(z)))
        throw CoincidentRapidities(std::string(what) + " coincide");
}

inline Complex weight(WeightKind k, Complex u, Complex z, const VertexWeights& w) {
    if (!is_finite(u) || !is_finite(z) || !is_finite(w.eta))
        throw InvalidInput("vertex weight arguments must be finite");
    if (w.eta == Complex{0.0, 0.0}) throw InvalidInput("crossing parameter is zero");
    switch (k) {
        case WeightKind::b:
            return Complex{1.0, 0.0};
        case WeightKind::a:
            require_separated(u, z, "line and column rapidity");
            return (u - z + w.eta) / (u - z);
        case WeightKind::c:
            require_separated(u, z, "line and column rapidity");
            return w.eta / (u - z);
    }
    throw InvalidInput("unknown weight kind");
}

struct SpinBasisIndex {
    int L = 0;
    std::uint32_t mask = 0;

    int down_count() const { return std::popcount(mask); }
    int net_spin() const { return L - 2 * down_count(); }
};

struct LatticeStateVector {
    int L = 0;
    std::vector<Complex> amps;  // size 2^L, indexed by down-spin bitmask
};

inline void check_chain_length(int L, int cap = 16) {
    if (L < 0) throw InvalidInput("chain length must be nonnegative");
    if (L > cap)
        throw TooLarge("chain length " + std::to_string(L) + " exceeds cap " +
                       std::to_string(cap));
}

// All spins up.
inline LatticeStateVector reference_state(int L) {
    check_chain_length(L);
    LatticeStateVector v{L, std::vector<Complex>(std::size_t{1} << L, Complex{})};
    v.amps[0] = 1.0;
    return v;
}

// All spins down.
inline LatticeStateVector dual_reference_state(int L) {
    check_chain_length(L);
    LatticeStateVector v{L, std::vector<Complex>(std::size_t{1} << L, Complex{})};
    v.amps.back() = 1.0;
    return v;
}

// The four monodromy entries, labelled by the fixed horizontal boundary
// arrows of the line: (left, right) = (up, up) A, (up, down) B, (down, up) C,
// (down, down) D. A B line deposits exactly one down spin, a C line removes
// one.
enum class LineKind { A, B, C, D };

// Sweep one horizontal line across all L columns, carrying the state of the
// current horizontal segment. Per column, a preserved carry weighs the site
// with a (carry matching up/down orientation) or b, and a carry flip costs c
// and toggles the site.
inline LatticeStateVector apply_line(LineKind kind, Complex u,
                                     const std::vector<Complex>& z,
                                     const LatticeStateVector& v,
                                     const VertexWeights& w) {
    check_chain_length(v.L);
    const int L = v.L;
    if (static_cast<int>(z.size()) != L)
        throw InvalidInput("one column rapidity per site is required");
    const std::size_t dim = std::size_t{1} << L;
    if (v.amps.size() != dim) throw InvalidInput("state vector has wrong dimension");

    std::vector<Complex> wa(L), wc(L);
    for (int j = 0; j < L; ++j) {
        wa[j] = weight(WeightKind::a, u, z[j], w);
        wc[j] = weight(WeightKind::c, u, z[j], w);
    }

    const int carry_in = (kind == LineKind::A || kind == LineKind::B) ? 0 : 1;
    const int carry_out = (kind == LineKind::A || kind == LineKind::C) ? 0 : 1;

    std::array<std::vector<Complex>, 2> cur;
    cur[carry_in] = v.amps;
    cur[1 - carry_in].assign(dim, Complex{});
    std::array<std::vector<Complex>, 2> next;

    for (int j = 0; j < L; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        next[0].assign(dim, Complex{});
        next[1].assign(dim, Complex{});
        for (std::size_t m = 0; m < dim; ++m) {
            const bool down = (m & bit) != 0;
            const Complex up_carry = cur[0][m];
            const Complex dn_carry = cur[1][m];
            if (up_carry != Complex{}) {
                next[0][m] += down ? up_carry : wa[j] * up_carry;
                if (!down) next[1][m | bit] += wc[j] * up_carry;
            }
            if (dn_carry != Complex{}) {
                next[1][m] += down ? wa[j] * dn_carry : dn_carry;
                if (down) next[0][m & ~bit] += wc[j] * dn_carry;
            }
        }
        cur[0] = std::move(next[0]);
        cur[1] = std::move(next[1]);
    }
    return LatticeStateVector{L, std::move(cur[carry_out])};
}

inline LatticeStateVector apply_a_line(Complex u, const std::vector<Complex>& z,
                                       const LatticeStateVector& v,
                                       const VertexWeights& w) {
    return apply_line(LineKind::A, u, z, v, w);
}

inline LatticeStateVector apply_b_line(Complex u, const std::vector<Complex>& z,
                                       const LatticeStateVector& v,
                                       const VertexWeights& w) {
    return apply_line(LineKind::B, u, z, v, w);
}

inline LatticeStateVector apply_c_line(Complex u, const std::vector<Complex>& z,
                                       const LatticeStateVector& v,
                                       const VertexWeights& w) {
    return apply_line(LineKind::C, u, z, v, w);
}

inline LatticeStateVector apply_d_line(Complex u, const std::vector<Complex>& z,
                                       const LatticeStateVector& v,
                                       const VertexWeights& w) {
    return apply_line(LineKind::D, u, z, v, w);
}

// Domain-wall partition function summed on the lattice: N B lines stacked on
// the all-up state, read off at the all-down component.
inline Complex brute_dwpf(const std::vector<Complex>& w_list,
                          const std::vector<Complex>& z_list,
                          const VertexWeights& wt) {
    if (w_list.size() != z_list.size())
        throw InvalidInput("domain-wall lattice must be square");
    const int n = static_cast<int>(w_list.size());
    check_chain_length(n);
    LatticeStateVector state = reference_state(n);
    for (int i = n - 1; i >= 0; --i) state = apply_b_line(w_list[i], z_list, state, wt);
    return state.amps.back();
}

// Mixed-boundary partition function: N1 B lines, then N2 C lines on top,
// read off at the component whose first N1-N2 columns point down.
inline Complex brute_restricted(int L, int N1, int N2,
                                const std::vector<Complex>& u_list,
                                const std::vector<Complex>& v_list,
                                const std::vector<Complex>& z_list,
                                const VertexWeights& wt) {
    check_chain_length(L);
    if (N2 < 0 || N1 < N2 || L < N1)
        throw InvalidGeometry("line counts must satisfy 0 <= N2 <= N1 <= L");
    if (static_cast<int>(u_list.size()) != N1 ||
        static_cast<int>(v_list.size()) != N2 ||
        static_cast<int>(z_list.size()) != L)
        throw InvalidInput("rapidity list sizes must match the line counts");
    LatticeStateVector state = reference_state(L);
    for (int i = N1 - 1; i >= 0; --i) state = apply_b_line(u_list[i], z_list, state, wt);
    for (int i = N2 - 1; i >= 0; --i) state = apply_c_line(v_list[i], z_list, state, wt);
    const std::uint32_t mask = (std::uint32_t{1} << (N1 - N2)) - 1;
    return state.amps[mask];
}

}  // namespace sconst
