#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "sconst/bethe.hpp"
#include "sconst/errors.hpp"
#include "sconst/vertex_model.hpp"

using namespace sconst;

namespace {

const VertexWeights kWt{Complex{0.0, 1.0}};
const Complex kZ{0.0, 0.5};
const Complex kEta{0.0, 1.0};

std::vector<Complex> sorted_by_real(std::vector<Complex> v) {
    std::sort(v.begin(), v.end(),
              [](Complex a, Complex b) { return a.real() < b.real(); });
    return v;
}

}  // namespace

TEST_CASE("single-site monodromy blocks are bare weights", "[bethe]") {
    const Complex x{0.43, 0.29};
    const std::vector<Complex> z{Complex{-0.11, 0.21}};
    const MonodromyBlocks m = build_monodromy(x, z, kWt);
    const Complex a = weight(WeightKind::a, x, z[0], kWt);
    const Complex c = weight(WeightKind::c, x, z[0], kWt);
    REQUIRE(std::abs(m.A(0, 0) - a) < 1e-14);
    REQUIRE(std::abs(m.A(1, 1) - 1.0) < 1e-14);
    REQUIRE(std::abs(m.D(0, 0) - 1.0) < 1e-14);
    REQUIRE(std::abs(m.D(1, 1) - a) < 1e-14);
    REQUIRE(std::abs(m.B(1, 0) - c) < 1e-14);
    REQUIRE(std::abs(m.C(0, 1) - c) < 1e-14);
    REQUIRE(m.B(0, 1) == Complex{0.0, 0.0});
    REQUIRE(m.C(1, 0) == Complex{0.0, 0.0});
    REQUIRE_THROWS_AS(build_monodromy(x, std::vector<Complex>(11, z[0]), kWt),
                      TooLarge);
}

TEST_CASE("monodromy blocks reproduce the line transfer entrywise", "[bethe]") {
    const int L = 4;
    const std::vector<Complex> z{Complex{0.12, -0.31}, Complex{-0.42, 0.18},
                                 Complex{0.33, 0.27}, Complex{-0.05, -0.14}};
    const Complex x{0.61, 0.44};
    const MonodromyBlocks m = build_monodromy(x, z, kWt);
    const std::size_t dim = std::size_t{1} << L;
    const std::vector<std::pair<const SquareMatrix*, LineKind>> blocks{
        {&m.A, LineKind::A},
        {&m.B, LineKind::B},
        {&m.C, LineKind::C},
        {&m.D, LineKind::D}};
    for (const auto& [block, kind] : blocks) {
        for (std::size_t in = 0; in < dim; ++in) {
            LatticeStateVector basis{L, std::vector<Complex>(dim, Complex{})};
            basis.amps[in] = 1.0;
            const LatticeStateVector col = apply_line(kind, x, z, basis, kWt);
            for (std::size_t out = 0; out < dim; ++out)
                REQUIRE(std::abs((*block)(out, in) - col.amps[out]) < 1e-12);
        }
    }
}

TEST_CASE("the reference state diagonalizes the transfer matrix", "[bethe]") {
    const int L = 4;
    const std::vector<Complex> z{Complex{0.2, -0.1}, Complex{-0.3, 0.4},
                                 Complex{0.15, 0.22}, Complex{-0.4, -0.08}};
    const Complex x{0.91, 0.13};
    const LatticeStateVector ref = reference_state(L);
    const LatticeStateVector ta = apply_a_line(x, z, ref, kWt);
    const LatticeStateVector td = apply_d_line(x, z, ref, kWt);
    Complex prod_a{1.0, 0.0};
    for (const Complex& zj : z) prod_a *= weight(WeightKind::a, x, zj, kWt);
    REQUIRE(std::abs(ta.amps[0] + td.amps[0] - (prod_a + 1.0)) < 1e-13);
    for (std::size_t mask = 1; mask < ta.amps.size(); ++mask) {
        REQUIRE(ta.amps[mask] == Complex{0.0, 0.0});
        REQUIRE(td.amps[mask] == Complex{0.0, 0.0});
    }
}

TEST_CASE("creation blocks at different rapidities commute", "[bethe]") {
    const std::vector<Complex> z{Complex{0.31, -0.22}, Complex{-0.17, 0.35},
                                 Complex{0.48, 0.11}, Complex{-0.39, -0.27}};
    const MonodromyBlocks m1 = build_monodromy(Complex{0.52, 0.33}, z, kWt);
    const MonodromyBlocks m2 = build_monodromy(Complex{-0.71, 0.18}, z, kWt);
    REQUIRE((m1.B * m2.B - m2.B * m1.B).max_abs() < 1e-12);
    REQUIRE((m1.C * m2.C - m2.C * m1.C).max_abs() < 1e-12);
}

TEST_CASE("mode seeds satisfy the one-magnon equations exactly", "[bethe]") {
    REQUIRE(std::abs(bethe_mode_seed(4, 1) - Complex{0.5, 0.0}) < 1e-15);
    REQUIRE(std::abs(bethe_mode_seed(4, 2)) < 1e-15);
    for (int L : {4, 5, 6, 8}) {
        for (int mode = -(L - 1) / 2; mode <= L / 2; ++mode) {
            if (mode == 0) continue;
            const Complex u = bethe_mode_seed(L, mode);
            REQUIRE(max_bethe_residual({u}, L, kZ, kEta) < 1e-12);
        }
    }
    REQUIRE_THROWS_AS(bethe_mode_seed(4, 0), InvalidInput);
    REQUIRE_THROWS_AS(bethe_mode_seed(4, 4), InvalidInput);
    REQUIRE_THROWS_AS(bethe_mode_seed(4, -8), InvalidInput);
    REQUIRE_THROWS_AS(bethe_mode_seed(0, 1), InvalidInput);
}

TEST_CASE("off-shell rapidities have a visible residual", "[bethe]") {
    REQUIRE(max_bethe_residual({Complex{0.3, 0.0}}, 4, kZ, kEta) > 1e-2);
    REQUIRE(max_bethe_residual({Complex{0.8, 0.1}, Complex{-0.2, 0.3}}, 6, kZ,
                               kEta) > 1e-2);
}

TEST_CASE("two-magnon solution on four sites is the closed-form pair", "[bethe]") {
    const BetheRoots sol = solve_bethe(4, 2, {1, -1});
    const double a = 0.5 / std::sqrt(3.0);
    const std::vector<Complex> s = sorted_by_real(sol.roots);
    REQUIRE(std::abs(s[0] - Complex{-a, 0.0}) < 1e-9);
    REQUIRE(std::abs(s[1] - Complex{a, 0.0}) < 1e-9);
    REQUIRE(sol.residual < 1e-12);
    REQUIRE(sol.verified);
    REQUIRE(sol.mode_numbers == std::vector<int>{1, -1});
}

TEST_CASE("three-magnon solution on six sites contains the zero root", "[bethe]") {
    const BetheRoots sol = solve_bethe(6, 3, {1, -1, 3});
    const std::vector<Complex> s = sorted_by_real(sol.roots);
    REQUIRE(std::abs(s[1]) < 1e-9);
    REQUIRE(std::abs(s[0] + s[2]) < 1e-9);  // parity pair
    REQUIRE(max_bethe_residual(sol.roots, 6, kZ, kEta) < 1e-12);
    REQUIRE(sol.residual < 1e-12);
}

TEST_CASE("solver input validation", "[bethe]") {
    REQUIRE_THROWS_AS(solve_bethe(4, 1, {0}), InvalidInput);
    REQUIRE_THROWS_AS(solve_bethe(4, 2, {1, 1}), InvalidInput);
    REQUIRE_THROWS_AS(solve_bethe(4, 2, {1}), InvalidInput);
    REQUIRE_THROWS_AS(solve_bethe(4, 5, {1, 2, 3, -1, -2}), InvalidInput);
    REQUIRE_THROWS_AS(solve_bethe(17, 1, {1}), TooLarge);
}

TEST_CASE("colliding seeds are reported rather than deduplicated", "[bethe]") {
    REQUIRE_THROWS_AS(solve_bethe(8, 3, {1, -1, 2}), CollidingRoots);
}

TEST_CASE("mode order does not change the solution set", "[bethe]") {
    const BetheRoots a = solve_bethe(6, 2, {-1, 2});
    const BetheRoots b = solve_bethe(6, 2, {2, -1});
    const std::vector<Complex> sa = sorted_by_real(a.roots);
    const std::vector<Complex> sb = sorted_by_real(b.roots);
    for (std::size_t i = 0; i < sa.size(); ++i)
        REQUIRE(std::abs(sa[i] - sb[i]) < 1e-12);
}

TEST_CASE("solving from an explicit guess recovers the nearby solution",
          "[bethe]") {
    const BetheRoots exact = solve_bethe(4, 2, {1, -1});
    const std::vector<Complex> guess{exact.roots[0] + Complex{1e-3, 2e-4},
                                     exact.roots[1] - Complex{2e-3, 1e-4}};
    const BetheRoots refined = solve_bethe_from_guess(4, guess);
    for (std::size_t i = 0; i < 2; ++i)
        REQUIRE(std::abs(refined.roots[i] - exact.roots[i]) < 1e-10);
    REQUIRE(refined.residual < 1e-12);
}

TEST_CASE("roots continue to inhomogeneous columns", "[bethe]") {
    SECTION("centered offsets on four sites") {
        const BetheRoots hom = solve_bethe(4, 2, {1, -1});
        std::vector<Complex> zs(4);
        for (int j = 0; j < 4; ++j)
            zs[j] = kZ + Complex{(j - 1.5) * 1e-2, 0.0};
        const InhomogeneousRoots cont = continue_roots(hom, zs);
        REQUIRE(cont.residual < 1e-10);
        for (std::size_t i = 0; i < 2; ++i)
            REQUIRE(std::abs(cont.roots[i] - hom.roots[i]) < 0.05);
    }
    SECTION("a solution containing the zero root survives continuation") {
        const BetheRoots hom = solve_bethe(6, 3, {1, -1, 3});
        std::vector<Complex> zs(6);
        for (int j = 0; j < 3; ++j) zs[j] = kZ + Complex{(j - 1.0) * 1e-2, 0.0};
        for (int j = 0; j < 3; ++j)
            zs[3 + j] = kZ + Complex{(j - 1.0) * 1.7e-2, 0.0};
        const InhomogeneousRoots cont = continue_roots(hom, zs);
        REQUIRE(cont.residual < 1e-10);
    }
    SECTION("the vacuum continues to an empty root list") {
        const BetheRoots vac = solve_bethe(4, 0, {});
        const InhomogeneousRoots cont =
            continue_roots(vac, std::vector<Complex>(4, kZ + Complex{0.01, 0.0}));
        REQUIRE(cont.roots.empty());
    }
    SECTION("input validation") {
        const BetheRoots hom = solve_bethe(4, 2, {1, -1});
        REQUIRE_THROWS_AS(continue_roots(hom, std::vector<Complex>(3, kZ)),
                          InvalidInput);
        REQUIRE_THROWS_AS(
            continue_roots(hom, std::vector<Complex>(4, kZ), 0),
            InvalidInput);
    }
}

TEST_CASE("bethe vectors live in the fixed magnon sector", "[bethe]") {
    const BetheRoots sol = solve_bethe(6, 2, {-1, 2});
    const BetheState state = build_bethe_state(sol);
    for (std::size_t mask = 0; mask < state.vector.amps.size(); ++mask)
        if (std::popcount(mask) != 2)
            REQUIRE(state.vector.amps[mask] == Complex{0.0, 0.0});
    double support = 0.0;
    for (const Complex& amp : state.vector.amps)
        support = std::max(support, std::abs(amp));
    REQUIRE(support > 0.0);
}

TEST_CASE("on-shell states pass the transfer eigencheck", "[bethe]") {
    const BetheRoots sol = solve_bethe(8, 2, {-2, 3});
    const BetheState state = build_bethe_state(sol);
    for (const Complex x : {Complex{0.7, 0.1}, Complex{-1.3, -0.2},
                            Complex{0.25, 0.15}}) {
        const auto [lambda, dev] = eigencheck(state, x);
        REQUIRE(dev < 1e-10);
        REQUIRE(is_finite(lambda));
    }
}

TEST_CASE("perturbed roots fail the transfer eigencheck", "[bethe]") {
    BetheRoots fake = solve_bethe(6, 2, {-1, 2});
    fake.roots[0] += Complex{0.01, 0.0};
    const BetheState state = build_bethe_state(fake);
    const auto [lambda, dev] = eigencheck(state, Complex{0.8, 0.2});
    REQUIRE(dev > 1e-6);
}

TEST_CASE("mismatched root counts are rejected when building states", "[bethe]") {
    BetheRoots broken = solve_bethe(4, 2, {1, -1});
    broken.roots.pop_back();
    REQUIRE_THROWS_AS(build_bethe_state(broken), InvalidInput);
}
