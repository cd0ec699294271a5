#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "sconst/bethe.hpp"
#include "sconst/determinants.hpp"
#include "sconst/errors.hpp"
#include "sconst/vertex_model.hpp"

using namespace sconst;

namespace {

const Complex kEta{0.0, 1.0};
const Complex kZ{0.0, 0.5};
const VertexWeights kWt{kEta};

double rel(Complex a, Complex b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("empty and single-vertex partition functions", "[determinants]") {
    REQUIRE(izergin({}, {}, kEta) == Complex{1.0, 0.0});
    const Complex w{0.3, 0.4};
    const Complex val = izergin({w}, {kZ}, kEta);
    REQUIRE(std::abs(val - kEta / (w - kZ)) < 1e-14);
    REQUIRE(std::abs(val - Complex{-1.0, 3.0}) < 1e-12);
}

TEST_CASE("partition function determinant matches the lattice sum",
          "[determinants]") {
    const std::vector<Complex> w{Complex{0.3, 0.2}, Complex{-0.6, 0.1},
                                 Complex{1.1, -0.3}, Complex{-1.4, 0.45}};
    const std::vector<Complex> z{Complex{0.05, 0.55}, Complex{-0.35, 0.4},
                                 Complex{0.75, 0.62}, Complex{-0.95, 0.5}};
    for (std::size_t n = 2; n <= 4; ++n) {
        const std::vector<Complex> wn(w.begin(), w.begin() + n);
        const std::vector<Complex> zn(z.begin(), z.begin() + n);
        REQUIRE(rel(izergin(wn, zn, kEta), brute_dwpf(wn, zn, kWt)) < 1e-11);
    }
}

TEST_CASE("partition function is symmetric in each rapidity family",
          "[determinants]") {
    const std::vector<Complex> w{Complex{0.3, 0.2}, Complex{-0.6, 0.1},
                                 Complex{1.1, -0.3}};
    const std::vector<Complex> z{Complex{0.05, 0.55}, Complex{-0.35, 0.4},
                                 Complex{0.75, 0.62}};
    const Complex base = izergin(w, z, kEta);
    const std::vector<Complex> wp{w[2], w[0], w[1]};
    const std::vector<Complex> zp{z[1], z[2], z[0]};
    REQUIRE(rel(izergin(wp, z, kEta), base) < 1e-12);
    REQUIRE(rel(izergin(w, zp, kEta), base) < 1e-12);
}

TEST_CASE("partition function input validation", "[determinants]") {
    REQUIRE_THROWS_AS(izergin({Complex{0.3, 0.2}}, {}, kEta), InvalidInput);
    REQUIRE_THROWS_AS(
        izergin({Complex{0.3, 0.2}}, {Complex{0.3, 0.2}}, kEta),
        CoincidentRapidities);
    REQUIRE_THROWS_AS(
        izergin({Complex{0.3, 0.2}}, {Complex{0.1, 0.6}}, Complex{0.0, 0.0}),
        InvalidInput);
}

TEST_CASE("homogeneous partition function is the coincident-column limit",
          "[determinants]") {
    const std::vector<Complex> w{Complex{0.4, 0.1}, Complex{-0.7, 0.25},
                                 Complex{1.2, -0.15}};
    const Complex exact = izergin_hom(w, kZ, kEta);
    double prev = 1e300;
    for (const double delta : {1e-2, 1e-3, 1e-4}) {
        std::vector<Complex> z(3);
        for (int j = 0; j < 3; ++j)
            z[j] = kZ + Complex{(j - 1.0) * delta, 0.0};
        const double err = rel(izergin(w, z, kEta), exact);
        REQUIRE(err < prev);
        prev = err;
    }
    REQUIRE(prev < 1e-6);
    REQUIRE(izergin_hom({}, kZ, kEta) == Complex{1.0, 0.0});
    const Complex w0{0.3, 0.4};
    REQUIRE(rel(izergin_hom({w0}, kZ, kEta), kEta / (w0 - kZ)) < 1e-13);
}

TEST_CASE("full restriction reduces the scalar product to the partition function",
          "[determinants]") {
    const std::vector<Complex> u{Complex{0.3, 0.2}, Complex{-0.6, 0.1},
                                 Complex{1.1, -0.3}};
    const std::vector<Complex> z{Complex{0.05, 0.55}, Complex{-0.35, 0.4},
                                 Complex{0.75, 0.62}};
    REQUIRE(rel(slavnov_restricted(3, u, {}, z, kEta), izergin(u, z, kEta)) <
            1e-12);
}

TEST_CASE("restricted scalar product matches the lattice transfer",
          "[determinants]") {
    // On-shell roots continued to separated columns keep the determinant
    // honest against the brute-force contraction.
    const BetheRoots hom = solve_bethe(4, 2, {1, -1});
    std::vector<Complex> zs(4);
    for (int j = 0; j < 4; ++j) zs[j] = kZ + Complex{(j - 1.5) * 1e-2, 0.0};
    const InhomogeneousRoots cont = continue_roots(hom, zs);
    const std::vector<Complex> v{Complex{0.37, 0.21}};
    const Complex d = slavnov_restricted(4, cont.roots, v, zs, kEta);
    const Complex b = brute_restricted(4, 2, 1, cont.roots, v, zs, kWt);
    REQUIRE(rel(d, b) < 1e-9);
}

TEST_CASE("restricted scalar product input validation", "[determinants]") {
    const std::vector<Complex> u{Complex{0.3, 0.2}, Complex{-0.6, 0.1}};
    const std::vector<Complex> z4(4, kZ);
    REQUIRE_THROWS_AS(
        slavnov_restricted(1, u, {}, {kZ}, kEta), InvalidGeometry);
    REQUIRE_THROWS_AS(
        slavnov_restricted(4, u, {Complex{0.1, 0.0}, Complex{0.2, 0.0},
                                  Complex{0.3, 0.0}},
                           z4, kEta),
        InvalidGeometry);
    REQUIRE_THROWS_AS(slavnov_restricted(4, u, {}, {kZ}, kEta), InvalidInput);
    REQUIRE_THROWS_AS(
        slavnov_restricted(4, u, {u[0]}, z4, kEta), CoincidentRapidities);
}

TEST_CASE("homogeneous scalar product matches the lattice on equal columns",
          "[determinants]") {
    const BetheRoots sol = solve_bethe(4, 2, {1, -1});
    const std::vector<Complex> v{Complex{0.42, 0.17}};
    const Complex d = slavnov_hom(4, sol.roots, v, kZ, kEta);
    const Complex b =
        brute_restricted(4, 2, 1, sol.roots, v, std::vector<Complex>(4, kZ), kWt);
    REQUIRE(rel(d, b) < 1e-10);
}

TEST_CASE("vanishing v count turns the scalar product into the homogeneous "
          "partition function",
          "[determinants]") {
    const std::vector<Complex> u{Complex{0.3, 0.2}, Complex{-0.6, 0.1},
                                 Complex{1.1, -0.3}};
    REQUIRE(rel(slavnov_hom(3, u, {}, kZ, kEta, false),
                izergin_hom(u, kZ, kEta)) < 1e-12);
}

TEST_CASE("off-shell roots are rejected unless explicitly allowed",
          "[determinants]") {
    const std::vector<Complex> u{Complex{0.8, 0.1}, Complex{-0.2, 0.3}};
    const std::vector<Complex> v{Complex{0.5, -0.4}};
    REQUIRE_THROWS_AS(slavnov_hom(6, u, v, kZ, kEta), UnverifiedRoots);
    REQUIRE_THROWS_AS(gaudin_norm(6, u, kZ, kEta), UnverifiedRoots);
    REQUIRE(is_finite(slavnov_hom(6, u, v, kZ, kEta, false)));
    REQUIRE(is_finite(gaudin_norm(6, u, kZ, kEta, false)));
}

TEST_CASE("norm determinant takes its closed-form values", "[determinants]") {
    REQUIRE(std::abs(gaudin_norm(4, {Complex{0.5, 0.0}}, kZ, kEta) -
                     Complex{-8.0, 0.0}) < 1e-11);
    const double a = 0.5 / std::sqrt(3.0);
    REQUIRE(std::abs(gaudin_norm(4, {Complex{a, 0.0}, Complex{-a, 0.0}}, kZ,
                                 kEta) -
                     Complex{432.0, 0.0}) < 1e-9);
    REQUIRE(gaudin_norm(4, {}, kZ, kEta) == Complex{1.0, 0.0});
}

TEST_CASE("norm determinant equals the explicit contraction", "[determinants]") {
    const BetheRoots sol = solve_bethe(6, 1, {1});
    const std::vector<Complex> zs(6, kZ);
    LatticeStateVector state = reference_state(6);
    state = apply_b_line(sol.roots[0], zs, state, kWt);
    state = apply_c_line(sol.roots[0], zs, state, kWt);
    REQUIRE(rel(state.amps[0], gaudin_norm(6, sol.roots, kZ, kEta)) < 1e-11);
}

TEST_CASE("norm input validation", "[determinants]") {
    REQUIRE_THROWS_AS(
        gaudin_norm(1, {Complex{0.1, 0.0}, Complex{0.4, 0.0}}, kZ, kEta),
        InvalidGeometry);
    REQUIRE_THROWS_AS(gaudin_norm(4, {kZ}, kZ, kEta), CoincidentRapidities);
    REQUIRE_THROWS_AS(gaudin_norm(4, {-kZ}, kZ, kEta), CoincidentRapidities);
}

TEST_CASE("scalar product approaches the norm on the diagonal",
          "[determinants]") {
    const BetheRoots sol = solve_bethe(4, 2, {1, -1});
    const Complex norm = gaudin_norm(4, sol.roots, kZ, kEta);
    const std::vector<Complex> dir{Complex{0.9, 0.3}, Complex{-0.6, 0.8}};
    auto err_at = [&](double eps) {
        std::vector<Complex> v(2);
        for (int i = 0; i < 2; ++i) v[i] = sol.roots[i] + eps * dir[i];
        return rel(slavnov_hom(4, sol.roots, v, kZ, kEta), norm);
    };
    const double e2 = err_at(1e-2);
    const double e3 = err_at(1e-3);
    REQUIRE(e3 < e2);
    // The defect is first order in the separation, so a decade in eps buys
    // roughly a decade in accuracy.
    REQUIRE(e2 / e3 > 5.0);
    REQUIRE(e2 / e3 < 20.0);
    REQUIRE(e3 < 1e-2);
}
