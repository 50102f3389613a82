#include <doctest.h>

#include "nvscatter/norms.hpp"
#include "nvscatter/spectral.hpp"
#include "test_helpers.hpp"

using namespace nv;
using nvtest::rel_err;

TEST_CASE("derivatives of constants vanish") {
    Grid g(32, 4.0);
    ComplexField c(g);
    c.data.setConstant(cx(2.5, -1.0));
    CHECK(max_abs(dbar(c)) <= 1e-13);
    CHECK(max_abs(d(c)) <= 1e-13);
}

TEST_CASE("single Fourier mode has the closed-form derivatives") {
    Grid g(32, 4.0);
    const double L = g.L;
    ComplexField f = make_field(g, [&](cx z) {
        return std::exp(cx(0, M_PI * (z.real() + z.imag()) / L));
    });
    const cx db_factor = cx(0, M_PI / (2 * L)) * cx(1, 1);
    const cx d_factor = cx(0, M_PI / (2 * L)) * cx(1, -1);
    ComplexField db_ref{g, db_factor * f.data};
    ComplexField d_ref{g, d_factor * f.data};
    CHECK(rel_err(dbar(f), db_ref) <= 1e-13);
    CHECK(rel_err(d(f), d_ref) <= 1e-13);
}

TEST_CASE("gaussian derivative oracle at L=8, n=128") {
    Grid g(128, 8.0);
    ComplexField f = make_field(g, [](cx z) { return std::exp(-std::norm(z)); });
    // ∂̄(z·z̄) = z, so ∂̄f = −z·f (and ∂f = −z̄·f)
    ComplexField db_ref = make_field(g, [](cx z) { return -z * std::exp(-std::norm(z)); });
    ComplexField d_ref = make_field(g, [](cx z) { return -std::conj(z) * std::exp(-std::norm(z)); });
    CHECK(max_abs(dbar(f) - db_ref) <= 1e-10);
    CHECK(max_abs(d(f) - d_ref) <= 1e-10);
}

TEST_CASE("d and dbar commute and assemble the laplacian") {
    Grid g(64, 6.0);
    ComplexField f = nvtest::random_band_limited(g, 11);
    ComplexField a = d(dbar(f));
    ComplexField b = dbar(d(f));
    CHECK(rel_err(a, b) <= 1e-13);
    ComplexField lap{g, 4.0 * a.data};
    CHECK(rel_err(lap, laplacian(f)) <= 1e-12);
}

TEST_CASE("conjugation symmetry d(f) = conj(dbar(conj f)) on band-limited fields") {
    Grid g(64, 6.0);
    ComplexField f = nvtest::random_band_limited(g, 5);
    ComplexField lhs = d(f);
    ComplexField rhs = conj(dbar(conj(f)));
    CHECK(max_abs(lhs - rhs) <= 1e-12 * std::max(1.0, max_abs(lhs)));
}

TEST_CASE("cauchy_P is the exact discrete inverse of dbar") {
    Grid g(64, 6.0);
    SUBCASE("zero maps to zero") {
        ComplexField z(g);
        CHECK(max_abs(cauchy_P(z)) == 0.0);
    }
    SUBCASE("dbar(P f) = f - mean f, for all fields") {
        ComplexField f = nvtest::wavy_bump(g);
        ComplexField back = dbar(cauchy_P(f));
        ComplexField want{g, f.data - mean(f)};
        CHECK(l2_norm(back - want) <= 1e-10 * l2_norm(f));
        CHECK(std::abs(mean(cauchy_P(f))) <= 1e-13);
    }
    SUBCASE("P(dbar g) recovers compactly supported g up to its mean") {
        Grid gg(128, 8.0);
        ComplexField gfield = nvtest::gaussian(gg, {0.4, -0.3}, 1.1);
        ComplexField rec = cauchy_P(dbar(gfield));
        ComplexField want{gg, gfield.data - mean(gfield)};
        CHECK(rel_err(rec, want) <= 1e-8);
    }
}

TEST_CASE("cauchy_P matches the dense singular quadrature oracle") {
    // Brute-force quadrature of (1/π)∫ f(ζ)/(z−ζ) dA under the project's
    // periodic-extension convention: the kernel is summed over a window of
    // lattice images (the square lattice's symmetry cancels the conditionally
    // convergent shells, so a symmetric window converges fast). The singular
    // m=0 node integrates to ~0 over its own cell by symmetry and is dropped;
    // the comparison removes the zero mode, the declared cauchy_P convention.
    // The midpoint rule on the singular kernel carries an O(h²) error with a
    // fat constant (~6e-3·h²/0.25), so the 1e-2 comparison runs at n = 64.
    Grid g(64, 8.0);
    ComplexField f = make_field(g, [](cx z) {
        return std::exp(-std::norm(z - cx(1.4, 0.0)) / 2.0) -
               std::exp(-std::norm(z + cx(1.4, 0.0)) / 2.0);
    });
    const int window = 2;
    ComplexField oracle(g);
    const double w = g.h() * g.h() / M_PI;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const cx z = g.node(ix, iy);
            cx acc = 0.0;
            for (int jy = 0; jy < g.n; ++jy)
                for (int jx = 0; jx < g.n; ++jx) {
                    const cx base = z - g.node(jx, jy);
                    cx kernel = 0.0;
                    for (int my = -window; my <= window; ++my)
                        for (int mx = -window; mx <= window; ++mx) {
                            if (mx == 0 && my == 0 && jx == ix && jy == iy) continue;
                            kernel += 1.0 / (base + 2.0 * g.L * cx(mx, my));
                        }
                    acc += f.at(jx, jy) * kernel;
                }
            oracle.at(ix, iy) = w * acc;
        }
    oracle.data -= mean(oracle);  // compare under the zero-mode convention
    CHECK(rel_err(cauchy_P(f), oracle) <= 1e-2);
}

TEST_CASE("beurling transform") {
    Grid g(64, 6.0);
    SUBCASE("zero maps to zero") {
        CHECK(max_abs(beurling(ComplexField(g))) == 0.0);
    }
    SUBCASE("S(dbar g) = d g for smooth compactly supported g") {
        ComplexField gf = nvtest::gaussian(g, {0.2, 0.1}, 0.9);
        CHECK(rel_err(beurling(dbar(gf)), d(gf)) <= 1e-8);
    }
    SUBCASE("isometry on zero-mean fields") {
        ComplexField f = nvtest::random_band_limited(g, 17);
        f.data -= mean(f);
        const double ratio = l2_norm(beurling(f)) / l2_norm(f);
        CHECK(std::abs(ratio - 1.0) <= 1e-12);
    }
    SUBCASE("beurling_conj is the conjugate multiplier") {
        ComplexField f = nvtest::random_band_limited(g, 23);
        ComplexField lhs = beurling_conj(f);
        ComplexField rhs = conj(beurling(conj(f)));
        CHECK(max_abs(lhs - rhs) <= 1e-12 * std::max(1.0, max_abs(lhs)));
    }
}

TEST_CASE("ek_phase") {
    Grid g(48, 5.0);
    SUBCASE("k = 0 gives the constant 1") {
        ComplexField e0 = ek_phase(g, 0.0);
        CHECK(max_abs(e0 - make_field(g, [](cx) { return cx(1, 0); })) == 0.0);
    }
    SUBCASE("unimodular everywhere") {
        ComplexField e = ek_phase(g, {1.7, -2.3});
        double worst = 0.0;
        for (Eigen::Index i = 0; i < e.data.size(); ++i)
            worst = std::max(worst, std::abs(std::abs(e.data[i]) - 1.0));
        CHECK(worst <= 1e-15);
    }
    SUBCASE("e_{-k} = conj(e_k)") {
        const cx k{0.9, 1.4};
        ComplexField a = ek_phase(g, -k);
        ComplexField b = conj(ek_phase(g, k));
        CHECK(max_abs(a - b) == 0.0);
    }
}

TEST_CASE("norms") {
    Grid g(64, 6.0);
    SUBCASE("zero field has zero norm for all weights") {
        ComplexField z(g);
        for (int m = 0; m <= 2; ++m)
            for (int n = 0; n <= 2; ++n) CHECK(sobolev_norm(z, {m, n}) == 0.0);
        CHECK(lp_norm(z, 1) == 0.0);
        CHECK(lp_norm(z, std::numeric_limits<double>::infinity()) == 0.0);
    }
    SUBCASE("unit-mass gaussian L2 norm matches the closed form") {
        // ‖exp(−|z|²/w²)‖₂² = πw²/2; normalize to unit mass
        const double w = 1.3;
        const double nrm = std::sqrt(M_PI * w * w / 2.0);
        ComplexField f = make_field(g, [&](cx z) { return std::exp(-std::norm(z) / (w * w)) / nrm; });
        CHECK(std::abs(l2_norm(f) - 1.0) <= 1e-6);
    }
    SUBCASE("H^{0,0} equals L2 exactly") {
        ComplexField f = nvtest::wavy_bump(g);
        CHECK(sobolev_norm(f, {0, 0}) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
    }
    SUBCASE("monotone in both orders") {
        ComplexField f = nvtest::wavy_bump(g);
        double prev = 0.0;
        for (int m = 0; m <= 2; ++m) {
            const double v = sobolev_norm(f, {m, 0});
            CHECK(v >= prev);
            prev = v;
        }
        prev = 0.0;
        for (int n = 0; n <= 2; ++n) {
            const double v = sobolev_norm(f, {0, n});
            CHECK(v >= prev);
            prev = v;
        }
    }
    SUBCASE("weights outside {0,1,2} are rejected") {
        CHECK_THROWS_AS(SobolevWeights(3, 0), std::invalid_argument);
    }
}

TEST_CASE("product rule for the inverse dbar (eq-level identity, 256² grid)") {
    Grid g(256, 8.0);
    ComplexField F = nvtest::gaussian(g, {0.7, 0.2}, 1.0, cx(1.0, 0.4));
    ComplexField G = nvtest::gaussian(g, {-0.5, -0.4}, 1.2, cx(0.8, -0.3));
    ComplexField f = dbar(F);  // zero-mean by construction
    ComplexField gg = dbar(G);
    ComplexField Vf = cauchy_P(f);
    ComplexField Vg = cauchy_P(gg);
    ComplexField lhs = multiply_dealias(Vf, Vg);
    lhs.data -= mean(lhs);  // the identity holds modulo the P zero-mode convention
    ComplexField rhs = cauchy_P(multiply_dealias(f, Vg) + multiply_dealias(gg, Vf));
    CHECK(rel_err(lhs, rhs) <= 1e-4);
    // and well below the stated budget for this smooth pair
    CHECK(rel_err(lhs, rhs) <= 1e-6);
}

TEST_CASE("dealiased product agrees with the pointwise product on band-limited data") {
    Grid g(48, 5.0);
    // band-limited factors whose product still fits strictly inside the grid
    ComplexField a = nvtest::random_band_limited(g, 31);
    ComplexField b = nvtest::random_band_limited(g, 37);
    ComplexField plain = a * b;
    ComplexField deal = multiply_dealias(a, b);
    CHECK(rel_err(deal, plain) <= 1e-12);
}
