#include <cmath>

#include "doctest.h"
#include "gzk/blowup.hpp"
#include "gzk/multipliers.hpp"
#include "gzk/norms.hpp"
#include "helpers.hpp"

using namespace gzk;

TEST_CASE("dispersion symbol values and oddness") {
    CHECK(dispersion_symbol({1, 0, 0}) == doctest::Approx(1.0));
    CHECK(dispersion_symbol({2, 1, 1}) == doctest::Approx(12.0));
    CHECK(dispersion_symbol({0, 3.7, -1.2}) == doctest::Approx(0.0));
    const Mode m{0.7, -1.3, 2.1};
    CHECK(dispersion_symbol({-m.xi, -m.eta1, -m.eta2}) == doctest::Approx(-dispersion_symbol(m)));
}

TEST_CASE("propagator: identity at t = 0, phase on a single mode") {
    Grid3 g = make_grid(16, 2.0 * M_PI);  // L = 2 pi, so xi(m) = m
    SpectralField F(g);
    F.c[g.idx(1, 0, 0)] = cplx(1.0, 0.0);
    F.c[g.idx(g.nx - 1, 0, 0)] = cplx(1.0, 0.0);

    SpectralField id = apply_propagator(F, 0.0);
    CHECK(test::l2_diff(id, F) == doctest::Approx(0.0));

    // mode (1,0,0) has omega = 1; t = pi multiplies by e^{i pi} = -1
    SpectralField Fp = apply_propagator(F, M_PI);
    CHECK(std::abs(Fp.c[g.idx(1, 0, 0)] - cplx(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(Fp.c[g.idx(g.nx - 1, 0, 0)] - cplx(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("propagator is unitary on band-limited fields") {
    Grid3 g = make_grid(16, 21.0);
    RealField f = test::random_band_limited(g, 5);
    SpectralField F = forward_transform(f);
    for (double t : {0.3, -1.7, 8.9}) {
        SpectralField Ft = apply_propagator(F, t);
        CHECK(test::rel_diff(test::l2(Ft), test::l2(F)) < 1e-12);
    }
}

TEST_CASE("propagator group law") {
    Grid3 g = make_grid(12, 18.0);
    SpectralField F = forward_transform(test::random_band_limited(g, 9));
    const double s = 0.37, t = 1.21;
    SpectralField two = apply_propagator(apply_propagator(F, s), t);
    SpectralField one = apply_propagator(F, s + t);
    CHECK(test::l2_diff(two, one) < 1e-10 * test::l2(F));
}

TEST_CASE("propagator keeps real fields real") {
    Grid3 g = make_grid(16, 21.0);
    RealField f = test::random_band_limited(g, 23);
    SpectralField Ft = apply_propagator(forward_transform(f), 0.83);
    Ft.real_rep = false;  // force the measuring path
    double residue = 1.0;
    inverse_transform_complex(Ft, residue);
    CHECK(residue < 1e-12);
}

TEST_CASE("weighted symbol: re-derived coefficients vs the a = 1 display") {
    // independent evaluation of the a = 1 exponent as displayed for the
    // conjugated equation: i xi (xi^2+|eta|^2) - (xi^2+|eta|^2)
    //   - 2 xi (xi+eta1+eta2) - i (5 xi + 2 eta1 + 2 eta2) + 3
    auto display = [](const Mode& m) {
        const double q = m.xi * m.xi + m.eta1 * m.eta1 + m.eta2 * m.eta2;
        return cplx(-q - 2.0 * m.xi * (m.xi + m.eta1 + m.eta2) + 3.0,
                    m.xi * q - (5.0 * m.xi + 2.0 * m.eta1 + 2.0 * m.eta2));
    };
    const WeightRate one{1.0};
    for (const Mode& m : {Mode{0, 0, 0}, Mode{1, 0, 0}, Mode{0.3, -1.1, 2.0}, Mode{-2, 5, -7}}) {
        const cplx got = weighted_propagator_symbol(m, one);
        const cplx want = display(m);
        CHECK(std::abs(got - want) < 1e-12 * std::max(1.0, std::abs(want)));
    }
    // spec points
    CHECK(weighted_propagator_symbol({0, 0, 0}, one) == cplx(3.0, 0.0));
    CHECK(weighted_propagator_symbol({1, 0, 0}, one).real() == doctest::Approx(0.0));
    CHECK(weighted_propagator_symbol({1, 0, 0}, one).imag() == doctest::Approx(-4.0));
}

TEST_CASE("weighted symbol real part is at most 3a^3, equality only at the origin") {
    for (double a : {0.5, 1.0, 1.7}) {
        const WeightRate w{a};
        const double cap = 3.0 * a * a * a;
        CHECK(weighted_propagator_symbol({0, 0, 0}, w).real() == doctest::Approx(cap));
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> uni(-5.0, 5.0);
        for (int i = 0; i < 200; ++i) {
            Mode m{uni(rng), uni(rng), uni(rng)};
            CHECK(weighted_propagator_symbol(m, w).real() < cap + 1e-12);
        }
    }
}

TEST_CASE("weighted propagator: identity at 0, growth bound, t<0 rejected") {
    Grid3 g = make_grid(12, 15.0);
    SpectralField W0 = forward_transform(test::random_field(g, 31));
    SpectralField id = apply_weighted_propagator(W0, 0.0, WeightRate{1.0});
    CHECK(test::l2_diff(id, W0) == doctest::Approx(0.0));

    for (double a : {0.5, 1.0}) {
        for (double t : {0.1, 0.5, 1.0}) {
            SpectralField Wt = apply_weighted_propagator(W0, t, WeightRate{a});
            CHECK(test::l2(Wt) <= std::exp(3.0 * a * a * a * t) * test::l2(W0) * (1.0 + 1e-12));
        }
    }
    CHECK_THROWS_AS(apply_weighted_propagator(W0, -0.5, WeightRate{1.0}), std::invalid_argument);
}

namespace {

// worst relative gap between e^{x+y1+y2} W(t)f (physical weighting of the
// free flow) and the conjugated evolution of e^{x+y1+y2} f, over interior
// points where the weighted field is at least floor * its max and the weight
// amplification stays below e^{sum_cap}
double weighted_consistency_gap(const gzk::RealField& f, double t, double floor,
                                double sum_cap, int* compared = nullptr) {
    using namespace gzk;
    const Grid3& g = f.grid;
    RealField w0 = f;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny1; ++iy)
            for (int iz = 0; iz < g.ny2; ++iz)
                w0.v[g.idx(ix, iy, iz)] *= std::exp(g.x(ix) + g.y1(iy) + g.y2(iz));
    RealField lin = inverse_transform(apply_propagator(forward_transform(f), t));
    double residue = 0.0;
    RealField conj_flow = inverse_transform_complex(
        apply_weighted_propagator(forward_transform(w0), t, WeightRate{1.0}), residue);

    double scale = 0.0;
    for (double v : conj_flow.v) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    int count = 0;
    const int margin = int(5.0 / g.spacing_x()) + 1;
    for (int ix = margin; ix < g.nx - margin; ++ix) {
        const double x = g.x(ix);
        for (int iy = margin; iy < g.ny1 - margin; ++iy) {
            const double y1 = g.y1(iy);
            for (int iz = margin; iz < g.ny2 - margin; ++iz) {
                const double y2 = g.y2(iz);
                const double conj = conj_flow.v[g.idx(ix, iy, iz)];
                if (std::abs(conj) < floor * scale || x + y1 + y2 > sum_cap) continue;
                const double direct = std::exp(x + y1 + y2) * lin.v[g.idx(ix, iy, iz)];
                worst = std::max(worst, std::abs(direct - conj) / std::abs(conj));
                ++count;
            }
        }
    }
    if (compared) *compared = count;
    return worst;
}

}  // namespace

TEST_CASE("weighted consistency: physical weighting of W(t)f matches the conjugated flow") {
    Grid3 g = make_grid(64, 20.0);

    SUBCASE("fully resolved gaussian data") {
        RealField gauss(g);
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iy = 0; iy < g.ny1; ++iy)
                for (int iz = 0; iz < g.ny2; ++iz) {
                    const double x = g.x(ix), y1 = g.y1(iy), y2 = g.y2(iz);
                    gauss.v[g.idx(ix, iy, iz)] = std::exp(-(x * x + y1 * y1 + y2 * y2) / 4.0);
                }
        int compared = 0;
        const double gap = weighted_consistency_gap(gauss, 0.05, 1e-2, 8.0, &compared);
        CHECK(compared > 100);
        CHECK(gap < 1e-6);  // measured ~5e-10: the symbol derivation is exact
    }

    SUBCASE("cusp profile, strong-field core") {
        // the cusp's band-edge content disperses at group speed ~3 k_max^2 and
        // wraps around the box; the weight amplifies that ringing wherever
        // x+y1+y2 is large, so the identity is observable only on the core
        RealField phi = sample_profile(ProfileSpec{2.0}, g).field;
        int compared = 0;
        const double gap = weighted_consistency_gap(phi, 0.05, 0.2, 3.0, &compared);
        CHECK(compared > 20);
        CHECK(gap < 3e-2);
    }
}

TEST_CASE("fractional operators") {
    Grid3 g = make_grid(16, 13.0);

    SUBCASE("J^0 is the identity; D^0 fixes mean-zero fields") {
        SpectralField F = forward_transform(test::random_field(g, 41));
        SpectralField J0 = apply_fractional(F, Op::j, 0.0);
        CHECK(test::l2_diff(J0, F) == doctest::Approx(0.0));
        SpectralField Fz = F;
        Fz.c[g.idx(0, 0, 0)] = 0.0;
        SpectralField D0 = apply_fractional(Fz, Op::d, 0.0);
        CHECK(test::l2_diff(D0, Fz) == doctest::Approx(0.0));
    }

    SUBCASE("d/dx on a plane wave") {
        RealField f(g);
        const double k = 2.0 * M_PI / g.box_len;
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iy = 0; iy < g.ny1; ++iy)
                for (int iz = 0; iz < g.ny2; ++iz)
                    f.v[g.idx(ix, iy, iz)] = std::cos(k * g.x(ix));
        RealField fx = inverse_transform(apply_fractional(forward_transform(f), Op::ddx, 1.0));
        double worst = 0.0;
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iy = 0; iy < g.ny1; ++iy)
                for (int iz = 0; iz < g.ny2; ++iz)
                    worst = std::max(worst, std::abs(fx.v[g.idx(ix, iy, iz)] +
                                                     k * std::sin(k * g.x(ix))));
        CHECK(worst < 1e-12 * k);
    }

    SUBCASE("single-axis inhomogeneous symbols") {
        SpectralField F(g);
        F.c[g.idx(2, 3, 0)] = cplx(1.0, 0.0);
        const double xi = g.xi(2), e1 = g.eta1(3);
        const double s = 1.4;
        CHECK(std::abs(apply_fractional(F, Op::jx, s).c[g.idx(2, 3, 0)] -
                       std::pow(1.0 + xi * xi, 0.5 * s)) < 1e-14);
        CHECK(std::abs(apply_fractional(F, Op::jy, s).c[g.idx(2, 3, 0)] -
                       std::pow(1.0 + e1 * e1, 0.5 * s)) < 1e-14);
        CHECK(std::abs(apply_fractional(F, Op::dy1, s).c[g.idx(2, 3, 0)] -
                       std::pow(std::abs(e1), s)) < 1e-14);
    }

    SUBCASE("negative-s homogeneous symbol zeroes singular modes and flags") {
        SpectralField F = forward_transform(test::random_field(g, 43));
        bool flagged = false;
        SpectralField D = apply_fractional(F, Op::d, -1.0, &flagged);
        CHECK(flagged);
        CHECK(std::abs(D.c[g.idx(0, 0, 0)]) == 0.0);
    }

    SUBCASE("J^s via apply_fractional agrees with sobolev_norm") {
        RealField f = test::random_field(g, 47);
        const double s = 1.7;
        SpectralField Js = apply_fractional(forward_transform(f), Op::j, s);
        const double via_op = test::l2(Js);
        const double via_norm = sobolev_norm(f, SobolevSpec{s, SobolevVariant::j});
        CHECK(test::rel_diff(via_op, via_norm) < 1e-12);
    }

    SUBCASE("derivatives keep real fields real") {
        RealField f = test::random_field(g, 53);
        for (Op op : {Op::ddx, Op::ddy1, Op::ddy2, Op::d, Op::j}) {
            SpectralField D = apply_fractional(forward_transform(f), op, op == Op::j ? 1.3 : 1.0);
            D.real_rep = false;
            double residue = 1.0;
            inverse_transform_complex(D, residue);
            CHECK(residue < 1e-12);
        }
    }
}
