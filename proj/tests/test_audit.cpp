#include <cmath>

#include "doctest.h"
#include "gzk/audit.hpp"
#include "gzk/multipliers.hpp"
#include "gzk/norms.hpp"
#include "helpers.hpp"

using namespace gzk;

TEST_CASE("estimate parameter validation") {
    EstimateId id;
    id.kind = EstimateId::Kind::strichartz;
    id.gamma = 0.3;
    id.beta = 0.2;  // needs gamma < beta
    CHECK_THROWS_AS(id.validate(), std::invalid_argument);
    id.beta = 0.6;
    CHECK_NOTHROW(id.validate());

    id.kind = EstimateId::Kind::maximal;
    id.s = 0.9;
    CHECK_THROWS_AS(id.validate(), std::invalid_argument);
    id.s = 1.25;
    CHECK_NOTHROW(id.validate());

    id.kind = EstimateId::Kind::weighted_commutator;
    id.r = 1.2;
    CHECK_THROWS_AS(id.validate(), std::invalid_argument);
    id.r = 0.5;
    id.s = 0.8;  // needs s >= 2r
    CHECK_THROWS_AS(id.validate(), std::invalid_argument);
    id.s = 2.0;
    CHECK_NOTHROW(id.validate());

    // the maximal audit is stated for T < 1 only
    Ensemble ens;
    ens.count = 1;
    Grid3 g = make_grid(16, 30.0);
    EstimateId mx;
    mx.kind = EstimateId::Kind::maximal;
    CHECK_THROWS_AS(run_audit(mx, ens, g, 1.5), std::invalid_argument);
}

TEST_CASE("ensemble members are reproducible and normalized") {
    Grid3 g = make_grid(16, 30.0);
    Ensemble ens;
    ens.seed = 42;
    RealField a = ensemble_member(ens, 3, g);
    RealField b = ensemble_member(ens, 3, g);
    CHECK(test::l2_diff(a, b) == 0.0);
    RealField c = ensemble_member(ens, 4, g);
    CHECK(test::l2_diff(a, c) > 1e-3);
    CHECK(lebesgue_norm(a, 2.0) == doctest::Approx(1.0));

    Ensemble env = ens;
    env.generator = Ensemble::Generator::decaying_envelope;
    RealField d = ensemble_member(env, 0, g);
    CHECK(lebesgue_norm(d, 2.0) == doctest::Approx(1.0));
    // envelope suppresses the boundary
    double corner = std::abs(d.v[g.idx(0, 0, 0)]);
    CHECK(corner < 1e-4);
}

TEST_CASE("weighted commutator residual") {
    Grid3 g = make_grid(32, 30.0);
    Ensemble ens;
    ens.generator = Ensemble::Generator::decaying_envelope;
    RealField f = ensemble_member(ens, 0, g);

    SUBCASE("exact zero at t = 0") {
        CHECK(weighted_commutator_residual(f, 0.5, 0, 0.0, 2.0) < 1e-14);
    }
    SUBCASE("scale invariance of the normalized residual") {
        const double r1 = weighted_commutator_residual(f, 0.5, 0, 1.0, 2.0);
        RealField f2 = f;
        for (double& v : f2.v) v *= 2.0;
        const double r2 = weighted_commutator_residual(f2, 0.5, 0, 1.0, 2.0);
        CHECK(test::rel_diff(r1, r2) < 1e-10);
    }
    SUBCASE("bounded over times and members with max/min < 5") {
        double lo = 1e300, hi = 0.0;
        for (int i = 0; i < 3; ++i) {
            RealField m = ensemble_member(ens, i, g);
            for (double t : {0.5, 1.0, 2.0, 4.0}) {
                for (int axis : {0, 1}) {
                    const double r = weighted_commutator_residual(m, 0.5, axis, t, 2.0);
                    lo = std::min(lo, r);
                    hi = std::max(hi, r);
                }
            }
        }
        CHECK(hi / lo < 5.0);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(weighted_commutator_residual(f, 1.5, 0, 1.0, 3.0), std::invalid_argument);
        CHECK_THROWS_AS(weighted_commutator_residual(f, 0.5, 0, 1.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("weighted decay scaling") {
    Grid3 g = make_grid(64, 20.0);
    std::vector<double> ts;
    for (int i = 0; i < 7; ++i) ts.push_back(0.1 * std::pow(10.0, i / 6.0));

    SUBCASE("alpha = 0: bounded, mildly decaying after the growth factor") {
        DecayScaling sc = weighted_decay_scaling(1.0, {0, 0, 0}, ts, g);
        CHECK(sc.slope <= 0.05);
        CHECK(sc.slope >= -0.35);
        for (std::size_t i = 1; i < sc.values.size(); ++i)
            CHECK(sc.values[i] <= sc.values[i - 1] * (1.0 + 1e-9));
    }
    SUBCASE("|alpha| = 1 and 2 stay above the singular-power floor") {
        DecayScaling s1 = weighted_decay_scaling(1.0, {1, 0, 0}, ts, g);
        CHECK(s1.slope >= -0.5 - 0.15);
        DecayScaling s2 = weighted_decay_scaling(1.0, {2, 0, 0}, ts, g);
        CHECK(s2.slope >= -1.0 - 0.15);
        CHECK(s2.slope < s1.slope);  // more derivatives decay faster
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(weighted_decay_scaling(1.0, {1, 0, 0}, {0.5, 1.5}, g),
                        std::invalid_argument);  // t > 1
        CHECK_THROWS_AS(weighted_decay_scaling(1.3, {1, 0, 0}, ts, g),
                        std::invalid_argument);  // a sqrt(3) >= b
    }
}

TEST_CASE("gradient oscillation") {
    Grid3 g = make_grid(32, 16.0);
    SUBCASE("smooth gaussian scores O(delta), matching the derivative exactly") {
        RealField gauss(g);
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iy = 0; iy < g.ny1; ++iy)
                for (int iz = 0; iz < g.ny2; ++iz) {
                    const double x = g.x(ix), y1 = g.y1(iy), y2 = g.y2(iz);
                    gauss.v[g.idx(ix, iy, iz)] = std::exp(-(x * x + y1 * y1 + y2 * y2));
                }
        // d_x e^{-r^2} at (+-d,0,0) is -+2d e^{-d^2}: score 4d e^{-d^2}, and
        // the Taylor bound 4 d sup|f''| holds with sup|f''| = 2
        for (double delta : {1.0, 1.5, 2.0}) {
            const double score = gradient_oscillation(gauss, delta);
            CHECK(score == doctest::Approx(4.0 * delta * std::exp(-delta * delta)).epsilon(0.01));
            CHECK(score <= 4.0 * delta * 2.0);
        }
    }
    SUBCASE("linearity in the field") {
        RealField f = test::random_band_limited(g, 5);
        const double s1 = gradient_oscillation(f, 1.5);
        for (double& v : f.v) v *= 3.0;
        CHECK(gradient_oscillation(f, 1.5) == doctest::Approx(3.0 * s1).epsilon(1e-10));
    }
    SUBCASE("delta below resolution is rejected") {
        CHECK_THROWS_AS(gradient_oscillation(RealField(g), 0.5), std::invalid_argument);
    }
    SUBCASE("cusp score approaches the analytic value as the band widens") {
        // the detector sums a k^-3 tail, so the truncation bias shrinks like
        // 1/(k_max delta); at n = 384, L = 12, delta = 0.2 it is a few percent
        const double analytic = 4.0 * std::exp(-2.0 * 0.2);
        Grid3 g1 = make_grid(128, 12.0);
        Grid3 g2 = make_grid(256, 12.0);
        Grid3 g3 = make_grid(384, 12.0);
        const double s1 = gradient_oscillation(sample_profile(ProfileSpec{2.0}, g1).field, 0.2);
        const double s2 = gradient_oscillation(sample_profile(ProfileSpec{2.0}, g2).field, 0.2);
        const double s3 = gradient_oscillation(sample_profile(ProfileSpec{2.0}, g3).field, 0.2);
        CHECK(std::abs(s3 - analytic) < 0.10 * analytic);
        CHECK(std::abs(s2 - analytic) < std::abs(s1 - analytic));
        CHECK(std::abs(s3 - analytic) < std::abs(s2 - analytic));
    }
}

TEST_CASE("estimate ratios are scale invariant and finite") {
    Grid3 g = make_grid(16, 30.0);
    RealField f = test::random_band_limited(g, 11);
    for (auto kind : {EstimateId::Kind::kato_forward, EstimateId::Kind::maximal,
                      EstimateId::Kind::strichartz}) {
        EstimateId id;
        id.kind = kind;
        id.s = 1.25;
        id.gamma = 0.4;
        id.beta = 0.6;
        const double T = (kind == EstimateId::Kind::maximal) ? 0.5 : 1.0;
        const double r1 = estimate_ratio(id, f, T, 17);
        RealField f5 = f;
        for (double& v : f5.v) v *= 5.0;
        const double r5 = estimate_ratio(id, f5, T, 17);
        CHECK(std::isfinite(r1));
        CHECK(r1 > 0.0);
        CHECK(test::rel_diff(r1, r5) < 1e-10);
    }
}

TEST_CASE("run_audit aggregates and refines") {
    Grid3 g = make_grid(16, 30.0);
    Ensemble ens;
    ens.count = 3;
    EstimateId id;
    id.kind = EstimateId::Kind::kato_forward;
    AuditOptions opts;
    opts.time_samples = 17;
    AuditReport rep = run_audit(id, ens, g, 1.0, opts);
    CHECK(rep.ratios.size() == 3);
    CHECK(rep.sup_ratio > 0.0);
    double sup = 0.0;
    for (double r : rep.ratios) sup = std::max(sup, r);
    CHECK(rep.sup_ratio == doctest::Approx(sup));
    CHECK(rep.growth > 0.0);
    CHECK(rep.pass == (rep.growth < rep.growth_bound));
}

TEST_CASE("genericity audit") {
    Grid3 g = make_grid(16, 30.0);
    EstimateId id;
    id.kind = EstimateId::Kind::genericity;
    AuditReport rep = run_audit(id, Ensemble{}, g, 1.0);
    CHECK(rep.pass);
    for (double m : rep.ratios) CHECK(m > 0.0);
}

TEST_CASE("blowup sweep") {
    Grid3 g = make_grid(32, 30.0);
    const double delta = 4.0 * g.spacing_x();

    SUBCASE("single-term sweep reconstructs the scaled profile score") {
        BlowupSpec spec;
        spec.j_max = 1;
        spec.k_max = 1;
        SweepTable t = blowup_sweep(spec, g, {1.0}, delta, SweepSource{});
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0].is_armed_rational);
        // W(1)u0 = c11 phi on the truncated lattice: the score is exactly
        // c11 times the truncated profile's score
        SpectralField phi = forward_transform(sample_profile(spec.profile, g).field);
        SpectralField trunc = apply_propagator(apply_propagator(phi, -1.0), 1.0);
        const double expect = t.rows[0].coefficient * gradient_oscillation(trunc, delta);
        CHECK(t.rows[0].score == doctest::Approx(expect).epsilon(1e-9));
    }
    SUBCASE("armed flags follow the requested times") {
        BlowupSpec spec;  // default 5 terms
        SweepTable t = blowup_sweep(spec, g, {0.5, 0.75, 1.0}, delta, SweepSource{});
        CHECK(t.rows[0].is_armed_rational);
        CHECK_FALSE(t.rows[1].is_armed_rational);
        CHECK(t.rows[2].is_armed_rational);
        CHECK(t.armed.size() == 2);
    }
}

TEST_CASE("smoothing report") {
    SUBCASE("linear-only input is trivially smoothing") {
        SolverConfig cfg;
        cfg.linear_only = true;
        cfg.dt = 0.01;
        std::vector<Grid3> grids = {make_grid(16, 30.0), make_grid(32, 30.0)};
        SmoothingReport rep = smoothing_report(ProfileSpec{2.0}, cfg, 3.0, grids, 0.25);
        REQUIRE(rep.grids.size() == 2);
        CHECK(rep.duh_growth.front() == 0.0);
        CHECK(rep.grids[0].g_duh < 1e-12 * rep.grids[0].g_lin);
    }
    SUBCASE("k = 1 quick comparative check at small grids") {
        // full-size runs live in the acceptance suite; this only checks the
        // comparative machinery on the k = 1 flow at modest cost
        SolverConfig cfg;
        cfg.k = 1;
        cfg.dt = 0.01;
        std::vector<Grid3> grids = {make_grid(32, 20.0), make_grid(64, 20.0)};
        SmoothingReport rep = smoothing_report(ProfileSpec{2.0}, cfg, 2.75, grids, 0.25);
        CHECK(rep.comparative);
        CHECK(rep.lin_growth.front() > 1.0);
        CHECK(rep.duh_growth.front() > 0.0);
        CHECK(rep.smoothing == (rep.duh_growth.front() <= rep.lin_growth.front()));
    }
}
