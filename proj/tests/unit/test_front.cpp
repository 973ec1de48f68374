#include <doctest.h>

#include <cmath>

#include "nlfront/bounds.hpp"
#include "nlfront/front.hpp"

using namespace nlfront;

namespace {

GridSpec grid(double lo, double hi, double step) { return GridSpec::over(lo, hi, step); }

Semiflow make_flow(const Measure& m, double alpha, const GridSpec& g, double dt = 0.05) {
    SemiflowConfig cfg;
    cfg.measure = m;
    cfg.reaction = ExtendedNonlinearity(Nonlinearity::cubic(1.0, alpha), 1.0);
    cfg.dt = dt;
    cfg.grid = g;
    cfg.projection_tol = 1e-6;
    return Semiflow(cfg);
}

Measure sym_atoms() { return Measure::atoms({{-1.0, 0.5}, {1.0, 0.5}}); }

}  // namespace

TEST_CASE("extend_nonlinearity: signs outside [0,1], agreement at the zeros") {
    auto f = Nonlinearity::cubic(1.0, 0.3);
    auto fhat = extend_nonlinearity(f, 2.0);
    CHECK(fhat(-0.5) == doctest::Approx(1.0));  // 0.5 * slope_out > 0
    CHECK(fhat(1.5) == doctest::Approx(-1.0));
    for (double u : {0.0, 0.3, 1.0}) CHECK(fhat(u) == doctest::Approx(f(u)));
    CHECK(fhat(0.7) == doctest::Approx(f(0.7)));
    CHECK(fhat.lipschitz() >= 2.0);
}

TEST_CASE("build_sub_super: lattice cubic at eps=0.05 verifies both residuals") {
    const double alpha = 0.3;
    auto g = grid(-80, 80, 0.25);
    auto fhat = ExtendedNonlinearity(Nonlinearity::cubic(1.0, alpha), 1.0);
    SubSuperOptions opts;
    opts.space_samples = 801;
    SubSuperPair pair = build_sub_super(fhat, Measure::point(1.0), 0.05, RampFn{}, g, opts);

    CHECK(pair.residual_lower >= 0.0);
    CHECK(pair.residual_upper >= 0.0);
    CHECK(pair.c_lower == doctest::Approx(-400.0));
    CHECK(pair.c_upper == doctest::Approx(400.0));
    CHECK(pair.delta > 0.0);
    CHECK(pair.C_const > 0.0);

    // formula endpoints: psi_lower(0) = 0, psi_lower(+inf) = 1 - (1-alpha)/4
    CHECK(pair.psi_lower(0.0) == doctest::Approx(0.0));
    CHECK(pair.psi_lower.right_tail() == doctest::Approx(1.0 - (1.0 - alpha) / 4.0));
    CHECK(pair.psi_lower.right_tail() > alpha);
    CHECK(pair.psi_upper(0.0) == doctest::Approx(1.0));
    CHECK(pair.psi_upper.left_tail() == doctest::Approx(alpha / 4.0));
    CHECK(pair.psi_upper.left_tail() < alpha);
}

TEST_CASE("build_sub_super: oversized eps is rejected with a suggestion") {
    auto g = grid(-40, 40, 0.25);
    auto fhat = ExtendedNonlinearity(Nonlinearity::cubic(1.0, 0.3), 1.0);
    CHECK_THROWS_WITH_AS(build_sub_super(fhat, Measure::point(1.0), 0.8, RampFn{}, g, {}),
                         doctest::Contains("epsilon too large"), SolverError);
    // auto-halving recovers
    SubSuperPair pair = build_sub_super_auto(fhat, Measure::point(1.0), 0.8, 6, g, {});
    CHECK(pair.residual_lower >= 0.0);
    CHECK(pair.epsilon < 0.8);
}

TEST_CASE("sub/super-solutions propagate no slower/faster than their speeds") {
    const double alpha = 0.3;
    const double eps = 0.1;
    auto g = grid(-120, 120, 0.25);
    auto fhat = ExtendedNonlinearity(Nonlinearity::cubic(1.0, alpha), 1.0);
    SubSuperPair pair = build_sub_super(fhat, sym_atoms(), eps, RampFn{}, g, {});
    Semiflow flow = make_flow(sym_atoms(), alpha, g);

    for (double t : {1.0, 2.0}) {
        Profile lo = flow.evolve(pair.psi_lower, t);
        // psi_lower(x) <= (Q^t psi_lower)(x - c_lower t)
        CHECK(order_violation(pair.psi_lower, translate(lo, pair.c_lower * t)) < 1e-8);
        Profile hi = flow.evolve(pair.psi_upper, t);
        CHECK(order_violation(translate(hi, pair.c_upper * t), pair.psi_upper) < 1e-8);
    }
}

TEST_CASE("perturbed_fixed_point: converged, monotone, sandwiched, full-range") {
    const double alpha = 0.3;
    const double eps = 0.1;  // bracket half-width s = 100
    auto g = grid(-200, 200, 0.25);
    auto fhat = ExtendedNonlinearity(Nonlinearity::cubic(1.0, alpha), 1.0);
    SubSuperPair pair = build_sub_super(fhat, sym_atoms(), eps, RampFn{}, g, {});
    Semiflow flow = make_flow(sym_atoms(), alpha, g);

    RecursionConfig rc;
    rc.n_list = {40};
    rc.fixpoint_tol = 1e-6;
    rc.max_iters = 200;

    FixedPointResult fp = perturbed_fixed_point(40, pair, rc, flow);
    CHECK(fp.residual < 1e-6);
    CHECK(fp.iterations >= 3);
    // increments recorded and eventually decreasing below tolerance
    CHECK(fp.increments.back() < 1e-6);
    // interior transition with limits 0 and 1
    CHECK(fp.phi.left_tail() == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(fp.phi.right_tail() == doctest::Approx(1.0).epsilon(1e-5));
    const double y = level_crossing(fp.phi, 0.5);
    CHECK(std::abs(y) < 40.0 + 100.0 + 10.0);
}

TEST_CASE("extract_front: orderings, recentring, invariances") {
    const double alpha = 0.3;
    const double eps = 0.1;
    auto g = grid(-200, 200, 0.25);
    auto fhat = ExtendedNonlinearity(Nonlinearity::cubic(1.0, alpha), 1.0);
    SubSuperPair pair = build_sub_super(fhat, sym_atoms(), eps, RampFn{}, g, {});
    Semiflow flow = make_flow(sym_atoms(), alpha, g);

    RecursionConfig rc;
    rc.n_list = {40, 80};
    rc.fixpoint_tol = 1e-6;
    rc.max_iters = 200;
    rc.xi_cauchy_tol = 1.0;  // two n values: no extrapolation control yet

    std::vector<FixedPointResult> fps;
    for (int n : rc.n_list) fps.push_back(perturbed_fixed_point(n, pair, rc, flow));

    ExtractResult ex = extract_front(fps, pair, rc, flow, {-15, 15});
    CHECK(ex.trace.rows.size() == 2);
    for (const auto& row : ex.trace.rows) CHECK(row.y <= row.z + g.step);
    CHECK(0.0 < ex.trace.level_lo);
    CHECK(ex.trace.level_lo < alpha);
    CHECK(alpha < ex.trace.level_hi);
    CHECK(ex.trace.level_hi < 1.0);

    // speed orderings from the rescaling limits
    CHECK(ex.trace.c_minus >= pair.c_lower - 1e-9);
    CHECK(ex.trace.c_minus <= pair.c_upper + 1e-9);
    CHECK(ex.trace.c_plus <= ex.trace.c_minus + 1.0);

    // recentring pins the low crossing of the minus branch at the origin
    CHECK(std::abs(ex.minus_branch.phi(0.0) - ex.trace.level_lo) <= g.step);
    CHECK(ex.minus_branch.limit_left == Equilibrium::zero);
    CHECK(ex.minus_branch.limit_right == Equilibrium::one);

    // pre-translating every fixed point leaves the extracted speeds unchanged
    std::vector<FixedPointResult> shifted = fps;
    for (auto& fp : shifted) fp.phi = translate(fp.phi, 7.25);
    ExtractResult ex2 = extract_front(shifted, pair, rc, flow, {-15, 15});
    CHECK(ex2.trace.c_minus == doctest::Approx(ex.trace.c_minus).epsilon(1e-10));
    CHECK(ex2.trace.c_plus == doctest::Approx(ex.trace.c_plus).epsilon(1e-10));
}

TEST_CASE("extract_front: non-Cauchy xi sequence reports 'increase n_list'") {
    const double alpha = 0.3;
    auto g = grid(-30, 30, 0.25);
    auto fhat = ExtendedNonlinearity(Nonlinearity::cubic(1.0, alpha), 1.0);
    SubSuperPair pair;
    pair.alpha = alpha;
    pair.c_lower = -10.0;
    pair.c_upper = 10.0;
    pair.psi_lower = Profile::sample(g, [&](double x) {
        return std::max(RampFn{}(0.3 * x) - (1.0 - alpha) / 4.0, 0.0);
    });
    pair.psi_upper = Profile::sample(g, [&](double x) {
        return std::min(RampFn{}(0.3 * x + 1.0) + alpha / 4.0, 1.0);
    });
    Semiflow flow = make_flow(sym_atoms(), alpha, g);

    RecursionConfig rc;
    rc.n_list = {10, 20, 40};
    rc.xi_cauchy_tol = 0.01;

    // synthetic fixed points whose crossings are wildly nonlinear in n
    std::vector<FixedPointResult> fps;
    int i = 0;
    for (int n : rc.n_list) {
        FixedPointResult fp;
        fp.n = n;
        const double at = (i % 2 == 0) ? -8.0 : 8.0;
        fp.phi = Profile::ramp(g, at - 1.0, at + 1.0);
        fps.push_back(fp);
        ++i;
    }
    CHECK_THROWS_WITH_AS(extract_front(fps, pair, rc, flow, {-5, 5}),
                         doctest::Contains("increase n_list"), SolverError);
}

TEST_CASE("classify_limits: full front, constant alpha, unsettled tail") {
    auto g = grid(-10, 10, 0.25);
    const double alpha = 0.3;
    auto lims = classify_limits(Profile::ramp(g, -1, 1), alpha, 0.05);
    CHECK(lims.first == Equilibrium::zero);
    CHECK(lims.second == Equilibrium::one);

    auto la = classify_limits(Profile::constant(g, alpha), alpha, 0.05);
    CHECK(la.first == Equilibrium::alpha);
    CHECK(la.second == Equilibrium::alpha);

    CHECK_THROWS_WITH_AS(classify_limits(Profile::constant(g, 0.15), alpha, 0.05),
                         doctest::Contains("not settled"), SolverError);
    CHECK(equilibrium_value(Equilibrium::alpha, alpha) == alpha);
}

TEST_CASE("measure_speed and refine_front: symmetric problem pins c near 0") {
    const double alpha = 0.5;
    auto g = grid(-40, 40, 0.125);
    Semiflow flow = make_flow(sym_atoms(), alpha, g);
    Profile u0 = Profile::ramp(g, -1.0, 1.0);

    SpeedMeasureOptions so;
    const double c = measure_speed(u0, 30.0, flow, alpha, so);
    CHECK(std::abs(c) < 5e-3);

    RefineOptions ro;
    ro.alpha = alpha;
    ro.residual_window = {-12, 12};
    FrontResult fr = refine_front(u0, flow, ro);
    CHECK(std::abs(fr.c) < 5e-3);
    CHECK(fr.residual < 1e-3);
    CHECK(fr.residual_2tau < 2e-3);
    CHECK(fr.limit_left == Equilibrium::zero);
    CHECK(fr.limit_right == Equilibrium::one);
}

TEST_CASE("measure_speed: speed sign flips with alpha across 1/2") {
    auto g = grid(-40, 40, 0.125);
    Profile u0 = Profile::ramp(g, -1.0, 1.0);
    const double c03 = measure_speed(u0, 30.0, make_flow(sym_atoms(), 0.3, g), 0.3, {});
    const double c07 = measure_speed(u0, 30.0, make_flow(sym_atoms(), 0.7, g), 0.7, {});
    CHECK(c03 > 0.01);
    CHECK(c07 < -0.01);
    CHECK(std::abs(c03 + c07) < 5e-3);
}

TEST_CASE("measure_speed: domain too small raises") {
    auto g = grid(-8, 8, 0.25);
    Semiflow flow = make_flow(sym_atoms(), 0.2, g);
    Profile u0 = Profile::ramp(g, -1.0, 1.0);
    SpeedMeasureOptions so;
    so.edge_margin = 6.0;
    CHECK_THROWS_WITH_AS(measure_speed(u0, 40.0, flow, 0.2, so),
                         doctest::Contains("domain too small"), SolverError);
}

TEST_CASE("monostable sub-fronts satisfy the exponential-moment bound") {
    const double alpha = 0.3;
    const Measure m = sym_atoms();
    auto g = grid(-60, 60, 0.25);

    for (auto side : {FrontSide::minus, FrontSide::plus}) {
        SubFrontResult sf = make_monostable_subfront(side, Nonlinearity::cubic(1.0, alpha), m,
                                                     g, 0.05, 40.0);
        // limits of the transformed profile
        CHECK(sf.phi.left_tail() == doctest::Approx(sf.limit_left).epsilon(1e-3));
        CHECK(sf.phi.right_tail() == doctest::Approx(sf.limit_right).epsilon(1e-3));
        for (double sigma : {0.05, 0.1}) {
            CHECK(check_subfront_speed_bound(sf.c, sf.limit_left, sf.limit_right, alpha, m,
                                             sigma, 1e-6));
        }
    }

    // gap positivity forbids a common speed: c_- < c_+ for the two sub-fronts
    SubFrontResult lo = make_monostable_subfront(FrontSide::minus,
                                                 Nonlinearity::cubic(1.0, alpha), m, g, 0.05, 40.0);
    SubFrontResult hi = make_monostable_subfront(FrontSide::plus,
                                                 Nonlinearity::cubic(1.0, alpha), m, g, 0.05, 40.0);
    CHECK(lo.c < hi.c);
}
