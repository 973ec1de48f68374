#include <doctest.h>

#include <cmath>
#include <random>

#include "nlfront/measure.hpp"

using namespace nlfront;

namespace {
GridSpec grid(double lo, double hi, double step) { return GridSpec::over(lo, hi, step); }
}

TEST_CASE("total_mass: atoms, mixtures, empty") {
    CHECK(total_mass(Measure::point(1.0)) == doctest::Approx(1.0));
    // 0.3 delta_0 + 0.7 uniform[0,1]
    PiecewiseLinearDensity d = Measure::uniform(0.0, 1.0, 0.25).density();
    for (auto& v : d.values) v *= 0.7;
    Measure m({{0.0, 0.3}}, d);
    CHECK(total_mass(m) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(total_mass(Measure({}, {})) == 0.0);
}

TEST_CASE("convolve: identity, lattice shift, two-point average of a step") {
    auto g = grid(-10, 10, 0.25);
    Profile u = Profile::ramp(g, -1.0, 1.0);

    CHECK(sup_dist(convolve(Measure::point(0.0), u), u) == 0.0);

    // delta_1 realizes the lattice term u(x-1)
    Profile v = convolve(Measure::point(1.0), u);
    CHECK(sup_dist(v, resample(translate(u, 1.0), g), {-8, 8}) == 0.0);

    Profile step = Profile::ramp(g, -0.125, 0.125);
    Measure two = Measure::atoms({{-1.0, 0.5}, {1.0, 0.5}});
    Profile avg = convolve(two, step);
    CHECK(avg(-2.0) == doctest::Approx(0.0));
    CHECK(avg(0.0) == doctest::Approx(0.5));
    CHECK(avg(0.5) == doctest::Approx(0.5));
    CHECK(avg(2.0) == doctest::Approx(1.0));
}

TEST_CASE("convolve: order preservation and translation commutation") {
    auto g = grid(-10, 10, 0.25);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // 0.5 delta_1 + 0.5 uniform[-1/2,1/2]
    PiecewiseLinearDensity d = Measure::uniform(-0.5, 0.5, 0.25).density();
    for (auto& v : d.values) v *= 0.5;
    Measure m({{1.0, 0.5}}, d);
    CHECK(total_mass(m) == doctest::Approx(1.0));

    for (int t = 0; t < 10; ++t) {
        std::vector<double> a(g.points), b(g.points);
        double xa = 0, xb = 0;
        for (std::size_t i = 0; i < g.points; ++i) {
            xa += unif(rng) * 0.1;
            xb = std::max(xb + unif(rng) * 0.1, xa);
            a[i] = xa;
            b[i] = xb;
        }
        const double norm = std::max(b.back(), 1e-9);
        for (std::size_t i = 0; i < g.points; ++i) {
            a[i] /= norm;
            b[i] /= norm;
        }
        Profile u1 = Profile::projected(g, a, 0, 1);
        Profile u2 = Profile::projected(g, b, 0, 1);
        CHECK(leq(convolve(m, u1), convolve(m, u2), 1e-12));

        const double h = 0.5;  // grid-aligned
        Profile lhs = convolve(m, resample(translate(u1, h), g));
        Profile rhs = resample(translate(convolve(m, u1), h), g);
        CHECK(sup_dist(lhs, rhs, {-6, 6}) <= 1e-14);
    }
}

TEST_CASE("exp_moment: atom, lam=0, uniform closed form") {
    CHECK(exp_moment(Measure::point(-1.0), 2.0) == doctest::Approx(std::exp(-2.0)));
    Measure m({{0.5, 0.25}}, Measure::uniform(0.0, 1.0, 0.125).density());
    CHECK(exp_moment(m, 0.0) == doctest::Approx(total_mass(m)).epsilon(1e-13));
    // closed-form oracle for the uniform density: (e^lam - 1)/lam
    Measure u01 = Measure::uniform(0.0, 1.0, 0.125);
    for (double lam : {1.0, -0.7, 0.3}) {
        const double oracle = (std::exp(lam) - 1.0) / lam;
        CHECK(exp_moment(u01, lam) == doctest::Approx(oracle).epsilon(1e-10));
    }
    CHECK(exp_moment(u01, 1.0) == doctest::Approx(1.718281828).epsilon(1e-8));
}

TEST_CASE("exp_moment is convex in lambda") {
    Measure m({{-1.0, 0.25}, {1.0, 0.25}}, Measure::uniform(-0.5, 0.5, 0.125).density());
    PiecewiseLinearDensity d = m.density();
    for (auto& v : d.values) v *= 0.5;
    m = Measure(m.atom_list(), d);
    for (double l1 : {-2.0, -0.5, 0.1, 1.0})
        for (double gap : {0.4, 1.0}) {
            const double l2 = l1 + gap;
            const double mid = exp_moment(m, 0.5 * (l1 + l2));
            const double avg = 0.5 * (exp_moment(m, l1) + exp_moment(m, l2));
            CHECK(mid <= avg + 1e-12);
        }
}

TEST_CASE("reflect: atoms, symmetric fixed point, MGF mirror") {
    Measure d = Measure::point(2.0, 0.7);
    Measure r = reflect(d);
    CHECK(r.atom_list()[0].loc == doctest::Approx(-2.0));
    CHECK(total_mass(r) == doctest::Approx(0.7));

    Measure sym = Measure::atoms({{-1.0, 0.5}, {1.0, 0.5}});
    Measure rsym = reflect(sym);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(rsym.atom_list()[i].loc == doctest::Approx(sym.atom_list()[i].loc));
        CHECK(rsym.atom_list()[i].mass == doctest::Approx(sym.atom_list()[i].mass));
    }

    Measure mixed({{0.5, 0.4}}, Measure::uniform(0.0, 1.0, 0.125).density());
    PiecewiseLinearDensity dd = mixed.density();
    for (auto& v : dd.values) v *= 0.6;
    mixed = Measure({{0.5, 0.4}}, dd);
    for (double lam : {-1.0, -0.2, 0.6, 1.3})
        CHECK(exp_moment(reflect(mixed), lam) ==
              doctest::Approx(exp_moment(mixed, -lam)).epsilon(1e-11));
}

TEST_CASE("convolve_measures: atom algebra, identity, Fubini mass") {
    Measure ab = convolve_measures(Measure::point(1.5, 2.0), Measure::point(-0.5, 3.0));
    REQUIRE(ab.atom_list().size() == 1);
    CHECK(ab.atom_list()[0].loc == doctest::Approx(1.0));
    CHECK(ab.atom_list()[0].mass == doctest::Approx(6.0));

    Measure mixed({{1.0, 0.5}}, Measure::uniform(-0.5, 0.5, 0.125).density());
    PiecewiseLinearDensity dd = mixed.density();
    for (auto& v : dd.values) v *= 0.5;
    mixed = Measure({{1.0, 0.5}}, dd);
    Measure idc = convolve_measures(Measure::point(0.0), mixed);
    CHECK(total_mass(idc) == doctest::Approx(total_mass(mixed)).epsilon(1e-12));
    for (double lam : {-0.5, 0.5})
        CHECK(exp_moment(idc, lam) == doctest::Approx(exp_moment(mixed, lam)).epsilon(1e-9));

    Measure m1({{0.3, 0.4}}, Measure::uniform(0.0, 1.0, 0.1).density());
    PiecewiseLinearDensity d1 = m1.density();
    for (auto& v : d1.values) v *= 0.8;
    m1 = Measure({{0.3, 0.4}}, d1);
    Measure m2 = Measure::uniform(-1.0, 0.0, 0.1);
    Measure prod = convolve_measures(m1, m2);
    CHECK(total_mass(prod) ==
          doctest::Approx(total_mass(m1) * total_mass(m2)).epsilon(1e-10));

    ConvolveMeasureOptions opts;
    opts.max_support_radius = 0.5;
    CHECK_THROWS_AS(convolve_measures(m1, m2, opts), SolverError);
}

TEST_CASE("convolve_measures: uniform*uniform equals the triangle density") {
    Measure u = Measure::uniform(0.0, 1.0, 0.125);
    Measure tri = convolve_measures(u, u);
    CHECK(tri.atom_list().empty());
    // oracle: the triangle with peak 1 at x = 1
    for (double x : {0.125, 0.5, 1.0, 1.6, 1.875})
        CHECK(tri.density()(x) == doctest::Approx(1.0 - std::abs(x - 1.0)).epsilon(1e-10));
}

TEST_CASE("exp_series: scalar case, mass exponential, lattice factorials") {
    // m delta_0: single atom at 0 with mass sum 1/k! = e
    Measure nu0 = exp_series(Measure::point(0.0, 1.0), 16);
    REQUIRE(nu0.atom_list().size() == 1);
    CHECK(nu0.atom_list()[0].mass == doctest::Approx(std::exp(1.0)).epsilon(1e-8));

    // total mass is e^{mass(mhat)}
    Measure half = Measure::point(1.0, 0.5);
    CHECK(total_mass(exp_series(half, 30)) == doctest::Approx(std::exp(0.5)).epsilon(1e-8));
    Measure u01 = Measure::uniform(0.0, 1.0, 0.0625);
    CHECK(total_mass(exp_series(u01, 30)) == doctest::Approx(std::exp(1.0)).epsilon(1e-8));

    // delta_1 powers: atom at k has mass 1/k!
    Measure nu = exp_series(Measure::point(1.0), 30);
    bool found2 = false;
    for (const auto& a : nu.atom_list())
        if (std::abs(a.loc - 2.0) < 1e-9) {
            CHECK(a.mass == doctest::Approx(0.5).epsilon(1e-12));
            found2 = true;
        }
    CHECK(found2);
}

TEST_CASE("exp_series monotone in K: increment mass nonnegative and decreasing") {
    Measure mhat = Measure::atoms({{-1.0, 0.5}, {1.0, 0.5}});
    double prev_inc = 1e300;
    double prev_mass = total_mass(exp_series(mhat, 4));
    for (int K = 5; K <= 10; ++K) {
        const double mass = total_mass(exp_series(mhat, K));
        const double inc = mass - prev_mass;  // total variation of the added term
        CHECK(inc >= 0.0);
        CHECK(inc <= prev_inc + 1e-15);
        prev_inc = inc;
        prev_mass = mass;
    }
}

TEST_CASE("choose_series_order: factorial decay keeps K modest") {
    CHECK(choose_series_order(Measure::point(1.0)) <= 40);
    CHECK(choose_series_order(Measure::point(1.0)) >= 10);
    CHECK(choose_series_order(Measure::point(0.0, 2.0), 1e-14, 64) <= 50);
}

TEST_CASE("verify_mgf_identity: scalar exact, lattice series oracle") {
    std::vector<double> lams{-1.0, 0.0, 1.0};
    CHECK(verify_mgf_identity(Measure::point(0.0, 1.0), lams, 30) < 1e-12);

    // scalar series oracle: log sum e^{lam k}/k! = e^{lam}
    CHECK(verify_mgf_identity(Measure::point(1.0), lams, 30) < 1e-9);

    // truncation guard: K too small for the requested lambda must throw
    std::vector<double> big{3.0};
    CHECK_THROWS_AS(verify_mgf_identity(Measure::point(1.0), big, 8), SolverError);
}

TEST_CASE("verify_mgf_identity: uniform density at fine resolution") {
    Measure u = Measure::uniform(0.0, 1.0, 1.0 / 400.0);
    std::vector<double> lams{-1.0, -0.5, 0.0, 0.5, 1.0};
    CHECK(verify_mgf_identity(u, lams, 40) < 1e-6);
}

TEST_CASE("atom snapping is reported") {
    auto g = grid(-5, 5, 0.25);
    Profile u = Profile::ramp(g, -1, 1);
    double rounding = 0.0;
    convolve(Measure::point(0.3), u, &rounding);
    CHECK(rounding == doctest::Approx(0.05));
}
