#include "nlfront/semiflow.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nlfront {

Semiflow::Semiflow(const SemiflowConfig& cfg)
    : Semiflow(cfg.measure, [f = cfg.reaction](double u) { return f(u); },
               cfg.reaction.lipschitz(), cfg.dt, cfg.grid, cfg.projection_tol) {}

Semiflow::Semiflow(Measure measure, std::function<double(double)> reaction,
                   double reaction_lipschitz, double dt, GridSpec grid, double projection_tol)
    : grid_(grid), conv_(measure, grid.step), f_(std::move(reaction)), dt_(dt),
      projection_tol_(projection_tol) {
    if (!(dt_ > 0.0)) throw ValidationError("semiflow: dt must be positive");
    if (!(dt_ * (1.0 + reaction_lipschitz) < 1.0))
        throw ValidationError("semiflow: stability budget dt*(1 + Lipschitz) < 1 violated");
    if (grid_.points < 4) throw ValidationError("semiflow: grid too small");
}

Field Semiflow::rhs(const Profile& u) const {
    Field g;
    g.grid = grid_;
    g.values.resize(grid_.points);
    conv_.apply(u.values(), u.left_tail(), u.right_tail(), g.values);
    for (std::size_t i = 0; i < grid_.points; ++i)
        g.values[i] += -u.values()[i] + f_(u.values()[i]);
    g.left_tail = conv_.mass() * u.left_tail() - u.left_tail() + f_(u.left_tail());
    g.right_tail = conv_.mass() * u.right_tail() - u.right_tail() + f_(u.right_tail());
    return g;
}

namespace {

struct State {
    std::vector<double> v;
    double lt = 0.0, rt = 0.0;
};

}  // namespace

Profile Semiflow::step_of_size(const Profile& u, double h, EvolveStats* stats) const {
    if (u.grid().points != grid_.points || std::abs(u.grid().x_min - grid_.x_min) > 1e-12 ||
        std::abs(u.grid().step - grid_.step) > 1e-15)
        throw ValidationError("semiflow: profile grid does not match the flow grid "
                              "(resample first)");
    const std::size_t n = grid_.points;
    const double mass = conv_.mass();

    auto eval_rhs = [&](const State& s, State& out) {
        out.v.resize(n);
        conv_.apply(s.v, s.lt, s.rt, out.v);
        for (std::size_t i = 0; i < n; ++i) out.v[i] += -s.v[i] + f_(s.v[i]);
        out.lt = mass * s.lt - s.lt + f_(s.lt);
        out.rt = mass * s.rt - s.rt + f_(s.rt);
    };
    auto axpy = [&](const State& s, double a, const State& k, State& out) {
        out.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.v[i] = s.v[i] + a * k.v[i];
        out.lt = s.lt + a * k.lt;
        out.rt = s.rt + a * k.rt;
    };

    State s{u.values(), u.left_tail(), u.right_tail()};
    State k1, k2, k3, k4, tmp;
    eval_rhs(s, k1);
    axpy(s, 0.5 * h, k1, tmp);
    eval_rhs(tmp, k2);
    axpy(s, 0.5 * h, k2, tmp);
    eval_rhs(tmp, k3);
    axpy(s, h, k3, tmp);
    eval_rhs(tmp, k4);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = s.v[i] + h / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
    double lt = s.lt + h / 6.0 * (k1.lt + 2.0 * k2.lt + 2.0 * k3.lt + k4.lt);
    double rt = s.rt + h / 6.0 * (k1.rt + 2.0 * k2.rt + 2.0 * k3.rt + k4.rt);
    lt = std::clamp(lt, 0.0, 1.0);
    rt = std::clamp(rt, 0.0, 1.0);

    double correction = 0.0;
    Profile result = Profile::projected(grid_, std::move(out), lt, rt, &correction);
    if (stats) {
        stats->projection_correction += correction;
        stats->steps += 1;
    }
    if (correction > projection_tol_)
        throw SolverError("semiflow step: comparison principle violated numerically "
                          "(projection correction " +
                          std::to_string(correction) + ")");
    return result;
}

Profile Semiflow::step(const Profile& u, EvolveStats* stats) const {
    return step_of_size(u, dt_, stats);
}

Profile Semiflow::evolve(const Profile& u, double t, EvolveStats* stats) const {
    if (t < 0.0) throw ValidationError("evolve: t must be nonnegative");
    Profile cur = u;
    const auto full = long(std::floor(t / dt_ + 1e-12));
    for (long k = 0; k < full; ++k) cur = step_of_size(cur, dt_, stats);
    const double rem = t - double(full) * dt_;
    if (rem > 1e-12) cur = step_of_size(cur, rem, stats);
    return cur;
}

Field evolve_linear(const Field& v0, const Measure& mhat, double t, double dt) {
    if (t < 0.0 || !(dt > 0.0)) throw ValidationError("evolve_linear: need t >= 0 and dt > 0");
    const double mass = total_mass(mhat);
    ConvolutionOperator conv(mhat, v0.grid.step);
    const std::size_t n = v0.grid.points;

    struct S {
        std::vector<double> v;
        double lt, rt;
    };
    auto rhs = [&](const S& s, S& out) {
        out.v.resize(n);
        conv.apply(s.v, s.lt, s.rt, out.v);
        out.lt = mass * s.lt;
        out.rt = mass * s.rt;
    };
    auto axpy = [&](const S& s, double a, const S& k, S& out) {
        out.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.v[i] = s.v[i] + a * k.v[i];
        out.lt = s.lt + a * k.lt;
        out.rt = s.rt + a * k.rt;
    };

    S s{v0.values, v0.left_tail, v0.right_tail};
    S k1, k2, k3, k4, tmp;
    double remaining = t;
    while (remaining > 1e-12) {
        const double h = std::min(dt, remaining);
        rhs(s, k1);
        axpy(s, 0.5 * h, k1, tmp);
        rhs(tmp, k2);
        axpy(s, 0.5 * h, k2, tmp);
        rhs(tmp, k3);
        axpy(s, h, k3, tmp);
        rhs(tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            s.v[i] += h / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
        s.lt += h / 6.0 * (k1.lt + 2.0 * k2.lt + 2.0 * k3.lt + k4.lt);
        s.rt += h / 6.0 * (k1.rt + 2.0 * k2.rt + 2.0 * k3.rt + k4.rt);
        remaining -= h;
    }
    return Field{v0.grid, std::move(s.v), s.lt, s.rt};
}

namespace {

Profile random_profile(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // random plateau/ramp mix: cumulative nonnegative increments, then
    // normalized into a random sub-interval of [0,1]
    std::vector<double> v(g.points, 0.0);
    const int pieces = 2 + int(unif(rng) * 4);
    double x = 0.0;
    for (std::size_t i = 1; i < g.points; ++i) {
        const double phase = double(i * pieces) / double(g.points);
        const bool flat = (std::fmod(phase, 1.0) < 0.45);
        x += flat ? 0.0 : unif(rng);
        v[i] = x;
    }
    const double span = std::max(x, 1e-12);
    const double lo = 0.2 * unif(rng);
    const double hi = 1.0 - 0.2 * unif(rng);
    for (auto& y : v) y = lo + (hi - lo) * (y / span);
    return Profile::projected(g, std::move(v), lo, hi);
}

Profile raise_profile(const Profile& u, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double bump = 0.02 + 0.3 * unif(rng);
    std::vector<double> v = u.values();
    double add = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        add = std::min(bump, add + bump / double(v.size()) * 3.0);
        v[i] = std::min(1.0, v[i] + add);
    }
    return Profile::projected(u.grid(), std::move(v), u.left_tail(),
                              std::min(1.0, u.right_tail() + bump));
}

}  // namespace

HypothesesReport certify_hypotheses(const SemiflowConfig& cfg, int trials, std::uint64_t seed,
                                    double tau, double t_constant) {
    HypothesesReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.tau = tau;

    Semiflow flow(cfg);
    std::mt19937_64 rng(seed);
    const double alpha = cfg.reaction.alpha();
    const GridSpec& g = cfg.grid;
    EvolveStats stats;

    // (ii) order preservation on random ordered pairs
    rep.worst_order_violation = 0.0;
    for (int k = 0; k < trials; ++k) {
        Profile u1 = random_profile(g, rng);
        Profile u2 = raise_profile(u1, rng);
        Profile q1 = flow.evolve(u1, tau, &stats);
        Profile q2 = flow.evolve(u2, tau, &stats);
        rep.worst_order_violation = std::max(rep.worst_order_violation, order_violation(q1, q2));
    }
    rep.order_ok = rep.worst_order_violation <= 1e-8 + stats.projection_correction;

    // (iii) translation equivariance on grid-aligned shifts, interior window
    {
        std::uniform_int_distribution<int> shift(1, 8);
        const double margin = 0.25 * (g.x_max() - g.x_min);
        const Interval window{g.x_min + margin, g.x_max() - margin};
        for (int k = 0; k < std::max(3, trials / 10); ++k) {
            Profile u = random_profile(g, rng);
            const double h = g.step * shift(rng);
            Profile a = flow.evolve(resample(translate(u, h), g), tau);
            Profile b = translate(flow.evolve(u, tau), h);
            rep.worst_translation_defect =
                std::max(rep.worst_translation_defect, sup_dist(a, b, window));
        }
        rep.translation_ok = rep.worst_translation_defect <= 1e-8;
    }

    // (iv) bistable dynamics of constants
    {
        rep.margin_below_alpha = 1e300;
        rep.margin_above_alpha = 1e300;
        std::uniform_real_distribution<double> unif(0.05, 0.95);
        std::vector<double> below, above;
        for (double q : {0.25, 0.5, 0.75}) below.push_back(q * alpha);
        for (double q : {0.25, 0.5, 0.75, 0.9}) above.push_back(alpha + q * (1.0 - alpha));
        for (int k = 0; k < 6; ++k) {
            const double gamma = unif(rng);
            (gamma < alpha ? below : above).push_back(gamma);
        }
        for (double gamma : below) {
            if (gamma <= 1e-6 || gamma >= alpha - 1e-6) continue;
            Profile q = flow.evolve(Profile::constant(g, gamma), t_constant);
            rep.margin_below_alpha = std::min(rep.margin_below_alpha, gamma - q.values()[g.points / 2]);
        }
        for (double gamma : above) {
            if (gamma <= alpha + 1e-6 || gamma >= 1.0 - 1e-6) continue;
            Profile q = flow.evolve(Profile::constant(g, gamma), t_constant);
            rep.margin_above_alpha = std::min(rep.margin_above_alpha, q.values()[g.points / 2] - gamma);
        }
        rep.bistable_ok = rep.margin_below_alpha > 0.0 && rep.margin_above_alpha > 0.0;

        Profile qa = flow.evolve(Profile::constant(g, alpha), t_constant);
        rep.alpha_drift = sup_dist(qa, Profile::constant(g, alpha));
        rep.alpha_fixed_ok = rep.alpha_drift <= 1e-9;
    }

    // (i)/6(ii) continuity: bounded amplification of small perturbations and
    // small-time stability
    {
        const double eta = 1e-3;
        double worst_ratio = 0.0;
        for (int k = 0; k < std::max(3, trials / 10); ++k) {
            Profile u = random_profile(g, rng);
            std::vector<double> v = u.values();
            for (auto& y : v) y = std::min(1.0, y + eta);
            Profile up(g, std::move(v), std::min(1.0, u.left_tail() + eta),
                       std::min(1.0, u.right_tail() + eta));
            const double d = sup_dist(flow.evolve(u, tau), flow.evolve(up, tau));
            worst_ratio = std::max(worst_ratio, d / eta);
        }
        rep.continuity_ratio = worst_ratio;
        const double lip_bound = std::exp(cfg.reaction.lipschitz() * tau);
        Profile u = random_profile(g, rng);
        rep.small_time_defect = sup_dist(flow.evolve(u, 0.5 * cfg.dt), u);
        const double speed_bound = flow.mass() + 1.0 + cfg.reaction.lipschitz();
        rep.continuity_ok = worst_ratio <= 1.1 * lip_bound &&
                            rep.small_time_defect <= 2.0 * 0.5 * cfg.dt * speed_bound + 1e-12;
    }

    rep.projection_budget = stats.projection_correction;
    return rep;
}

}  // namespace nlfront
