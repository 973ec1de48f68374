#include "nlfront/front.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlfront {

namespace {

double min_on(const std::function<double(double)>& g, double lo, double hi, int samples) {
    double m = 1e300;
    for (int i = 0; i <= samples; ++i)
        m = std::min(m, g(lo + (hi - lo) * double(i) / double(samples)));
    return m;
}

}  // namespace

SubSuperPair build_sub_super(const ExtendedNonlinearity& fhat, const Measure& m, double eps,
                             const RampFn& ramp_in, const GridSpec& grid,
                             const SubSuperOptions& opts) {
    if (!(eps > 0.0)) throw ValidationError("build_sub_super: eps must be positive");
    RampFn ramp = ramp_in;
    ramp.epsilon = eps;
    const double alpha = fhat.alpha();
    const double beta = (1.0 - alpha) / 4.0;
    const double a4 = alpha / 4.0;
    const double mass = total_mass(m);

    SubSuperPair pair;
    pair.epsilon = eps;
    pair.alpha = alpha;
    pair.c_lower = -1.0 / (eps * eps);
    pair.c_upper = +1.0 / (eps * eps);

    pair.psi_lower = Profile::sample(grid, [&](double x) { return ramp(eps * x) - beta; });
    pair.psi_upper = Profile::sample(grid, [&](double x) { return ramp(eps * x + 1.0) + a4; });

    // the margin constants of the sub/super-solution lemma (diagnostics)
    pair.delta = std::min(
        std::min(min_on([&](double u) { return fhat(u); }, -beta, -0.5 * beta, 200),
                 min_on([&](double u) { return fhat(u); }, 1.0 - 2.0 * beta, 1.0 - beta, 200)),
        std::min(min_on([&](double u) { return -fhat(u); }, a4, 2.0 * a4, 200),
                 min_on([&](double u) { return -fhat(u); }, 1.0 + 0.5 * a4, 1.0 + a4, 200)));
    {
        const double lo_level = std::min((1.0 - alpha) / 8.0, a4);
        const double hi_level = 1.0 - std::min(beta, alpha / 8.0);
        double c = 1e300;
        for (int i = 0; i <= 400; ++i) {
            const double z = double(i) / 400.0;
            const double r = ramp(z);
            if (r >= lo_level && r <= hi_level) c = std::min(c, ramp.derivative(z));
        }
        pair.C_const = c == 1e300 ? 0.0 : c;
    }

    // pointwise inequality check on a (t,x) grid; the frame variable is
    // z = eps x -+ t/eps, so the x range is chosen to sweep the transition
    const auto check = [&](bool lower) {
        double worst = 1e300;
        const double pad = eps * m.support_radius() + 1.0;
        for (int it = 0; it < opts.time_samples; ++it) {
            const double t = opts.t_max * double(it) / double(std::max(1, opts.time_samples - 1));
            // lower frame: z = eps x - t/eps; upper frame: z = eps x + t/eps + 1
            const double frame = lower ? -t / eps : t / eps + 1.0;
            const double x_lo = (-pad - frame) / eps;
            const double x_hi = (1.0 + pad - frame) / eps;
            for (std::size_t ix = 0; ix < opts.space_samples; ++ix) {
                const double x =
                    x_lo + (x_hi - x_lo) * double(ix) / double(opts.space_samples - 1);
                const double z = eps * x + frame;
                double conv;
                if (lower) {
                    conv = integrate(m, [&](double y) { return ramp(z - eps * y); }) - beta * mass;
                    const double u = ramp(z) - beta;
                    const double du_dt = -(1.0 / eps) * ramp.derivative(z);
                    worst = std::min(worst, conv - u + fhat(u) - du_dt);
                } else {
                    conv = integrate(m, [&](double y) { return ramp(z - eps * y); }) + a4 * mass;
                    const double u = ramp(z) + a4;
                    const double du_dt = (1.0 / eps) * ramp.derivative(z);
                    worst = std::min(worst, du_dt - (conv - u + fhat(u)));
                }
            }
        }
        return worst;
    };
    pair.residual_lower = check(true);
    pair.residual_upper = check(false);

    if (pair.residual_lower < 0.0 || pair.residual_upper < 0.0) {
        std::ostringstream msg;
        msg << "epsilon too large: residual margins (" << pair.residual_lower << ", "
            << pair.residual_upper << ") at eps=" << eps << "; suggest eps <= " << 0.5 * eps;
        throw SolverError(msg.str());
    }
    return pair;
}

SubSuperPair build_sub_super_auto(const ExtendedNonlinearity& fhat, const Measure& m,
                                  double eps0, int max_halvings, const GridSpec& grid,
                                  const SubSuperOptions& opts) {
    double eps = eps0;
    for (int k = 0;; ++k) {
        try {
            return build_sub_super(fhat, m, eps, RampFn{eps}, grid, opts);
        } catch (const SolverError&) {
            if (k >= max_halvings) throw;
            eps *= 0.5;
        }
    }
}

FixedPointResult perturbed_fixed_point(int n, const SubSuperPair& pair,
                                       const RecursionConfig& rc, const Semiflow& flow) {
    if (n < 1) throw ValidationError("perturbed_fixed_point: n must be >= 1");
    const double s = 0.5 * (pair.c_upper - pair.c_lower);
    const double center = 0.5 * (pair.c_lower + pair.c_upper);
    const GridSpec& g = flow.grid();

    // shift snapped up to the grid so the translated sub/super-solutions are
    // represented exactly (keeps the sandwich checks sharp)
    const double shift_raw = double(n) + s;
    const double shift = std::ceil(shift_raw / g.step - 1e-9) * g.step;

    Profile psi_lo = resample(translate(pair.psi_lower, +shift), g);
    Profile psi_up = resample(translate(pair.psi_upper, -shift), g);

    const AffineMap rho{(double(n) + s) / double(n), center};

    FixedPointResult res;
    res.n = n;
    EvolveStats stats;

    auto apply_Qn = [&](const Profile& u) {
        return flow.evolve(affine_precompose(u, rho, g), rc.tau, &stats);
    };

    Profile cur = psi_lo;
    for (int k = 0; k < rc.max_iters; ++k) {
        Profile next = apply_Qn(cur);
        const double up_viol = order_violation(cur, next);
        if (up_viol > rc.sandwich_tol + stats.projection_correction)
            throw SolverError("perturbed_fixed_point: order preservation broken "
                              "(iterate monotonicity violated by " +
                              std::to_string(up_viol) + ")");
        const double lo_viol = order_violation(psi_lo, next);
        const double hi_viol = order_violation(next, psi_up);
        if (std::max(lo_viol, hi_viol) > rc.sandwich_tol + stats.projection_correction)
            throw SolverError("perturbed_fixed_point: order preservation broken "
                              "(sandwich violated by " +
                              std::to_string(std::max(lo_viol, hi_viol)) + ")");
        const double inc = sup_dist(next, cur);
        res.increments.push_back(inc);
        cur = next;
        res.iterations = k + 1;
        if (inc < rc.fixpoint_tol) {
            res.phi = cur;
            res.residual = sup_dist(apply_Qn(cur), cur);
            res.projection_budget = stats.projection_correction;
            return res;
        }
    }
    std::ostringstream msg;
    msg << "perturbed_fixed_point: max_iters=" << rc.max_iters << " exceeded at n=" << n
        << "; last increments:";
    for (std::size_t i = res.increments.size() > 5 ? res.increments.size() - 5 : 0;
         i < res.increments.size(); ++i)
        msg << " " << res.increments[i];
    throw SolverError(msg.str());
}

double equilibrium_value(Equilibrium e, double alpha) {
    switch (e) {
        case Equilibrium::zero: return 0.0;
        case Equilibrium::alpha: return alpha;
        default: return 1.0;
    }
}

std::pair<Equilibrium, Equilibrium> classify_limits(const Profile& phi, double alpha,
                                                    double tol) {
    auto snap = [&](double v) {
        if (std::abs(v) <= tol) return Equilibrium::zero;
        if (std::abs(v - alpha) <= tol) return Equilibrium::alpha;
        if (std::abs(v - 1.0) <= tol) return Equilibrium::one;
        throw SolverError("classify_limits: profile not settled; enlarge domain or time "
                          "(tail value " +
                          std::to_string(v) + ")");
    };
    return {snap(phi.left_tail()), snap(phi.right_tail())};
}

namespace {

/// slope estimates (y_{i+1}-y_i)/(n_{i+1}-n_i) plus one Richardson step under
/// the error model slope_i = xi + C/(n_i n_{i+1})
double extrapolate_xi(const std::vector<int>& ns, const std::vector<double>& ys,
                      double cauchy_tol, bool* cauchy_ok, double* cauchy_gap) {
    std::vector<double> slopes;
    for (std::size_t i = 0; i + 1 < ns.size(); ++i)
        slopes.push_back((ys[i + 1] - ys[i]) / double(ns[i + 1] - ns[i]));
    if (cauchy_ok) *cauchy_ok = true;
    if (cauchy_gap) *cauchy_gap = 0.0;
    if (slopes.size() == 1) return slopes.back();

    const double gap = std::abs(slopes.back() - slopes[slopes.size() - 2]);
    if (cauchy_gap) *cauchy_gap = gap;
    if (gap > cauchy_tol && cauchy_ok) *cauchy_ok = false;

    const std::size_t k = ns.size();
    const double n1 = double(ns[k - 3]), n3 = double(ns[k - 1]);
    const double w = n1 / (n3 - n1);  // 1/3 for a doubling list
    return slopes.back() + (slopes.back() - slopes[slopes.size() - 2]) * w;
}

}  // namespace

ExtractResult extract_front(const std::vector<FixedPointResult>& fixed_points,
                            const SubSuperPair& pair, const RecursionConfig& rc,
                            const Semiflow& flow, Interval window, double classify_tol) {
    if (fixed_points.size() < 2)
        throw ValidationError("extract_front: need at least two converged n values");

    const double alpha = pair.alpha;
    ExtractResult out;

    // tail margin N0 with psi_upper(-N0) < alpha < psi_lower(+N0)
    double N0 = rc.N0;
    if (N0 <= 0.0) {
        N0 = 1.0;
        while (N0 < 1e4 &&
               !(pair.psi_upper(-N0) < alpha && alpha < pair.psi_lower(+N0)))
            N0 += 1.0;
        if (N0 >= 1e4)
            throw SolverError("extract_front: no tail margin N0 found (sub/super pair too flat)");
    }
    const double level_lo =
        rc.level_lo > 0.0 ? rc.level_lo : 0.5 * (pair.psi_upper(-N0) + alpha);
    const double level_hi =
        rc.level_hi > 0.0 ? rc.level_hi : 0.5 * (alpha + pair.psi_lower(+N0));
    if (!(0.0 < level_lo && level_lo < alpha && alpha < level_hi && level_hi < 1.0))
        throw ValidationError("extract_front: crossing levels must satisfy 0<lo<alpha<hi<1");

    out.trace.N0 = N0;
    out.trace.level_lo = level_lo;
    out.trace.level_hi = level_hi;

    const double s = 0.5 * (pair.c_upper - pair.c_lower);
    const double center = 0.5 * (pair.c_lower + pair.c_upper);

    std::vector<int> ns;
    std::vector<double> ys, zs;
    for (const auto& fp : fixed_points) {
        RecursionTraceRow row;
        row.n = fp.n;
        row.residual = fp.residual;
        row.iterations = fp.iterations;
        row.y = level_crossing(fp.phi, level_lo);
        row.z = level_crossing(fp.phi, level_hi);
        if (row.y > row.z + flow.grid().step)
            throw SolverError("extract_front: level crossings out of order (y_n > z_n)");
        row.y_over_n = row.y / double(fp.n);
        row.z_over_n = row.z / double(fp.n);
        out.trace.rows.push_back(row);
        ns.push_back(fp.n);
        ys.push_back(row.y);
        zs.push_back(row.z);
    }

    bool cauchy_y = true, cauchy_z = true;
    double gap_y = 0.0, gap_z = 0.0;
    double xi_minus = extrapolate_xi(ns, ys, rc.xi_cauchy_tol, &cauchy_y, &gap_y);
    double xi_plus = extrapolate_xi(ns, zs, rc.xi_cauchy_tol, &cauchy_z, &gap_z);
    if (!cauchy_y || !cauchy_z) {
        std::ostringstream msg;
        msg << "extract_front: xi estimates not Cauchy (gaps " << gap_y << ", " << gap_z
            << " > " << rc.xi_cauchy_tol << "); increase n_list";
        throw SolverError(msg.str());
    }
    xi_minus = std::clamp(xi_minus, -1.0, 1.0);
    xi_plus = std::clamp(xi_plus, -1.0, 1.0);
    out.trace.xi_minus = xi_minus;
    out.trace.xi_plus = xi_plus;
    out.trace.c_minus = std::clamp(center - s * xi_minus, pair.c_lower, pair.c_upper);
    out.trace.c_plus = std::clamp(center - s * xi_plus, pair.c_lower, pair.c_upper);

    const auto& last = fixed_points.back();
    auto make_branch = [&](Branch b) {
        FrontResult fr;
        fr.branch = b;
        fr.c = b == Branch::minus ? out.trace.c_minus : out.trace.c_plus;
        fr.c_lower = pair.c_lower;
        fr.c_upper = pair.c_upper;
        const double shift = b == Branch::minus ? ys.back() : zs.back();
        fr.phi = translate(last.phi, -shift);
        const double tau = rc.tau;
        Profile cand = resample(fr.phi, flow.grid());
        Profile evolved = flow.evolve(cand, tau);
        fr.residual = sup_dist(translate(evolved, fr.c * tau), cand, window);
        auto lims = classify_limits(fr.phi, alpha, classify_tol);
        fr.limit_left = lims.first;
        fr.limit_right = lims.second;
        return fr;
    };
    out.minus_branch = make_branch(Branch::minus);
    out.plus_branch = make_branch(Branch::plus);

    auto is_full = [](const FrontResult& fr) {
        return fr.limit_left == Equilibrium::zero && fr.limit_right == Equilibrium::one;
    };
    if (is_full(out.minus_branch) && is_full(out.plus_branch))
        out.accepted =
            out.minus_branch.residual <= out.plus_branch.residual ? Branch::minus : Branch::plus;
    else if (is_full(out.minus_branch))
        out.accepted = Branch::minus;
    else if (is_full(out.plus_branch))
        out.accepted = Branch::plus;
    else
        throw SolverError("extract_front: neither branch has limits (0,1)");
    return out;
}

namespace {

double slope_of(const std::vector<double>& ts, const std::vector<double>& xs, std::size_t from,
                std::size_t to) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = double(to - from);
    for (std::size_t i = from; i < to; ++i) {
        sx += ts[i];
        sy += xs[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * xs[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

FrontResult refine_front(const Profile& seed, const Semiflow& flow, const RefineOptions& opts) {
    const GridSpec& g = flow.grid();
    Profile phi = resample(translate(seed, -level_crossing(seed, opts.level)), g);

    auto step_frame = [&](Profile& cur) {
        Profile evolved = flow.evolve(cur, opts.tau);
        const double drift = level_crossing(evolved, opts.level);
        cur = resample(translate(evolved, -drift), g);
        return drift;
    };

    // shape relaxation
    double last_delta = 1e300;
    for (int k = 0; k < opts.max_transient; ++k) {
        Profile before = phi;
        step_frame(phi);
        last_delta = sup_dist(phi, before, opts.residual_window);
        if (last_delta < opts.transient_tol && k >= 10) break;
    }
    if (last_delta >= opts.transient_tol) {
        std::ostringstream msg;
        msg << "refine_front: shape transient did not settle (delta " << last_delta << " after "
            << opts.max_transient << " iterations)";
        throw SolverError(msg.str());
    }

    // drift regression: the accumulated recentring shifts against time
    std::vector<double> ts, xs;
    double x_acc = 0.0;
    ts.push_back(0.0);
    xs.push_back(0.0);
    for (int k = 0; k < opts.sample_iters; ++k) {
        x_acc += step_frame(phi);
        ts.push_back(double(k + 1) * opts.tau);
        xs.push_back(x_acc);
    }
    const std::size_t half = ts.size() / 2;
    const double c_first = -slope_of(ts, xs, 0, half);
    const double c_second = -slope_of(ts, xs, half, ts.size());
    const double c = -slope_of(ts, xs, 0, ts.size());
    if (std::abs(c_first - c_second) > opts.speed_consistency_tol) {
        std::ostringstream msg;
        msg << "refine_front: drift regression halves disagree (" << c_first << " vs "
            << c_second << "); front speed not settled";
        throw SolverError(msg.str());
    }

    FrontResult fr;
    fr.c = c;
    fr.phi = phi;
    Profile e1 = flow.evolve(phi, opts.tau);
    fr.residual = sup_dist(translate(e1, c * opts.tau), phi, opts.residual_window);
    Profile e2 = flow.evolve(phi, 2.0 * opts.tau);
    fr.residual_2tau = sup_dist(translate(e2, 2.0 * c * opts.tau), phi, opts.residual_window);
    auto lims = classify_limits(phi, opts.alpha, opts.classify_tol);
    fr.limit_left = lims.first;
    fr.limit_right = lims.second;
    return fr;
}

SpeedTrack measure_speed_track(const Profile& u0, double T, const Semiflow& flow, double alpha,
                               const SpeedMeasureOptions& opts) {
    if (!(T > 0.0)) throw ValidationError("measure_speed: T must be positive");
    const double level = opts.level > 0.0 ? opts.level : alpha;
    const GridSpec& g = flow.grid();
    SpeedTrack track;

    Profile cur = u0;
    double t = 0.0;
    track.times.push_back(0.0);
    track.crossings.push_back(level_crossing(cur, level));
    const long steps_per_record = std::max(1L, long(std::llround(opts.record_dt / flow.dt())));
    const long total_steps = long(std::ceil(T / flow.dt() - 1e-9));
    for (long k = 0; k < total_steps; ++k) {
        cur = flow.step(cur);
        t += flow.dt();
        if ((k + 1) % steps_per_record == 0 || k + 1 == total_steps) {
            const double x = level_crossing(cur, level);
            if (x < g.x_min + opts.edge_margin || x > g.x_max() - opts.edge_margin)
                throw SolverError("measure_speed: crossing exits window; domain too small");
            track.times.push_back(t);
            track.crossings.push_back(x);
        }
    }

    // least-squares slope over the trailing window
    const double t_from = (1.0 - opts.fit_fraction) * T;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long m = 0;
    for (std::size_t i = 0; i < track.times.size(); ++i) {
        if (track.times[i] < t_from - 1e-12) continue;
        sx += track.times[i];
        sy += track.crossings[i];
        sxx += track.times[i] * track.times[i];
        sxy += track.times[i] * track.crossings[i];
        ++m;
    }
    if (m < 3) throw SolverError("measure_speed: too few samples in the fit window");
    const double denom = double(m) * sxx - sx * sx;
    const double slope = (double(m) * sxy - sx * sy) / denom;
    track.speed = -slope;  // u(t,x) = phi(x + c t)
    return track;
}

double measure_speed(const Profile& u0, double T, const Semiflow& flow, double alpha,
                     const SpeedMeasureOptions& opts) {
    return measure_speed_track(u0, T, flow, alpha, opts).speed;
}

SubFrontResult make_monostable_subfront(FrontSide side, const Nonlinearity& f, const Measure& m,
                                        const GridSpec& grid, double dt, double T,
                                        double projection_tol) {
    const double alpha = f.alpha();
    SubFrontResult out;

    // conjugated monostable dynamics (Lemma-17 transforms):
    //   minus: measure reflected, g(v) = -f(alpha (1 - v)) / alpha
    //   plus:  measure unchanged, g(v) = f((1-alpha) v + alpha) / (1-alpha)
    Measure mm = side == FrontSide::minus ? reflect(m) : m;
    std::function<double(double)> g;
    if (side == FrontSide::minus)
        g = [f, alpha](double v) { return -f(alpha * (1.0 - v)) / alpha; };
    else
        g = [f, alpha](double v) { return f((1.0 - alpha) * v + alpha) / (1.0 - alpha); };

    Semiflow flow(mm, g, f.lipschitz(), dt, grid, projection_tol);
    const double width = 4.0 * grid.step;
    Profile u0 = Profile::ramp(grid, -0.5 * width, 0.5 * width);

    SpeedMeasureOptions sopts;
    sopts.level = 0.5;
    SpeedTrack track = measure_speed_track(u0, T, flow, 0.5, sopts);
    out.transformed_speed = track.speed;

    // converged reduced profile, recentered
    Profile tilde = flow.evolve(u0, T);
    tilde = resample(translate(tilde, -level_crossing(tilde, 0.5)), grid);

    if (side == FrontSide::minus) {
        out.phi = sub_front_transform(tilde, FrontSide::minus, alpha,
                                      TransformDirection::forward);
        out.c = -track.speed;  // reflection flips the frame speed
        out.limit_left = 0.0;
        out.limit_right = alpha;
    } else {
        out.phi = sub_front_transform(tilde, FrontSide::plus, alpha,
                                      TransformDirection::forward);
        out.c = track.speed;
        out.limit_left = alpha;
        out.limit_right = 1.0;
    }
    return out;
}

}  // namespace nlfront
