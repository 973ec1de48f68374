#include "nlfront/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "nlfront/io.hpp"

namespace nlfront {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Semiflow make_flow(const RunConfig& cfg, const GridSpec& grid) {
    SemiflowConfig sc;
    sc.measure = cfg.measure;
    sc.reaction = ExtendedNonlinearity(cfg.nonlinearity, cfg.slope_out);
    sc.dt = cfg.time->dt;
    sc.grid = grid;
    sc.projection_tol = cfg.projection_tol;
    return Semiflow(sc);
}

Profile make_initial(const RunConfig& cfg, const GridSpec& grid) {
    if (cfg.initial.type == "ramp")
        return Profile::ramp(grid, cfg.initial.center - 0.5 * cfg.initial.width,
                             cfg.initial.center + 0.5 * cfg.initial.width);
    if (cfg.initial.type == "step")
        return Profile::ramp(grid, cfg.initial.center - 0.5 * grid.step,
                             cfg.initial.center + 0.5 * grid.step);
    if (cfg.initial.type == "csv") return resample(read_profile_csv(cfg.initial.path), grid);
    throw ValidationError("initial: unknown type '" + cfg.initial.type + "'");
}

}  // namespace

FrontPipelineResult run_front_pipeline(const RunConfig& cfg, int jobs) {
    validate_for_solve(cfg);
    if (!cfg.has_recursion)
        throw ValidationError("front: config needs a recursion section");
    cfg.nonlinearity.require_unstable_middle();

    FrontPipelineResult out;
    const double alpha = cfg.nonlinearity.alpha();
    const ExtendedNonlinearity fhat(cfg.nonlinearity, cfg.slope_out);
    const GridSpec big = *cfg.grid;
    Semiflow flow = make_flow(cfg, big);

    SubSuperOptions sso;
    sso.time_samples = cfg.subsuper.time_samples;
    sso.space_samples = cfg.subsuper.space_samples;
    sso.t_max = cfg.time->tau;
    out.pair = build_sub_super_auto(fhat, cfg.measure, cfg.subsuper.epsilon,
                                    cfg.subsuper.max_halvings, big, sso);

    RecursionConfig rc = cfg.recursion;
    rc.tau = cfg.time->tau;

    std::vector<FixedPointResult> fps(rc.n_list.size());
    if (jobs > 1) {
        std::vector<std::future<FixedPointResult>> futs;
        for (int n : rc.n_list)
            futs.push_back(std::async(std::launch::async, [&, n] {
                return perturbed_fixed_point(n, out.pair, rc, flow);
            }));
        for (std::size_t i = 0; i < futs.size(); ++i) fps[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < rc.n_list.size(); ++i)
            fps[i] = perturbed_fixed_point(rc.n_list[i], out.pair, rc, flow);
    }

    const Interval trace_window{-cfg.refine.residual_window, cfg.refine.residual_window};
    out.extraction = extract_front(fps, out.pair, rc, flow, trace_window);

    const FrontResult& seed = out.extraction.accepted == Branch::minus
                                  ? out.extraction.minus_branch
                                  : out.extraction.plus_branch;

    auto refine_at = [&](double step) {
        GridSpec fine = GridSpec::over(-cfg.refine.window, cfg.refine.window, step);
        Semiflow fine_flow = make_flow(cfg, fine);
        RefineOptions ro;
        ro.tau = cfg.time->tau;
        ro.alpha = alpha;
        ro.max_transient = cfg.refine.max_transient;
        ro.transient_tol = cfg.refine.transient_tol;
        ro.sample_iters = cfg.refine.sample_iters;
        ro.speed_consistency_tol = cfg.refine.speed_consistency_tol;
        ro.residual_window = {-cfg.refine.residual_window, cfg.refine.residual_window};
        return refine_front(seed.phi, fine_flow, ro);
    };
    out.front = refine_at(cfg.refine.step);
    out.front.branch = seed.branch;
    out.front.c_lower = out.pair.c_lower;
    out.front.c_upper = out.pair.c_upper;
    if (!(out.front.c >= out.pair.c_lower - 1e-9 && out.front.c <= out.pair.c_upper + 1e-9))
        throw SolverError("front: refined speed escapes the sub/super-solution bracket");
    if (cfg.refine.check_half_step) {
        out.c_half_step = refine_at(0.5 * cfg.refine.step).c;
        out.half_step_checked = true;
    }

    // independent oracle: direct simulation from a steep ramp
    {
        GridSpec sg = GridSpec::over(-cfg.speed.window, cfg.speed.window, cfg.speed.step);
        Semiflow sflow = make_flow(cfg, sg);
        Profile u0 = Profile::ramp(sg, -1.0, 1.0);
        SpeedMeasureOptions so;
        so.record_dt = cfg.speed.record_dt;
        so.edge_margin = cfg.speed.edge_margin;
        out.c_measured = measure_speed(u0, cfg.speed.T, sflow, alpha, so);
    }

    json rep;
    rep["problem"] = cfg.raw.value("problem", json::object());
    rep["seed"] = cfg.seed;
    rep["sub_super"] = to_json(out.pair);
    rep["trace"] = to_json(out.extraction.trace);
    rep["branch_minus"] = to_json(out.extraction.minus_branch);
    rep["branch_plus"] = to_json(out.extraction.plus_branch);
    rep["front"] = to_json(out.front);
    rep["cross_check"] = {
        {"c_measured", out.c_measured},
        {"agreement", std::abs(out.front.c - out.c_measured)},
    };
    if (out.half_step_checked)
        rep["refinement"] = {{"c_half_step", out.c_half_step},
                             {"delta_c", std::abs(out.front.c - out.c_half_step)}};
    rep["bracket"] = {{"c_lower", out.pair.c_lower},
                      {"c_upper", out.pair.c_upper},
                      {"c_in_bracket", out.front.c >= out.pair.c_lower - 1e-9 &&
                                           out.front.c <= out.pair.c_upper + 1e-9}};
    out.report = std::move(rep);
    return out;
}

void write_front_outputs(const RunConfig& cfg, const FrontPipelineResult& r) {
    if (cfg.out_dir.empty()) return;
    fs::create_directories(cfg.out_dir);
    const fs::path dir = cfg.out_dir;
    write_json(dir / "front_report.json", r.report);
    write_json(dir / "recursion_trace.json", to_json(r.extraction.trace));
    write_profile_csv(dir / "front_profile.csv", r.front.phi);
    if (cfg.svg) {
        const auto& g = r.front.phi.grid();
        SvgSeries s;
        for (std::size_t i = 0; i < g.points; ++i) {
            s.x.push_back(g.x_at(i));
            s.y.push_back(r.front.phi.values()[i]);
        }
        write_svg(dir / "front_profile.svg", {s}, "traveling front profile");
    }
}

json run_simulate(const RunConfig& cfg) {
    validate_for_solve(cfg);
    if (!(cfg.time->T > 0.0)) throw ValidationError("simulate: time.T must be positive");
    const GridSpec grid = *cfg.grid;
    Semiflow flow = make_flow(cfg, grid);
    Profile u = make_initial(cfg, grid);
    const double alpha = cfg.nonlinearity.alpha();

    const fs::path dir = cfg.out_dir;
    const bool writing = !cfg.out_dir.empty();
    if (writing) fs::create_directories(dir);

    json snapshots = json::array();
    std::vector<double> track_t, track_x;
    EvolveStats stats;
    double t = 0.0;
    auto record = [&](double tt, const Profile& uu) {
        if (writing) {
            std::ostringstream name;
            name << "snapshot_t" << tt << ".csv";
            write_profile_csv(dir / name.str(), uu);
            snapshots.push_back(name.str());
        }
        if (uu.left_tail() < alpha && alpha < uu.right_tail()) {
            track_t.push_back(tt);
            track_x.push_back(level_crossing(uu, alpha));
        }
    };
    record(0.0, u);
    const long per = std::max(1L, long(std::llround(cfg.snapshot_dt / cfg.time->dt)));
    const long total = long(std::ceil(cfg.time->T / cfg.time->dt - 1e-9));
    for (long k = 0; k < total; ++k) {
        u = flow.step(u, &stats);
        t += cfg.time->dt;
        if ((k + 1) % per == 0 || k + 1 == total) record(t, u);
    }

    json rep;
    rep["snapshots"] = snapshots;
    rep["projection_budget"] = stats.projection_correction;
    rep["steps"] = stats.steps;
    json track = json::array();
    for (std::size_t i = 0; i < track_t.size(); ++i)
        track.push_back({{"t", track_t[i]}, {"x", track_x[i]}});
    rep["crossing_track"] = track;
    if (writing) {
        std::ofstream csv(dir / "crossing_track.csv");
        csv << "t,x\n";
        for (std::size_t i = 0; i < track_t.size(); ++i)
            csv << format_double(track_t[i]) << "," << format_double(track_x[i]) << "\n";
        if (cfg.svg && !track_t.empty())
            write_svg(dir / "crossing_track.svg", {{track_t, track_x}}, "level-alpha crossing");
        write_json(dir / "simulate_report.json", rep);
    }
    return rep;
}

json run_bounds(const RunConfig& cfg) {
    auto grid = logspace(cfg.bounds.lambda_min, cfg.bounds.lambda_max,
                         std::size_t(cfg.bounds.points));
    json rep;
    rep["sigma"] = cfg.bounds.sigma;
    json curves = json::array();
    for (auto dir : {BoundDirection::minus, BoundDirection::plus}) {
        SpeedBoundQuery q{cfg.measure, cfg.bounds.sigma, dir, grid, cfg.bounds.refine_tol};
        SpeedBoundReport r = infimum(q);
        json jr = {{"direction", dir == BoundDirection::minus ? "minus" : "plus"},
                   {"value", r.value},
                   {"lambda_star", r.lambda_star},
                   {"attained", r.attained}};
        curves.push_back(jr);
    }
    rep["infima"] = curves;
    SpeedBoundReport gap = hypothesis7_gap(cfg.measure, cfg.bounds.sigma, cfg.bounds.gap_tol);
    rep["gap"] = *gap.gap;
    rep["gap_positive"] = gap.gap_positive;

    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        const fs::path dir = cfg.out_dir;
        std::ofstream csv(dir / "bound_curve.csv");
        csv << "lambda,minus,plus\n";
        for (double lam : grid) {
            SpeedBoundQuery qm{cfg.measure, cfg.bounds.sigma, BoundDirection::minus, {}, 1e-10};
            SpeedBoundQuery qp{cfg.measure, cfg.bounds.sigma, BoundDirection::plus, {}, 1e-10};
            csv << format_double(lam) << "," << format_double(bound_curve(qm, lam)) << ","
                << format_double(bound_curve(qp, lam)) << "\n";
        }
        write_json(dir / "bounds_report.json", rep);
        if (cfg.svg) {
            SvgSeries sm, sp;
            sp.color = "#d62728";
            for (double lam : grid) {
                SpeedBoundQuery qm{cfg.measure, cfg.bounds.sigma, BoundDirection::minus, {}, 1e-10};
                SpeedBoundQuery qp{cfg.measure, cfg.bounds.sigma, BoundDirection::plus, {}, 1e-10};
                sm.x.push_back(std::log10(lam));
                sm.y.push_back(std::min(bound_curve(qm, lam), 50.0));
                sp.x.push_back(std::log10(lam));
                sp.y.push_back(std::min(bound_curve(qp, lam), 50.0));
            }
            write_svg(fs::path(cfg.out_dir) / "bound_curve.svg", {sm, sp},
                      "speed bound curves (log10 lambda)");
        }
    }
    return rep;
}

json run_hypotheses(const RunConfig& cfg) {
    validate_for_solve(cfg);
    SemiflowConfig sc;
    sc.measure = cfg.measure;
    sc.reaction = ExtendedNonlinearity(cfg.nonlinearity, cfg.slope_out);
    sc.dt = cfg.time->dt;
    sc.grid = *cfg.grid;
    sc.projection_tol = cfg.projection_tol;
    HypothesesReport rep = certify_hypotheses(sc, cfg.hypotheses.trials, cfg.seed,
                                              cfg.time->tau, cfg.hypotheses.t_constant);
    json j = to_json(rep);
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_json(fs::path(cfg.out_dir) / "hypotheses_report.json", j);
    }
    return j;
}

json run_mgf_check(const RunConfig& cfg) {
    json rep;
    // K must push the series term below the verification threshold at the
    // largest sampled MGF value, not just at the measure's mass
    double m_max = total_mass(cfg.measure);
    for (double lam : cfg.mgf.lambdas) m_max = std::max(m_max, exp_moment(cfg.measure, lam));
    int K = cfg.mgf.K;
    {
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= cfg.mgf.K; ++k) {
            term *= m_max / double(k);
            sum += term;
            if (k >= 6 && term < 1e-13 * sum) {
                K = k;
                break;
            }
        }
    }
    rep["K"] = K;
    const double err = verify_mgf_identity(cfg.measure, cfg.mgf.lambdas, K);
    rep["max_rel_error"] = err;
    rep["lambdas"] = cfg.mgf.lambdas;

    if (cfg.mgf.cross_check) {
        const double H = cfg.mgf.cross_grid_halfwidth;
        GridSpec g = GridSpec::over(-H, H, cfg.mgf.cross_grid_step);
        // smoothstep ramp as the linear-mode initial state
        const double w = cfg.mgf.ramp_width;
        Field v;
        v.grid = g;
        v.values.resize(g.points);
        for (std::size_t i = 0; i < g.points; ++i) {
            const double z = (g.x_at(i) + 0.5 * w) / w;
            v.values[i] = z <= 0.0 ? 0.0 : (z >= 1.0 ? 1.0 : z * z * (3.0 - 2.0 * z));
        }
        v.left_tail = 0.0;
        v.right_tail = 1.0;

        Field evolved = evolve_linear(v, cfg.measure, 1.0, cfg.mgf.cross_dt);
        const Measure nu = exp_series(cfg.measure, K);
        GridSpec win = GridSpec::over(-cfg.mgf.cross_window, cfg.mgf.cross_window,
                                      cfg.mgf.cross_grid_step);
        Field series_route = convolve(nu, v, win);
        double sup = 0.0;
        for (std::size_t i = 0; i < win.points; ++i)
            sup = std::max(sup, std::abs(series_route.values[i] - evolved(win.x_at(i))));
        rep["cross_check_sup_error"] = sup;
    }
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_json(fs::path(cfg.out_dir) / "mgf_report.json", rep);
    }
    return rep;
}

json run_subsuper_check(const RunConfig& cfg) {
    validate_for_solve(cfg);
    const ExtendedNonlinearity fhat(cfg.nonlinearity, cfg.slope_out);
    SubSuperOptions sso;
    sso.time_samples = cfg.subsuper.time_samples;
    sso.space_samples = cfg.subsuper.space_samples;
    sso.t_max = cfg.time ? cfg.time->tau : 1.0;
    SubSuperPair pair = build_sub_super_auto(fhat, cfg.measure, cfg.subsuper.epsilon,
                                             cfg.subsuper.max_halvings, *cfg.grid, sso);
    json rep = to_json(pair);
    rep["space_time_points"] = sso.time_samples * int(sso.space_samples);

    if (cfg.subsuper.confirm_evolution) {
        // paper inequality: psi_lower(x) <= (Q^t psi_lower)(x - c_lower t)
        Semiflow flow = make_flow(cfg, *cfg.grid);
        json conf = json::array();
        for (double t : {1.0, 2.0}) {
            Profile lo = flow.evolve(pair.psi_lower, t);
            Profile hi = flow.evolve(pair.psi_upper, t);
            const double sub_viol =
                order_violation(pair.psi_lower, translate(lo, pair.c_lower * t));
            const double sup_viol =
                order_violation(translate(hi, pair.c_upper * t), pair.psi_upper);
            conf.push_back({{"t", t},
                            {"sub_violation", sub_viol},
                            {"super_violation", sup_viol},
                            {"ok", sub_viol < 1e-6 && sup_viol < 1e-6}});
        }
        rep["evolution_confirmation"] = conf;
    }
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_json(fs::path(cfg.out_dir) / "subsuper_report.json", rep);
        write_profile_csv(fs::path(cfg.out_dir) / "psi_lower.csv", pair.psi_lower);
        write_profile_csv(fs::path(cfg.out_dir) / "psi_upper.csv", pair.psi_upper);
    }
    return rep;
}

}  // namespace nlfront
