#include "nlfront/run_config.hpp"

#include <cmath>
#include <fstream>

namespace nlfront {

using nlohmann::json;

Measure parse_measure(const json& j) {
    if (j.contains("generator")) {
        const std::string gen = j.at("generator");
        const double step = j.value("step", 0.25);
        if (gen == "uniform") return Measure::uniform(j.at("a"), j.at("b"), step);
        if (gen == "triangle") return Measure::triangle(j.at("a"), j.at("b"), step);
        if (gen == "gaussian_truncated")
            return Measure::gaussian_truncated(j.at("mean"), j.at("stddev"), j.at("radius"), step);
        throw ValidationError("measure: unknown generator '" + gen + "'");
    }
    std::vector<Measure::Atom> atoms;
    if (j.contains("atoms"))
        for (const auto& a : j.at("atoms"))
            atoms.push_back({a.at("loc").get<double>(), a.at("mass").get<double>()});
    PiecewiseLinearDensity d;
    if (j.contains("density")) {
        const auto& jd = j.at("density");
        d.x_min = jd.at("grid_min");
        d.step = jd.at("step");
        d.values = jd.at("values").get<std::vector<double>>();
        if (jd.contains("grid_max")) {
            const double expect = d.x_min + d.step * double(d.values.size() - 1);
            if (std::abs(expect - jd.at("grid_max").get<double>()) > 1e-9)
                throw ValidationError("measure density: grid_max inconsistent with values/step");
        }
    }
    if (atoms.empty() && d.empty())
        throw ValidationError("measure: need atoms, density, or a generator");
    return Measure(std::move(atoms), std::move(d));
}

Nonlinearity parse_nonlinearity(const json& j) {
    const std::string type = j.value("type", "cubic");
    if (type == "cubic")
        return Nonlinearity::cubic(j.value("lambda", 1.0), j.value("alpha", 0.3));
    if (type == "table") {
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : j.at("knots"))
            knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
        return Nonlinearity::tabulated(j.at("alpha"), std::move(knots));
    }
    throw ValidationError("nonlinearity: unknown type '" + type + "'");
}

RunConfig parse_run_config(const json& j) {
    RunConfig cfg;
    cfg.raw = j;

    const auto& prob = j.at("problem");
    cfg.measure = parse_measure(prob.at("measure"));
    cfg.nonlinearity = prob.contains("nonlinearity") ? parse_nonlinearity(prob.at("nonlinearity"))
                                                     : Nonlinearity::cubic(1.0, 0.3);
    cfg.slope_out = prob.value("slope_out", 1.0);

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.grid = GridSpec::over(g.at("min"), g.at("max"), g.at("step"));
    }
    if (j.contains("time")) {
        const auto& t = j.at("time");
        RunConfig::Time tm;
        tm.dt = t.at("dt");
        tm.tau = t.value("tau", 1.0);
        tm.T = t.value("T", 0.0);
        cfg.time = tm;
    }
    cfg.projection_tol = j.value("projection_tol", 1e-6);

    if (j.contains("initial")) {
        const auto& i = j.at("initial");
        cfg.initial.type = i.value("type", "ramp");
        cfg.initial.center = i.value("center", 0.0);
        cfg.initial.width = i.value("width", 2.0);
        cfg.initial.path = i.value("path", "");
    }
    cfg.snapshot_dt = j.value("snapshot_dt", 10.0);

    if (j.contains("recursion")) {
        const auto& r = j.at("recursion");
        cfg.has_recursion = true;
        cfg.recursion.n_list = r.at("n_list").get<std::vector<int>>();
        cfg.recursion.tau = cfg.time ? cfg.time->tau : 1.0;
        cfg.recursion.fixpoint_tol = r.value("fixpoint_tol", 1e-6);
        cfg.recursion.max_iters = r.value("max_iters", 400);
        cfg.recursion.sandwich_tol = r.value("sandwich_tol", 1e-8);
        cfg.recursion.xi_cauchy_tol = r.value("xi_cauchy_tol", 0.05);
        cfg.recursion.N0 = r.value("N0", 0.0);
        cfg.recursion.level_lo = r.value("level_lo", -1.0);
        cfg.recursion.level_hi = r.value("level_hi", -1.0);
    }

    if (j.contains("subsuper")) {
        const auto& s = j.at("subsuper");
        cfg.subsuper.epsilon = s.value("epsilon", 0.05);
        cfg.subsuper.max_halvings = s.value("max_halvings", 6);
        cfg.subsuper.time_samples = s.value("time_samples", 13);
        cfg.subsuper.space_samples = s.value("space_samples", std::size_t(801));
        cfg.subsuper.confirm_evolution = s.value("confirm_evolution", false);
    }

    if (j.contains("refine")) {
        const auto& r = j.at("refine");
        cfg.refine.window = r.value("window", 40.0);
        cfg.refine.step = r.value("step", 0.0625);
        cfg.refine.max_transient = r.value("max_transient", 250);
        cfg.refine.transient_tol = r.value("transient_tol", 1e-4);
        cfg.refine.sample_iters = r.value("sample_iters", 100);
        cfg.refine.speed_consistency_tol = r.value("speed_consistency_tol", 5e-5);
        cfg.refine.residual_window = r.value("residual_window", 15.0);
        cfg.refine.check_half_step = r.value("check_half_step", true);
    }

    if (j.contains("speed")) {
        const auto& s = j.at("speed");
        cfg.speed.T = s.value("T", 60.0);
        cfg.speed.window = s.value("window", 50.0);
        cfg.speed.step = s.value("step", 0.125);
        cfg.speed.record_dt = s.value("record_dt", 0.5);
        cfg.speed.edge_margin = s.value("edge_margin", 5.0);
    }

    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        cfg.bounds.sigma = b.value("sigma", 0.1);
        cfg.bounds.lambda_min = b.value("lambda_min", 1e-3);
        cfg.bounds.lambda_max = b.value("lambda_max", 1e3);
        cfg.bounds.points = b.value("points", 181);
        cfg.bounds.refine_tol = b.value("refine_tol", 1e-10);
        cfg.bounds.gap_tol = b.value("gap_tol", 1e-6);
    }

    if (j.contains("hypotheses")) {
        const auto& h = j.at("hypotheses");
        cfg.hypotheses.trials = h.value("trials", 100);
        cfg.hypotheses.t_constant = h.value("t_constant", 10.0);
    }

    if (j.contains("mgf")) {
        const auto& m = j.at("mgf");
        if (m.contains("lambdas")) cfg.mgf.lambdas = m.at("lambdas").get<std::vector<double>>();
        cfg.mgf.K = m.value("K", 40);
        cfg.mgf.cross_check = m.value("cross_check", true);
        cfg.mgf.cross_grid_halfwidth = m.value("cross_grid_halfwidth", 10.0);
        cfg.mgf.cross_grid_step = m.value("cross_grid_step", 0.0025);
        cfg.mgf.cross_window = m.value("cross_window", 2.0);
        cfg.mgf.cross_dt = m.value("cross_dt", 0.02);
        cfg.mgf.ramp_width = m.value("ramp_width", 6.0);
    }

    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        cfg.out_dir = o.value("dir", "out");
        cfg.svg = o.value("svg", false);
    }
    cfg.seed = j.value("seed", std::uint64_t(20240101));
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return parse_run_config(j);
}

void validate_for_solve(const RunConfig& cfg) {
    if (!cfg.grid) throw ValidationError("config: grid {min,max,step} is required");
    if (!cfg.time || !(cfg.time->dt > 0.0))
        throw ValidationError("config: time {dt,...} is required");
    cfg.nonlinearity.validate_bistable();
    const ExtendedNonlinearity fhat(cfg.nonlinearity, cfg.slope_out);
    if (!(cfg.time->dt * (1.0 + fhat.lipschitz()) < 1.0))
        throw ValidationError("config: stability budget dt*(1+Lipschitz) < 1 violated");
    // atom offsets must sit on the grid lattice
    for (const auto& a : cfg.measure.atom_list()) {
        const double cells = a.loc / cfg.grid->step;
        if (std::abs(cells - std::round(cells)) > 1e-9)
            throw ValidationError("config: grid step must divide atom offset " +
                                  std::to_string(a.loc));
    }
    if (cfg.has_recursion) {
        if (cfg.recursion.n_list.size() < 2)
            throw ValidationError("config: recursion n_list needs at least two entries");
        for (std::size_t i = 0; i + 1 < cfg.recursion.n_list.size(); ++i)
            if (cfg.recursion.n_list[i] >= cfg.recursion.n_list[i + 1])
                throw ValidationError("config: recursion n_list must be increasing");
        const double a = cfg.nonlinearity.alpha();
        const double lo = cfg.recursion.level_lo, hi = cfg.recursion.level_hi;
        if (lo > 0.0 && !(lo < a))
            throw ValidationError("config: level_lo must lie below alpha");
        if (hi > 0.0 && !(a < hi && hi < 1.0))
            throw ValidationError("config: level_hi must lie in (alpha,1)");
    }
    if (!(cfg.bounds.sigma > 0.0))
        throw ValidationError("config: sigma must be positive");
    if (cfg.nonlinearity.derivative_at_alpha() > 0.0 &&
        !(cfg.bounds.sigma < cfg.nonlinearity.derivative_at_alpha()))
        throw ValidationError("config: sigma must be below f'(alpha) = " +
                              std::to_string(cfg.nonlinearity.derivative_at_alpha()));
}

}  // namespace nlfront
