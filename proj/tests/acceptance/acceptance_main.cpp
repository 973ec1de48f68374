// Acceptance suite: one pass/fail line per criterion.
//
//   acceptance core   -> criteria 1, 2, 3, 4, 5, 9
//   acceptance front  -> criteria 6, 7, 8, 10 (shared front pipelines)
//
// Exit code 0 iff every criterion in the selected group passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nlfront/driver.hpp"
#include "nlfront/io.hpp"

using namespace nlfront;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& details) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), details.c_str());
    if (!pass) ++g_failures;
}

std::string cfg_path(const std::string& name) {
    return std::string(NLFRONT_CONFIG_DIR) + "/" + name;
}

RunConfig load(const std::string& name) {
    RunConfig cfg = load_run_config(cfg_path(name));
    cfg.out_dir.clear();  // acceptance runs produce no files
    return cfg;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------- core group

void criterion_1_hypotheses() {
    const auto t0 = std::chrono::steady_clock::now();
    json rep = run_hypotheses(load("certify_lattice.json"));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& order = rep["order_preservation"];
    const auto& trans = rep["translation_equivariance"];
    const auto& bist = rep["bistable_constants"];
    const double budget = rep["projection_budget"];
    bool pass = order["ok"].get<bool>() &&
                order["worst_violation"].get<double>() <= 1e-8 + budget &&
                trans["ok"].get<bool>() && trans["worst_defect"].get<double>() <= 1e-8 &&
                bist["ok"].get<bool>() && bist["margin_below_alpha"].get<double>() > 0.0 &&
                bist["margin_above_alpha"].get<double>() > 0.0 && seconds < 30.0;
    std::ostringstream d;
    d << "order " << fmt(order["worst_violation"]) << ", translation "
      << fmt(trans["worst_defect"]) << ", margins " << fmt(bist["margin_below_alpha"]) << "/"
      << fmt(bist["margin_above_alpha"]) << ", " << fmt(seconds) << " s";
    report(1, pass, "hypothesis certification on the lattice measure", d.str());
}

void criterion_2_equilibria() {
    RunConfig cfg = load("certify_lattice.json");
    SemiflowConfig sc;
    sc.measure = cfg.measure;
    sc.reaction = ExtendedNonlinearity(cfg.nonlinearity, cfg.slope_out);
    sc.dt = cfg.time->dt;
    sc.grid = *cfg.grid;
    sc.projection_tol = cfg.projection_tol;
    Semiflow flow(sc);
    double worst = 0.0;
    for (double e : {0.0, cfg.nonlinearity.alpha(), 1.0}) {
        Profile u = flow.evolve(Profile::constant(sc.grid, e), 10.0);
        worst = std::max(worst, sup_dist(u, Profile::constant(sc.grid, e)));
    }
    report(2, worst <= 1e-9, "equilibria 0, alpha, 1 fixed by evolve(.,10)",
           "worst drift " + fmt(worst));
}

void criterion_3_mgf() {
    bool pass = true;
    std::ostringstream d;
    for (const std::string& name : {"mgf_lattice.json", "mgf_sym.json", "mgf_uniform.json"}) {
        RunConfig cfg = load(name);
        json rep = run_mgf_check(cfg);
        const double rel = rep["max_rel_error"];
        const double sup = rep["cross_check_sup_error"];
        const int K = rep["K"];
        pass = pass && rel < 1e-6 && sup < 1e-6 && K <= 40;
        d << name.substr(4, name.size() - 9) << " rel " << fmt(rel) << " sup " << fmt(sup)
          << "; ";
    }
    report(3, pass, "MGF identity and linear-evolution cross-check", d.str());
}

void criterion_4_subsuper() {
    bool pass = true;
    std::ostringstream d;
    for (const std::string& name : {"subsuper_lattice.json", "subsuper_uniform.json"}) {
        RunConfig cfg = load(name);
        json rep = run_subsuper_check(cfg);
        const double rl = rep["residual_lower"];
        const double ru = rep["residual_upper"];
        const int pts = rep["space_time_points"];
        bool conf = true;
        for (const auto& row : rep["evolution_confirmation"]) conf = conf && row["ok"].get<bool>();
        pass = pass && rl >= 0.0 && ru >= 0.0 && pts >= 10000 && conf;
        d << name.substr(9, name.size() - 14) << " residuals " << fmt(rl) << "/" << fmt(ru)
          << " on " << pts << " pts; ";
    }
    report(4, pass, "sub/super-solution residuals with auto-eps", d.str());
}

void criterion_5_recursion() {
    RunConfig cfg = load("recursion_small.json");
    validate_for_solve(cfg);
    const ExtendedNonlinearity fhat(cfg.nonlinearity, cfg.slope_out);
    SemiflowConfig sc{cfg.measure, fhat, cfg.time->dt, *cfg.grid, cfg.projection_tol};
    Semiflow flow(sc);
    SubSuperPair pair = build_sub_super_auto(fhat, cfg.measure, cfg.subsuper.epsilon,
                                             cfg.subsuper.max_halvings, *cfg.grid, {});
    RecursionConfig rc = cfg.recursion;
    rc.tau = cfg.time->tau;
    bool pass = true;
    std::ostringstream d;
    try {
        for (int n : {10, 20, 40}) {
            FixedPointResult fp = perturbed_fixed_point(n, pair, rc, flow);
            pass = pass && fp.residual < 1e-6;
            d << "n=" << n << " res " << fmt(fp.residual) << " (" << fp.iterations
              << " it); ";
        }
    } catch (const std::exception& e) {
        pass = false;
        d << "threw: " << e.what();
    }
    report(5, pass, "fixed-point recursion: residual, monotone iterates, sandwich", d.str());
}

void criterion_9_gap() {
    bool pass = true;
    std::ostringstream d;
    std::vector<std::pair<std::string, Measure>> measures = {
        {"delta1", Measure::point(1.0)},
        {"sym-atoms", Measure::atoms({{-1.0, 0.5}, {1.0, 0.5}})},
        {"uniform01", Measure::uniform(0.0, 1.0, 0.05)},
        {"uniform-sym", Measure::uniform(-0.5, 0.5, 0.05)},
    };
    double worst_gap = 1e300;
    for (const auto& [name, m] : measures)
        for (double sigma : {0.05, 0.1}) {
            SpeedBoundReport r = hypothesis7_gap(m, sigma);
            pass = pass && r.gap_positive && *r.gap > 0.0;
            worst_gap = std::min(worst_gap, *r.gap);
        }
    SpeedBoundReport r0 = hypothesis7_gap(Measure::point(0.0), 0.1);
    pass = pass && !r0.gap_positive && std::abs(*r0.gap) <= 1e-6;
    d << "min gap " << fmt(worst_gap) << "; delta_0 gap " << fmt(std::abs(*r0.gap))
      << " (flag false)";
    report(9, pass, "exponential-moment gap positivity", d.str());
}

// --------------------------------------------------------------- front group

struct FrontCase {
    std::string name;
    FrontPipelineResult result;
    bool ok = false;
    std::string error;
};

FrontCase run_case(const std::string& config) {
    FrontCase fc;
    fc.name = config;
    try {
        fc.result = run_front_pipeline(load(config), 1);
        fc.ok = true;
    } catch (const std::exception& e) {
        fc.error = e.what();
    }
    return fc;
}

void front_criteria() {
    FrontCase sym_lat = run_case("front_sym_lattice.json");
    FrontCase sym_uni = run_case("front_sym_uniform.json");
    FrontCase a03 = run_case("front_alpha03.json");
    FrontCase a07 = run_case("front_alpha07.json");
    const std::vector<const FrontCase*> all{&sym_lat, &sym_uni, &a03, &a07};

    // criterion 6: zero speed by symmetry (both extraction and simulation)
    {
        bool pass = sym_lat.ok && sym_uni.ok;
        std::ostringstream d;
        for (const FrontCase* fc : {&sym_lat, &sym_uni}) {
            if (!fc->ok) {
                d << fc->name << " failed: " << fc->error;
                break;
            }
            const auto& r = fc->result;
            const double raw =
                std::max(std::abs(r.extraction.trace.c_minus), std::abs(r.extraction.trace.c_plus));
            pass = pass && std::abs(r.front.c) < 5e-3 && std::abs(r.c_measured) < 5e-3 &&
                   raw < 5e-3;
            d << fc->name.substr(6, fc->name.size() - 11) << " |c|=" << fmt(std::abs(r.front.c))
              << " |c_meas|=" << fmt(std::abs(r.c_measured)) << " |c_raw|<=" << fmt(raw) << "; ";
        }
        report(6, pass, "zero-speed symmetric fronts", d.str());
    }

    // criterion 7: sign flip across alpha = 1/2 and oracle agreement
    {
        bool pass = a03.ok && a07.ok;
        std::ostringstream d;
        if (pass) {
            const auto& r3 = a03.result;
            const auto& r7 = a07.result;
            const double agree3 = std::abs(r3.front.c - r3.c_measured);
            const double agree7 = std::abs(r7.front.c - r7.c_measured);
            const double mirror = std::abs(std::abs(r3.front.c) - std::abs(r7.front.c));
            pass = r3.front.c > 0.01 && r7.front.c < -0.01 && mirror < 5e-3 &&
                   agree3 < 1e-2 && agree7 < 1e-2 &&
                   std::abs(r3.extraction.trace.c_minus - r3.c_measured) < 1e-2 &&
                   std::abs(r3.extraction.trace.c_plus - r3.c_measured) < 1e-2;
            d << "c(0.3)=" << fmt(r3.front.c) << " c(0.7)=" << fmt(r7.front.c) << " mirror "
              << fmt(mirror) << " agreement " << fmt(agree3) << "/" << fmt(agree7);
        } else {
            d << (a03.ok ? a07.error : a03.error);
        }
        report(7, pass, "speed-sign flip with oracle agreement", d.str());
    }

    // criterion 8: speed bracket on every passing run
    {
        bool pass = true;
        std::ostringstream d;
        for (const FrontCase* fc : all) {
            if (!fc->ok) {
                pass = false;
                d << fc->name << " failed; ";
                continue;
            }
            const auto& r = fc->result;
            const bool in = r.front.c >= r.pair.c_lower - 1e-9 &&
                            r.front.c <= r.pair.c_upper + 1e-9 &&
                            r.extraction.trace.c_minus >= r.pair.c_lower - 1e-9 &&
                            r.extraction.trace.c_plus <= r.pair.c_upper + 1e-9;
            pass = pass && in;
        }
        d << "c in [-1/eps^2, +1/eps^2] on " << all.size() << " runs";
        report(8, pass, "speed bracket from the sub/super pair", d.str());
    }

    // criterion 10: traveling residual at tau and 2 tau, grid refinement
    {
        bool pass = true;
        std::ostringstream d;
        double worst_res = 0.0, worst_dc = 0.0;
        for (const FrontCase* fc : all) {
            if (!fc->ok) {
                pass = false;
                continue;
            }
            const auto& r = fc->result;
            worst_res = std::max({worst_res, r.front.residual, r.front.residual_2tau});
            if (r.half_step_checked)
                worst_dc = std::max(worst_dc, std::abs(r.front.c - r.c_half_step));
            pass = pass && r.front.residual < 1e-3 && r.front.residual_2tau < 1e-3 &&
                   r.half_step_checked && std::abs(r.front.c - r.c_half_step) < 2e-3 &&
                   r.front.limit_left == Equilibrium::zero &&
                   r.front.limit_right == Equilibrium::one;
        }
        d << "worst residual " << fmt(worst_res) << ", worst half-step dc " << fmt(worst_dc);
        report(10, pass, "traveling residual and grid-refinement stability", d.str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "all";
    try {
        if (mode == "core" || mode == "all") {
            criterion_1_hypotheses();
            criterion_2_equilibria();
            criterion_3_mgf();
            criterion_4_subsuper();
            criterion_5_recursion();
            criterion_9_gap();
        }
        if (mode == "front" || mode == "all") {
            front_criteria();
        }
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance harness error: %s\n", e.what());
        return 1;
    }
    if (g_failures == 0) {
        std::printf("all criteria in group '%s' passed\n", mode.c_str());
        return 0;
    }
    std::printf("%d criterion(s) failed in group '%s'\n", g_failures, mode.c_str());
    return 1;
}
