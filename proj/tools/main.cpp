#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlfront/driver.hpp"
#include "nlfront/io.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    bool strict = false;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file")->required();
    cmd->add_option("--out", o.out_dir, "output directory (overrides config)");
    cmd->add_option("--jobs", o.jobs, "parallelism across independent n values");
    cmd->add_flag("--strict", o.strict, "exit 1 when a certification check fails");
    cmd->add_flag("--svg", o.svg, "emit SVG plots");
}

nlfront::RunConfig load(const CommonOpts& o) {
    nlfront::RunConfig cfg = nlfront::load_run_config(o.config_path);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.svg) cfg.svg = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traveling-front solver for the nonlocal bistable equation "
                 "u_t = mu*u - u + f(u)"};
    app.require_subcommand(1);

    CommonOpts o_sim, o_front, o_bounds, o_hyp, o_mgf, o_sub;
    auto* sim = app.add_subcommand("simulate", "evolve an initial profile, emit snapshots");
    add_common(sim, o_sim);
    auto* front = app.add_subcommand(
        "front", "full pipeline: sub/super pair, fixed-point recursion, front extraction");
    add_common(front, o_front);
    auto* bounds = app.add_subcommand("bounds", "exponential-moment speed bounds and gap");
    add_common(bounds, o_bounds);
    auto* hyp = app.add_subcommand("hypotheses", "certify the monotone-semiflow hypotheses");
    add_common(hyp, o_hyp);
    auto* mgf = app.add_subcommand("mgf-check", "measure-exponential MGF identity check");
    add_common(mgf, o_mgf);
    auto* sub = app.add_subcommand("subsuper-check", "sub/super-solution residual check");
    add_common(sub, o_sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            auto rep = nlfront::run_simulate(load(o_sim));
            std::cout << rep.dump(2) << "\n";
            return 0;
        }
        if (front->parsed()) {
            auto cfg = load(o_front);
            auto r = nlfront::run_front_pipeline(cfg, o_front.jobs);
            nlfront::write_front_outputs(cfg, r);
            std::cout << r.report.dump(2) << "\n";
            return 0;
        }
        if (bounds->parsed()) {
            auto rep = nlfront::run_bounds(load(o_bounds));
            std::cout << rep.dump(2) << "\n";
            return 0;
        }
        if (hyp->parsed()) {
            auto rep = nlfront::run_hypotheses(load(o_hyp));
            std::cout << rep.dump(2) << "\n";
            if (o_hyp.strict && !rep.value("all_ok", false)) return 1;
            return 0;
        }
        if (mgf->parsed()) {
            auto rep = nlfront::run_mgf_check(load(o_mgf));
            std::cout << rep.dump(2) << "\n";
            return 0;
        }
        if (sub->parsed()) {
            auto rep = nlfront::run_subsuper_check(load(o_sub));
            std::cout << rep.dump(2) << "\n";
            return 0;
        }
    } catch (const nlfront::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const nlfront::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
