#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlfront/bounds.hpp"
#include "nlfront/common.hpp"
#include "nlfront/front.hpp"
#include "nlfront/measure.hpp"
#include "nlfront/nonlinearity.hpp"

namespace nlfront {

/// One config file drives every subcommand; each reads the sections it needs.
/// Grid and time carry no defaults on purpose: discretization must be stated.
struct RunConfig {
    Measure measure;
    Nonlinearity nonlinearity = Nonlinearity::cubic(1.0, 0.3);
    double slope_out = 1.0;

    std::optional<GridSpec> grid;  // required by solve commands
    struct Time {
        double dt = 0.0;
        double tau = 1.0;
        double T = 0.0;
    };
    std::optional<Time> time;
    double projection_tol = 1e-6;

    struct Initial {
        std::string type = "ramp";  // ramp | step | csv
        double center = 0.0;
        double width = 2.0;
        std::string path;
    };
    Initial initial;
    double snapshot_dt = 10.0;

    RecursionConfig recursion;
    bool has_recursion = false;

    struct SubSuper {
        double epsilon = 0.05;  // documented default; auto-halved when too large
        int max_halvings = 6;
        int time_samples = 13;
        std::size_t space_samples = 801;
        bool confirm_evolution = false;
    };
    SubSuper subsuper;

    struct Refine {
        double window = 40.0;
        double step = 0.0625;
        int max_transient = 250;
        double transient_tol = 1e-4;
        int sample_iters = 100;
        double speed_consistency_tol = 5e-5;
        double residual_window = 15.0;
        bool check_half_step = true;
    };
    Refine refine;

    struct Speed {
        double T = 60.0;
        double window = 50.0;
        double step = 0.125;
        double record_dt = 0.5;
        double edge_margin = 5.0;
    };
    Speed speed;

    struct Bounds {
        double sigma = 0.1;  // documented default; must stay below f'(alpha)
        double lambda_min = 1e-3;
        double lambda_max = 1e3;
        int points = 181;
        double refine_tol = 1e-10;
        double gap_tol = 1e-6;
    };
    Bounds bounds;

    struct Hypotheses {
        int trials = 100;
        double t_constant = 10.0;
    };
    Hypotheses hypotheses;

    struct Mgf {
        std::vector<double> lambdas{-1.0, -0.5, 0.0, 0.5, 1.0};
        int K = 40;
        bool cross_check = true;
        double cross_grid_halfwidth = 10.0;
        double cross_grid_step = 0.0025;
        double cross_window = 2.0;
        double cross_dt = 0.02;
        double ramp_width = 6.0;
    };
    Mgf mgf;

    std::string out_dir = "out";
    bool svg = false;
    std::uint64_t seed = 20240101;

    nlohmann::json raw;
};

Measure parse_measure(const nlohmann::json& j);
Nonlinearity parse_nonlinearity(const nlohmann::json& j);
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Cross-field validation shared by the solve commands (stability budget,
/// atom/grid alignment, alpha and sigma ranges). Throws ValidationError.
void validate_for_solve(const RunConfig& cfg);

}  // namespace nlfront
