#pragma once

#include <optional>
#include <vector>

#include "nlfront/common.hpp"
#include "nlfront/measure.hpp"

namespace nlfront {

enum class BoundDirection { minus, plus };

/// Exponential-moment speed bound query: the curve
///   minus: (M(+lam) - 1 + sigma) / lam
///   plus:  (M(-lam) - 1 + sigma) / lam
/// over lam > 0, where M is the measure's MGF.
struct SpeedBoundQuery {
    Measure measure;
    double sigma = 0.1;
    BoundDirection direction = BoundDirection::minus;
    std::vector<double> lambda_grid;  // strictly increasing, positive; default log grid
    double refine_tol = 1e-10;
};

struct SpeedBoundReport {
    double value = 0.0;
    double lambda_star = 0.0;
    bool attained = true;  // false when the infimum is only approached as lam -> inf
    std::optional<double> gap;  // set by hypothesis7_gap
    bool gap_positive = false;
};

double bound_curve(const SpeedBoundQuery& q, double lam);

/// Grid scan plus golden-section refinement around the bracketing triple.
/// A minimum that keeps descending past the grid is chased up to a cap and
/// reported as a non-attained boundary infimum.
SpeedBoundReport infimum(const SpeedBoundQuery& q);

/// Lemma-11 style gap: infimum(minus) + infimum(plus) for a unit-mass
/// measure. Positive whenever the measure is not concentrated at 0.
SpeedBoundReport hypothesis7_gap(const Measure& m, double sigma, double gap_tol = 1e-6);

/// Checks the sub-front speed inequality for a measured traveling sub-front:
///   limits (0,alpha):  inf_minus <= -c  (within tol)
///   limits (alpha,1):  inf_plus  <= +c  (within tol)
/// Throws for (0,1) fronts: the bound applies to sub-fronts only.
bool check_subfront_speed_bound(double front_speed, double limit_left, double limit_right,
                                double alpha, const Measure& m, double sigma,
                                double tol = 1e-6);

std::vector<double> default_lambda_grid();

}  // namespace nlfront
