#pragma once

#include <optional>
#include <vector>

#include "nlfront/common.hpp"
#include "nlfront/measure.hpp"
#include "nlfront/nonlinearity.hpp"
#include "nlfront/profile.hpp"
#include "nlfront/semiflow.hpp"

namespace nlfront {

/// C^1 ramp: 0 on (-inf,0], 1 on [1,inf), strictly increasing inside.
/// Default shape is the smoothstep z^2 (3 - 2z). epsilon is the spatial
/// scale the traveling sub/super-solutions are built with.
struct RampFn {
    double epsilon = 0.05;

    double operator()(double z) const {
        if (z <= 0.0) return 0.0;
        if (z >= 1.0) return 1.0;
        return z * z * (3.0 - 2.0 * z);
    }
    double derivative(double z) const {
        if (z <= 0.0 || z >= 1.0) return 0.0;
        return 6.0 * z * (1.0 - z);
    }
};

/// Traveling sub/super-solution pair
///   lower: max(rho(eps x) - (1-alpha)/4, 0), speed  -1/eps^2
///   upper: min(rho(eps x + 1) + alpha/4, 1), speed  +1/eps^2
/// with the defining inequalities verified pointwise on a space-time grid.
struct SubSuperPair {
    Profile psi_lower;
    Profile psi_upper;
    double c_lower = 0.0;
    double c_upper = 0.0;
    double delta = 0.0;    // reaction margin on the corner bands
    double C_const = 0.0;  // min ramp slope on the middle band
    double residual_lower = 0.0;  // min of the sub-solution inequality, >= 0 means verified
    double residual_upper = 0.0;
    double epsilon = 0.0;
    double alpha = 0.0;
};

struct SubSuperOptions {
    int time_samples = 13;
    double t_max = 1.0;
    std::size_t space_samples = 801;
};

/// Throws SolverError("epsilon too large ...") when a residual is negative.
SubSuperPair build_sub_super(const ExtendedNonlinearity& fhat, const Measure& m, double eps,
                             const RampFn& ramp, const GridSpec& grid,
                             const SubSuperOptions& opts = {});

/// Halves eps (at most max_halvings times) until the residual check passes.
SubSuperPair build_sub_super_auto(const ExtendedNonlinearity& fhat, const Measure& m,
                                  double eps0, int max_halvings, const GridSpec& grid,
                                  const SubSuperOptions& opts = {});

struct RecursionConfig {
    std::vector<int> n_list;
    double tau = 1.0;
    double fixpoint_tol = 1e-6;
    int max_iters = 400;
    double sandwich_tol = 1e-8;
    double xi_cauchy_tol = 0.05;
    double N0 = 0.0;        // tail margin; derived from the pair when <= 0
    double level_lo = -1.0; // crossing levels; derived when < 0
    double level_hi = -1.0;
};

struct FixedPointResult {
    int n = 0;
    Profile phi;
    double residual = 0.0;
    int iterations = 0;
    double projection_budget = 0.0;
    std::vector<double> increments;
};

/// Monotone iteration of Q_n = Q^tau ∘ A_n from the shifted sub-solution:
/// sandwich and iterate monotonicity are asserted every step.
FixedPointResult perturbed_fixed_point(int n, const SubSuperPair& pair,
                                       const RecursionConfig& rc, const Semiflow& flow);

enum class Equilibrium { zero, alpha, one };
double equilibrium_value(Equilibrium e, double alpha);

/// Snaps the two tails to the nearest of {0, alpha, 1} within tol; throws
/// "profile not settled" otherwise.
std::pair<Equilibrium, Equilibrium> classify_limits(const Profile& phi, double alpha,
                                                    double tol);

enum class Branch { minus, plus };

struct FrontResult {
    double c = 0.0;
    Profile phi;
    double residual = 0.0;       // sup_dist(Q^tau[phi](.-c tau), phi) on the window
    double residual_2tau = 0.0;
    Equilibrium limit_left = Equilibrium::zero;
    Equilibrium limit_right = Equilibrium::one;
    Branch branch = Branch::minus;
    double c_lower = 0.0;
    double c_upper = 0.0;
};

struct RecursionTraceRow {
    int n = 0;
    double residual = 0.0;
    int iterations = 0;
    double y = 0.0, z = 0.0;
    double y_over_n = 0.0, z_over_n = 0.0;
};

struct RecursionTrace {
    std::vector<RecursionTraceRow> rows;
    double xi_minus = 0.0, xi_plus = 0.0;
    double c_minus = 0.0, c_plus = 0.0;
    double level_lo = 0.0, level_hi = 0.0;
    double N0 = 0.0;
};

struct ExtractResult {
    RecursionTrace trace;
    FrontResult minus_branch;
    FrontResult plus_branch;
    /// The branch with limits (0,1) and the smaller traveling residual.
    Branch accepted = Branch::minus;
};

/// Level crossings y_n, z_n per converged fixed point; xi and the speeds
/// c_-/c_+ from the affine-rescaling limit formulas (difference quotients
/// across n_list, Richardson-extrapolated when the list is geometric);
/// recentered candidate profiles with their traveling residuals.
ExtractResult extract_front(const std::vector<FixedPointResult>& fixed_points,
                            const SubSuperPair& pair, const RecursionConfig& rc,
                            const Semiflow& flow, Interval window,
                            double classify_tol = 0.05);

struct RefineOptions {
    double tau = 1.0;
    double alpha = 0.5;
    int max_transient = 250;       // shape-relaxation budget
    double transient_tol = 1e-4;   // shape delta ending the transient
    int sample_iters = 100;        // drift-regression window after the transient
    double speed_consistency_tol = 5e-5;  // agreement of the two regression halves
    double level = 0.5;
    Interval residual_window{-15.0, 15.0};
    double classify_tol = 0.05;
};

/// Moving-frame polish: evolve by tau, recenter the level crossing to the
/// origin, repeat. After the shape transient the speed is the least-squares
/// slope of the accumulated drift (the grid front is quasi-periodic in the
/// sub-cell phase, so instantaneous shifts wobble; the regression averages
/// that out). Front convention u(t,x) = phi(x + c t); residuals re-measured
/// at tau and 2 tau.
FrontResult refine_front(const Profile& seed, const Semiflow& flow, const RefineOptions& opts);

struct SpeedMeasureOptions {
    double record_dt = 0.5;
    double fit_fraction = 0.5;  // use the trailing fraction of [0,T]
    double level = -1.0;        // < 0: use alpha
    double edge_margin = 5.0;
};

struct SpeedTrack {
    std::vector<double> times;
    std::vector<double> crossings;
    double speed = 0.0;  // front convention: c = -dx/dt
};

/// Direct-simulation speed oracle: evolve u0, track the level crossing,
/// least-squares slope over the trailing window, negated.
SpeedTrack measure_speed_track(const Profile& u0, double T, const Semiflow& flow, double alpha,
                               const SpeedMeasureOptions& opts = {});
double measure_speed(const Profile& u0, double T, const Semiflow& flow, double alpha,
                     const SpeedMeasureOptions& opts = {});

struct SubFrontResult {
    double c = 0.0;
    Profile phi;
    double limit_left = 0.0;
    double limit_right = 0.0;
    double transformed_speed = 0.0;
};

/// Manufactures a traveling sub-front (0 -> alpha or alpha -> 1) through the
/// monostable reduction: conjugate the flow by R_-/R_+, run the reduced
/// monostable front from steep data, transform back.
SubFrontResult make_monostable_subfront(FrontSide side, const Nonlinearity& f, const Measure& m,
                                        const GridSpec& grid, double dt, double T,
                                        double projection_tol = 1e-5);

}  // namespace nlfront
