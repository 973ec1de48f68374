#pragma once

#include <cstdint>
#include <functional>

#include "nlfront/field.hpp"
#include "nlfront/measure.hpp"
#include "nlfront/nonlinearity.hpp"
#include "nlfront/profile.hpp"

namespace nlfront {

struct SemiflowConfig {
    Measure measure;
    ExtendedNonlinearity reaction;
    double dt = 0.1;
    GridSpec grid;
    double projection_tol = 1e-6;
};

struct EvolveStats {
    double projection_correction = 0.0;  // accumulated over the steps taken
    long steps = 0;
};

/// The evolution operator of u_t = mu*u - u + f(u) on Profiles: classical RK4
/// in time, exact PL convolution in space, monotone projection with a logged
/// budget after each step. Tails evolve by the spatially constant ODE, which
/// is exact for profiles that are flat near the grid edges.
class Semiflow {
public:
    explicit Semiflow(const SemiflowConfig& cfg);

    /// Generic reaction term (used for the monostable sub-front reductions,
    /// which fall outside the bistable Nonlinearity type).
    Semiflow(Measure measure, std::function<double(double)> reaction,
             double reaction_lipschitz, double dt, GridSpec grid, double projection_tol);

    const GridSpec& grid() const { return grid_; }
    double dt() const { return dt_; }
    double mass() const { return conv_.mass(); }
    double projection_tol() const { return projection_tol_; }

    /// G(u) = mu*u - u + f(u): the tangent field (not monotone).
    Field rhs(const Profile& u) const;

    /// One RK4 step of size dt, then monotone projection.
    /// Throws when a single step needs more repair than projection_tol.
    Profile step(const Profile& u, EvolveStats* stats = nullptr) const;

    /// Repeated steps plus one final partial step to land exactly on t.
    Profile evolve(const Profile& u, double t, EvolveStats* stats = nullptr) const;

private:
    Profile step_of_size(const Profile& u, double h, EvolveStats* stats) const;

    GridSpec grid_;
    ConvolutionOperator conv_;
    std::function<double(double)> f_;
    double dt_;
    double projection_tol_;
};

/// RK4 integration of the linear flow v_t = mhat * v (no monotonicity, any
/// total mass); tails follow l' = mass(mhat) * l.
Field evolve_linear(const Field& v, const Measure& mhat, double t, double dt);

struct HypothesesReport {
    int trials = 0;
    std::uint64_t seed = 0;
    double tau = 1.0;

    bool order_ok = false;
    double worst_order_violation = 0.0;

    bool translation_ok = false;
    double worst_translation_defect = 0.0;

    bool bistable_ok = false;
    double margin_below_alpha = 0.0;  // min over gamma<alpha of gamma - Q^T[gamma]
    double margin_above_alpha = 0.0;  // min over gamma>alpha of Q^T[gamma] - gamma
    bool alpha_fixed_ok = false;
    double alpha_drift = 0.0;

    bool continuity_ok = false;
    double continuity_ratio = 0.0;       // output/input perturbation, vs Lipschitz bound
    double small_time_defect = 0.0;      // sup_dist(Q^s[u], u) for small s

    double projection_budget = 0.0;

    bool all_ok() const {
        return order_ok && translation_ok && bistable_ok && alpha_fixed_ok && continuity_ok;
    }
};

/// Numerical certification of the order-preservation / translation /
/// bistability / continuity hypotheses on randomized profiles.
HypothesesReport certify_hypotheses(const SemiflowConfig& cfg, int trials, std::uint64_t seed,
                                    double tau = 1.0, double t_constant = 10.0);

}  // namespace nlfront
