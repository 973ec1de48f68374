#pragma once

#include <functional>
#include <vector>

#include "nlfront/common.hpp"

namespace nlfront {

/// Outcome of projecting raw samples onto the monotone-[0,1] cone.
struct MonotoneProjection {
    std::vector<double> values;
    double correction = 0.0;  // max |projected - original|
};

/// Running-max then clamp to [0,1]; minimizes the max deviation among
/// nondecreasing repairs from below.
MonotoneProjection monotone_project(const std::vector<double>& raw);

/// rho(x) = slope * (x - center), slope > 0.
struct AffineMap {
    double slope = 1.0;
    double center = 0.0;
    double operator()(double x) const { return slope * (x - center); }
    double inverse(double y) const { return y / slope + center; }
};

/// Monotone nondecreasing function R -> [0,1]: piecewise linear on a uniform
/// grid, constant tails outside it. The numerical stand-in for the class of
/// monotone left-continuous profiles the semiflow acts on.
class Profile {
public:
    Profile() = default;
    Profile(GridSpec grid, std::vector<double> values, double left_tail, double right_tail);
    Profile(GridSpec grid, std::vector<double> values);  // tails = end samples

    /// Repairs arbitrary samples via monotone_project; correction reported.
    static Profile projected(GridSpec grid, std::vector<double> values,
                             double left_tail, double right_tail,
                             double* correction = nullptr);

    static Profile constant(const GridSpec& grid, double value);
    /// Linear 0 -> 1 ramp between x0 and x1 (steep ramp approximates a step).
    static Profile ramp(const GridSpec& grid, double x0, double x1);
    /// Sample an arbitrary nondecreasing function (clamped to [0,1]).
    static Profile sample(const GridSpec& grid, const std::function<double(double)>& f);

    double operator()(double x) const;  // PL interpolation, constant tails

    const GridSpec& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double left_tail() const { return left_tail_; }
    double right_tail() const { return right_tail_; }

private:
    GridSpec grid_{};
    std::vector<double> values_{};
    double left_tail_ = 0.0;
    double right_tail_ = 0.0;
};

inline double evaluate(const Profile& u, double x) { return u(x); }

/// result(x) = u(x - h). Exact: only the grid origin moves.
Profile translate(const Profile& u, double h);

/// Re-sample onto a target grid with linear interpolation.
Profile resample(const Profile& u, const GridSpec& grid);

/// result(x) = u(rho(x)), resampled onto the preimage of u's grid
/// (or onto `target` when given). Monotone since rho.slope > 0.
Profile affine_precompose(const Profile& u, const AffineMap& rho);
Profile affine_precompose(const Profile& u, const AffineMap& rho, const GridSpec& target);

/// u1 <= u2 + tol at all union grid nodes and on the tails.
bool leq(const Profile& u1, const Profile& u2, double tol);

/// Largest violation of u1 <= u2 (positive when the order fails somewhere).
double order_violation(const Profile& u1, const Profile& u2);

/// max |u1 - u2| over union grid nodes inside the window.
double sup_dist(const Profile& u1, const Profile& u2, Interval window);
double sup_dist(const Profile& u1, const Profile& u2);  // over the union of both grids

/// Smallest x with u(x) >= level. Throws when the level is never crossed.
double level_crossing(const Profile& u, double level);

enum class FrontSide { minus, plus };
enum class TransformDirection { forward, inverse };

/// Lemma-17 style conjugacies between full fronts and sub-fronts:
///   minus/forward : R_-[u](x) = alpha * (1 - u(-x))     (0,1) -> (0,alpha)
///   plus/forward  : R_+[u](x) = (1-alpha) u(x) + alpha  (0,1) -> (alpha,1)
/// inverse applies S_-/S_+ so inverse∘forward = identity up to grid reflection.
Profile sub_front_transform(const Profile& u, FrontSide side, double alpha,
                            TransformDirection direction);

}  // namespace nlfront
