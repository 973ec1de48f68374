#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nlfront/common.hpp"
#include "nlfront/field.hpp"
#include "nlfront/profile.hpp"

namespace nlfront {

/// Nonnegative piecewise-linear density on a uniform grid, zero outside
/// [x_min, x_max] (jumps at the support edges are allowed).
struct PiecewiseLinearDensity {
    double x_min = 0.0;
    double step = 1.0;
    std::vector<double> values;

    bool empty() const { return values.empty(); }
    double x_max() const { return x_min + step * double(values.size() - 1); }
    double mass() const;            // exact integral of the PL function (trapezoid)
    double operator()(double y) const;
};

/// Finite Borel measure on R: atoms plus a compactly supported PL density.
class Measure {
public:
    struct Atom {
        double loc = 0.0;
        double mass = 0.0;
    };

    Measure() = default;
    Measure(std::vector<Atom> atoms, PiecewiseLinearDensity density);

    static Measure point(double loc, double mass = 1.0);
    static Measure atoms(std::vector<Atom> list);
    /// Constant density 1/(b-a) on [a,b]; step must divide b-a.
    static Measure uniform(double a, double b, double step);
    /// Symmetric triangle on [a,b], unit mass.
    static Measure triangle(double a, double b, double step);
    /// Normal(mean, stddev) truncated to [mean-radius, mean+radius], renormalized to unit mass.
    static Measure gaussian_truncated(double mean, double stddev, double radius, double step);

    const std::vector<Atom>& atom_list() const { return atoms_; }
    const PiecewiseLinearDensity& density() const { return density_; }
    double support_radius() const { return support_radius_; }

private:
    std::vector<Atom> atoms_;
    PiecewiseLinearDensity density_;
    double support_radius_ = 0.0;
};

double total_mass(const Measure& m);

/// M(lam) = sum mass e^{lam loc} + integral density(y) e^{lam y} dy,
/// density part by trapezoid on successively refined grids.
double exp_moment(const Measure& m, double lam);

/// integral g(y) dmu(y) with the same refined-trapezoid density rule.
double integrate(const Measure& m, const std::function<double(double)>& g);

/// Pushforward under y -> -y: mirrors atoms and density, preserves mass.
Measure reflect(const Measure& m);

struct ConvolveMeasureOptions {
    double max_support_radius = 1e6;
    std::optional<double> density_step;  // default: min of the inputs' steps
};

/// m1 * m2: atom locations add, masses multiply; atom x density shifts the
/// density; density x density is integrated exactly per PL segment pair and
/// sampled on the output grid. The density part is rescaled so the total mass
/// is exactly multiplicative.
Measure convolve_measures(const Measure& m1, const Measure& m2,
                          const ConvolveMeasureOptions& opts = {});

/// nu_K = sum_{k=0}^{K} mhat^{*k} / k!  (mhat^{*0} = delta_0): the time-1
/// solution measure of v_t = mhat * v, truncated at order K.
Measure exp_series(const Measure& mhat, int K);

/// Term-magnitude choice of K (relative cutoff on mass^k/k!), capped at 64.
int choose_series_order(const Measure& mhat, double rel_cutoff = 1e-14, int cap = 64);

/// max over lams of the relative error between
/// log exp_moment(exp_series(mhat,K), lam) and exp_moment(mhat, lam).
/// Throws when the K-th term is not < 1e-12 of the running MGF sum at some lam.
double verify_mgf_identity(const Measure& mhat, std::span<const double> lams, int K);

/// (mu * u)(x) = sum mass u(x - loc) + integral density(y) u(x - y) dy on u's
/// grid. Atom offsets snap to the grid (rounding recorded); the density
/// integral is exact for the PL pair. Tails become total_mass * u(-+inf).
Profile convolve(const Measure& m, const Profile& u);
Profile convolve(const Measure& m, const Profile& u, double* atom_rounding_error);

/// Same quadrature on a raw sampled function; no range restriction on the
/// result (used by the linear flow, where total mass may exceed 1).
Field convolve(const Measure& m, const Field& v);
/// Evaluate only on out_grid (exact segment quadrature; any alignment).
Field convolve(const Measure& m, const Field& v, const GridSpec& out_grid);

/// Precompiled convolution against a fixed grid step: integer-shift atoms
/// plus a nonnegative density stencil. apply() works on raw sample vectors
/// with constant tail extension.
class ConvolutionOperator {
public:
    ConvolutionOperator() = default;
    ConvolutionOperator(const Measure& m, double grid_step);

    void apply(std::span<const double> v, double left_tail, double right_tail,
               std::span<double> out) const;
    double mass() const { return mass_; }
    double atom_rounding_error() const { return atom_rounding_error_; }
    /// stencil reach in cells on either side
    std::ptrdiff_t reach() const { return reach_; }

private:
    struct Shift {
        std::ptrdiff_t cells = 0;
        double mass = 0.0;
    };
    std::vector<Shift> shifts_;
    std::vector<double> stencil_;
    std::ptrdiff_t stencil_first_ = 0;  // sample offset of stencil_[0]
    double mass_ = 0.0;
    double atom_rounding_error_ = 0.0;
    std::ptrdiff_t reach_ = 0;
};

}  // namespace nlfront
