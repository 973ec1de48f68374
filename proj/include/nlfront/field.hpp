#pragma once

#include <vector>

#include "nlfront/common.hpp"
#include "nlfront/profile.hpp"

namespace nlfront {

/// Sampled function on a uniform grid with constant tails. No range or
/// monotonicity invariants: tangent fields, linear-flow states, residuals.
struct Field {
    GridSpec grid{};
    std::vector<double> values{};
    double left_tail = 0.0;
    double right_tail = 0.0;

    static Field from_profile(const Profile& u) {
        return Field{u.grid(), u.values(), u.left_tail(), u.right_tail()};
    }

    double operator()(double x) const {
        if (x < grid.x_min) return left_tail;
        const double xm = grid.x_max();
        if (x > xm) return right_tail;
        if (x >= xm) return values.back();
        const double t = (x - grid.x_min) / grid.step;
        const auto i = std::size_t(t);
        return values[i] + (t - double(i)) * (values[i + 1] - values[i]);
    }
};

inline double sup_dist(const Field& a, const Field& b, Interval window) {
    double d = 0.0;
    const auto& g = a.grid;
    for (std::size_t i = 0; i < g.points; ++i) {
        const double x = g.x_at(i);
        if (x < window.lo || x > window.hi) continue;
        d = std::max(d, std::abs(a.values[i] - b(x)));
    }
    return d;
}

}  // namespace nlfront
