#include "nlfront/profile.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nlfront {

namespace {

constexpr double kTinyRepair = 1e-11;  // silent repair budget for float drift

void union_nodes(const Profile& a, const Profile& b, Interval window, std::vector<double>& out) {
    out.clear();
    for (const auto* u : {&a, &b}) {
        const auto& g = u->grid();
        // first node index inside the window
        auto lo = std::max<std::ptrdiff_t>(0, std::ptrdiff_t(std::ceil((window.lo - g.x_min) / g.step - 1e-9)));
        auto hi = std::min<std::ptrdiff_t>(std::ptrdiff_t(g.points) - 1,
                                           std::ptrdiff_t(std::floor((window.hi - g.x_min) / g.step + 1e-9)));
        for (std::ptrdiff_t i = lo; i <= hi; ++i) out.push_back(g.x_at(std::size_t(i)));
    }
    out.push_back(window.lo);
    out.push_back(window.hi);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace

MonotoneProjection monotone_project(const std::vector<double>& raw) {
    MonotoneProjection p;
    p.values.resize(raw.size());
    double running = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < raw.size(); ++i) {
        running = std::max(running, raw[i]);
        double v = std::clamp(running, 0.0, 1.0);
        p.values[i] = v;
        p.correction = std::max(p.correction, std::abs(v - raw[i]));
    }
    return p;
}

Profile::Profile(GridSpec grid, std::vector<double> values, double left_tail, double right_tail)
    : grid_(grid), values_(std::move(values)), left_tail_(left_tail), right_tail_(right_tail) {
    if (grid_.points != values_.size() || values_.empty())
        throw ValidationError("profile: grid/value size mismatch");
    if (left_tail_ < -kTinyRepair || right_tail_ > 1.0 + kTinyRepair || left_tail_ > right_tail_ + kTinyRepair)
        throw ValidationError("profile: tails outside [0,1] or out of order");
    left_tail_ = std::clamp(left_tail_, 0.0, 1.0);
    right_tail_ = std::clamp(right_tail_, 0.0, 1.0);
    double prev = -0.0;
    for (auto& v : values_) {
        if (v < prev - kTinyRepair || v < -kTinyRepair || v > 1.0 + kTinyRepair)
            throw ValidationError("profile: samples not nondecreasing in [0,1] (use Profile::projected)");
        v = std::clamp(std::max(v, prev), 0.0, 1.0);
        prev = v;
    }
    if (left_tail_ > values_.front() + kTinyRepair || values_.back() > right_tail_ + kTinyRepair)
        throw ValidationError("profile: tails inconsistent with edge samples");
    left_tail_ = std::min(left_tail_, values_.front());
    right_tail_ = std::max(right_tail_, values_.back());
}

Profile::Profile(GridSpec grid, std::vector<double> values)
    : Profile(grid, values, values.empty() ? 0.0 : values.front(),
              values.empty() ? 1.0 : values.back()) {}

Profile Profile::projected(GridSpec grid, std::vector<double> values,
                           double left_tail, double right_tail, double* correction) {
    auto proj = monotone_project(values);
    if (correction) *correction = proj.correction;
    left_tail = std::clamp(left_tail, 0.0, proj.values.front());
    right_tail = std::clamp(right_tail, proj.values.back(), 1.0);
    return Profile(grid, std::move(proj.values), left_tail, right_tail);
}

Profile Profile::constant(const GridSpec& grid, double value) {
    return Profile(grid, std::vector<double>(grid.points, value), value, value);
}

Profile Profile::ramp(const GridSpec& grid, double x0, double x1) {
    if (!(x1 > x0)) throw ValidationError("ramp: need x1 > x0");
    std::vector<double> v(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i)
        v[i] = std::clamp((grid.x_at(i) - x0) / (x1 - x0), 0.0, 1.0);
    return Profile(grid, std::move(v), 0.0, 1.0);
}

Profile Profile::sample(const GridSpec& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) v[i] = std::clamp(f(grid.x_at(i)), 0.0, 1.0);
    auto proj = monotone_project(v);
    if (proj.correction > 1e-9)
        throw ValidationError("Profile::sample: function is not nondecreasing");
    return Profile(grid, std::move(proj.values));  // tails = end samples
}

double Profile::operator()(double x) const {
    if (x < grid_.x_min) return left_tail_;
    const double xm = grid_.x_max();
    if (x > xm) return right_tail_;
    if (x >= xm) return values_.back();
    const double t = (x - grid_.x_min) / grid_.step;
    const auto i = std::size_t(t);
    const double frac = t - double(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

Profile translate(const Profile& u, double h) {
    GridSpec g = u.grid();
    g.x_min += h;
    return Profile(g, u.values(), u.left_tail(), u.right_tail());
}

Profile resample(const Profile& u, const GridSpec& grid) {
    std::vector<double> v(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) v[i] = u(grid.x_at(i));
    return Profile(grid, std::move(v), u.left_tail(), u.right_tail());
}

Profile affine_precompose(const Profile& u, const AffineMap& rho) {
    if (!(rho.slope > 0.0)) throw ValidationError("affine_precompose: slope must be positive");
    const auto& g = u.grid();
    // cover the preimage of u's grid with the same step
    const double lo = rho.inverse(g.x_min);
    const double hi = rho.inverse(g.x_max());
    GridSpec target = GridSpec::over(lo, std::max(hi, lo + g.step), g.step);
    return affine_precompose(u, rho, target);
}

Profile affine_precompose(const Profile& u, const AffineMap& rho, const GridSpec& target) {
    if (!(rho.slope > 0.0)) throw ValidationError("affine_precompose: slope must be positive");
    std::vector<double> v(target.points);
    for (std::size_t i = 0; i < target.points; ++i) v[i] = u(rho(target.x_at(i)));
    return Profile(target, std::move(v), u.left_tail(), u.right_tail());
}

double order_violation(const Profile& u1, const Profile& u2) {
    const double lo = std::min(u1.grid().x_min, u2.grid().x_min);
    const double hi = std::max(u1.grid().x_max(), u2.grid().x_max());
    static thread_local std::vector<double> xs;
    union_nodes(u1, u2, {lo, hi}, xs);
    double worst = std::max(0.0, u1.left_tail() - u2.left_tail());
    worst = std::max(worst, u1.right_tail() - u2.right_tail());
    for (double x : xs) worst = std::max(worst, u1(x) - u2(x));
    return worst;
}

bool leq(const Profile& u1, const Profile& u2, double tol) {
    return order_violation(u1, u2) <= tol;
}

double sup_dist(const Profile& u1, const Profile& u2, Interval window) {
    static thread_local std::vector<double> xs;
    union_nodes(u1, u2, window, xs);
    double d = 0.0;
    for (double x : xs) d = std::max(d, std::abs(u1(x) - u2(x)));
    return d;
}

double sup_dist(const Profile& u1, const Profile& u2) {
    const double lo = std::min(u1.grid().x_min, u2.grid().x_min);
    const double hi = std::max(u1.grid().x_max(), u2.grid().x_max());
    double d = sup_dist(u1, u2, {lo, hi});
    d = std::max(d, std::abs(u1.left_tail() - u2.left_tail()));
    d = std::max(d, std::abs(u1.right_tail() - u2.right_tail()));
    return d;
}

double level_crossing(const Profile& u, double level) {
    if (!(u.left_tail() < level && level < u.right_tail()))
        throw SolverError("level_crossing: level not crossed");
    const auto& v = u.values();
    const auto& g = u.grid();
    if (v.front() >= level) return g.x_min;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] >= level) {
            const double dv = v[i] - v[i - 1];
            const double frac = dv > 0.0 ? (level - v[i - 1]) / dv : 1.0;
            return g.x_at(i - 1) + frac * g.step;
        }
    }
    return g.x_max();  // level sits between the last sample and the right tail
}

Profile sub_front_transform(const Profile& u, FrontSide side, double alpha,
                            TransformDirection direction) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("sub_front_transform: alpha in (0,1)");
    const auto& g = u.grid();
    const auto& v = u.values();

    auto reflected_grid = [&] {
        return GridSpec{-g.x_max(), g.step, g.points};
    };

    std::vector<double> w(g.points);
    if (side == FrontSide::minus && direction == TransformDirection::forward) {
        // R_-[u](x) = alpha (1 - u(-x))
        for (std::size_t i = 0; i < g.points; ++i) w[i] = alpha * (1.0 - v[g.points - 1 - i]);
        return Profile(reflected_grid(), std::move(w), alpha * (1.0 - u.right_tail()),
                       alpha * (1.0 - u.left_tail()));
    }
    if (side == FrontSide::minus && direction == TransformDirection::inverse) {
        // S_-[u](x) = 1 - u(-x)/alpha, defined on range [0, alpha]
        for (double s : v)
            if (s > alpha + 1e-12) throw ValidationError("sub_front_transform: values exceed alpha");
        for (std::size_t i = 0; i < g.points; ++i)
            w[i] = 1.0 - std::min(v[g.points - 1 - i], alpha) / alpha;
        return Profile(reflected_grid(), std::move(w), 1.0 - std::min(u.right_tail(), alpha) / alpha,
                       1.0 - std::min(u.left_tail(), alpha) / alpha);
    }
    if (side == FrontSide::plus && direction == TransformDirection::forward) {
        // R_+[u](x) = (1-alpha) u(x) + alpha
        for (std::size_t i = 0; i < g.points; ++i) w[i] = (1.0 - alpha) * v[i] + alpha;
        return Profile(g, std::move(w), (1.0 - alpha) * u.left_tail() + alpha,
                       (1.0 - alpha) * u.right_tail() + alpha);
    }
    // S_+[u](x) = (u(x) - alpha) / (1-alpha), defined on range [alpha, 1]
    for (double s : v)
        if (s < alpha - 1e-12) throw ValidationError("sub_front_transform: values below alpha");
    for (std::size_t i = 0; i < g.points; ++i)
        w[i] = (std::max(v[i], alpha) - alpha) / (1.0 - alpha);
    return Profile(g, std::move(w), (std::max(u.left_tail(), alpha) - alpha) / (1.0 - alpha),
                   (std::max(u.right_tail(), alpha) - alpha) / (1.0 - alpha));
}

}  // namespace nlfront
