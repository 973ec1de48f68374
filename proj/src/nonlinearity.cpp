#include "nlfront/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace nlfront {

Nonlinearity Nonlinearity::cubic(double lambda, double alpha) {
    if (!(lambda > 0.0)) throw ValidationError("cubic nonlinearity: lambda must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("cubic nonlinearity: alpha must lie in (0,1)");
    Nonlinearity f;
    f.is_cubic_ = true;
    f.lambda_ = lambda;
    f.alpha_ = alpha;
    f.derivative_at_alpha_ = lambda * alpha * (1.0 - alpha);
    // f'(u) = lambda(-3u^2 + 2(1+alpha)u - alpha); |f'| peaks at an endpoint
    // or at the interior stationary point of f'.
    const double interior = (1.0 + alpha) / 3.0;
    double m = std::max(std::abs(-lambda * alpha), std::abs(lambda * (alpha - 1.0)));
    const double fp = lambda * (-3.0 * interior * interior + 2.0 * (1.0 + alpha) * interior - alpha);
    f.lipschitz_ = std::max(m, std::abs(fp));
    return f;
}

Nonlinearity Nonlinearity::tabulated(double alpha, std::vector<std::pair<double, double>> knots) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("tabulated nonlinearity: alpha must lie in (0,1)");
    if (knots.size() < 3) throw ValidationError("tabulated nonlinearity: need at least 3 knots");
    std::sort(knots.begin(), knots.end());
    if (std::abs(knots.front().first) > 1e-12 || std::abs(knots.back().first - 1.0) > 1e-12)
        throw ValidationError("tabulated nonlinearity: knots must span [0,1]");
    Nonlinearity f;
    f.is_cubic_ = false;
    f.alpha_ = alpha;
    f.knots_ = std::move(knots);
    double lip = 0.0;
    for (std::size_t i = 0; i + 1 < f.knots_.size(); ++i) {
        const double du = f.knots_[i + 1].first - f.knots_[i].first;
        if (!(du > 0.0)) throw ValidationError("tabulated nonlinearity: duplicate knot");
        lip = std::max(lip, std::abs(f.knots_[i + 1].second - f.knots_[i].second) / du);
    }
    f.lipschitz_ = lip;
    const double h = 1e-4;
    f.derivative_at_alpha_ = (f(std::min(alpha + h, 1.0)) - f(std::max(alpha - h, 0.0))) /
                             (std::min(alpha + h, 1.0) - std::max(alpha - h, 0.0));
    return f;
}

double Nonlinearity::operator()(double u) const {
    if (is_cubic_) return lambda_ * u * (u - alpha_) * (1.0 - u);
    if (u <= knots_.front().first) return knots_.front().second;
    if (u >= knots_.back().first) return knots_.back().second;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), std::make_pair(u, 1e300));
    const auto& [u1, f1] = *it;
    const auto& [u0, f0] = *(it - 1);
    return f0 + (f1 - f0) * (u - u0) / (u1 - u0);
}

void Nonlinearity::validate_bistable(int samples) const {
    const auto& f = *this;
    if (std::abs(f(0.0)) > 1e-12 || std::abs(f(alpha_)) > 1e-12 || std::abs(f(1.0)) > 1e-12)
        throw ValidationError("nonlinearity: f must vanish at 0, alpha and 1");
    for (int i = 1; i < samples; ++i) {
        const double u = alpha_ * double(i) / double(samples);
        if (u > 1e-9 && u < alpha_ - 1e-9 && !(f(u) < 0.0))
            throw ValidationError("nonlinearity: f must be negative on (0,alpha)");
    }
    for (int i = 1; i < samples; ++i) {
        const double u = alpha_ + (1.0 - alpha_) * double(i) / double(samples);
        if (u > alpha_ + 1e-9 && u < 1.0 - 1e-9 && !(f(u) > 0.0))
            throw ValidationError("nonlinearity: f must be positive on (alpha,1)");
    }
}

void Nonlinearity::require_unstable_middle() const {
    if (!(derivative_at_alpha_ > 0.0))
        throw ValidationError("nonlinearity: f'(alpha) must be positive for the front pathway");
}

ExtendedNonlinearity::ExtendedNonlinearity(Nonlinearity base, double slope_out)
    : base_(std::move(base)), slope_out_(slope_out) {
    if (!(slope_out_ > 0.0))
        throw ValidationError("extended nonlinearity: slope_out must be positive");
}

ExtendedNonlinearity extend_nonlinearity(const Nonlinearity& f, double slope_out) {
    return ExtendedNonlinearity(f, slope_out);
}

}  // namespace nlfront
