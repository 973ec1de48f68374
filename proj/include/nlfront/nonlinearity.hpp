#pragma once

#include <utility>
#include <vector>

#include "nlfront/common.hpp"

namespace nlfront {

/// Bistable reaction term: f(0) = f(alpha) = f(1) = 0, f < 0 on (0,alpha),
/// f > 0 on (alpha,1). Either the parametric cubic lambda*u*(u-alpha)*(1-u)
/// or a tabulated PL function on [0,1].
class Nonlinearity {
public:
    static Nonlinearity cubic(double lambda, double alpha);
    /// knots: (u, f(u)) pairs on [0,1], must include u = 0, alpha, 1 with f = 0.
    static Nonlinearity tabulated(double alpha, std::vector<std::pair<double, double>> knots);

    double operator()(double u) const;
    double alpha() const { return alpha_; }
    double lipschitz() const { return lipschitz_; }
    double derivative_at_alpha() const { return derivative_at_alpha_; }

    /// Sign pattern and zero checks on a sampled grid; throws on violation.
    void validate_bistable(int samples = 512) const;
    /// Additional Theorem-1 requirement f'(alpha) > 0.
    void require_unstable_middle() const;

private:
    Nonlinearity() = default;
    bool is_cubic_ = true;
    double lambda_ = 1.0;
    double alpha_ = 0.5;
    double lipschitz_ = 0.0;
    double derivative_at_alpha_ = 0.0;
    std::vector<std::pair<double, double>> knots_;
};

/// f extended linearly outside [0,1]:
///   fhat(u) = -slope_out * u        (u < 0)   > 0
///   fhat(u) = f(u)                  (0 <= u <= 1)
///   fhat(u) = -slope_out * (u - 1)  (u > 1)   < 0
class ExtendedNonlinearity {
public:
    ExtendedNonlinearity() = default;
    ExtendedNonlinearity(Nonlinearity base, double slope_out);

    double operator()(double u) const {
        if (u < 0.0) return -slope_out_ * u;
        if (u > 1.0) return -slope_out_ * (u - 1.0);
        return base_(u);
    }
    const Nonlinearity& base() const { return base_; }
    double slope_out() const { return slope_out_; }
    double alpha() const { return base_.alpha(); }
    double lipschitz() const { return std::max(base_.lipschitz(), slope_out_); }

private:
    Nonlinearity base_ = Nonlinearity::cubic(1.0, 0.5);
    double slope_out_ = 1.0;
};

ExtendedNonlinearity extend_nonlinearity(const Nonlinearity& f, double slope_out);

}  // namespace nlfront
