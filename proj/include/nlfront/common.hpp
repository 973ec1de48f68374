#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlfront {

/// Solver-side failure (assertion broken, iteration did not converge, ...).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input: config values, preconditions, malformed files.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
};

/// Uniform grid: nodes x_min + i*step, i = 0..points-1.
struct GridSpec {
    double x_min = 0.0;
    double step = 1.0;
    std::size_t points = 0;

    double x_max() const { return x_min + step * double(points - 1); }
    double x_at(std::size_t i) const { return x_min + step * double(i); }

    static GridSpec over(double lo, double hi, double step) {
        if (!(step > 0.0) || !(hi > lo))
            throw ValidationError("grid: need step > 0 and max > min");
        auto n = std::size_t(std::ceil((hi - lo) / step - 1e-9)) + 1;
        return GridSpec{lo, step, n};
    }

    bool aligned_with(const GridSpec& other, double rel_tol = 1e-9) const {
        if (std::abs(step - other.step) > rel_tol * step) return false;
        const double off = (other.x_min - x_min) / step;
        return std::abs(off - std::round(off)) < 1e-6;
    }
};

inline bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) { out[0] = lo; return out; }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return out;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
    auto e = linspace(std::log(lo), std::log(hi), n);
    for (auto& v : e) v = std::exp(v);
    return e;
}

}  // namespace nlfront
