#include "nlfront/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace nlfront {

namespace {

constexpr double kAtomMergeTol = 1e-9;

double segment_bilinear(double len, double f0, double f1, double g0, double g1) {
    // exact integral over a segment of the product of two linear functions
    return len / 6.0 * (f0 * (2.0 * g0 + g1) + f1 * (g0 + 2.0 * g1));
}

std::vector<Measure::Atom> merged_atoms(std::vector<Measure::Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.loc < b.loc; });
    std::vector<Measure::Atom> out;
    for (const auto& a : atoms) {
        if (a.mass == 0.0) continue;
        if (!out.empty() && std::abs(a.loc - out.back().loc) <= kAtomMergeTol)
            out.back().mass += a.mass;
        else
            out.push_back(a);
    }
    return out;
}

}  // namespace

double PiecewiseLinearDensity::mass() const {
    if (values.size() < 2) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) s += values[k] + values[k + 1];
    return 0.5 * step * s;
}

double PiecewiseLinearDensity::operator()(double y) const {
    if (values.empty()) return 0.0;
    if (y < x_min || y > x_max()) return 0.0;
    const double t = (y - x_min) / step;
    auto i = std::size_t(t);
    if (i + 1 >= values.size()) return values.back();
    return values[i] + (t - double(i)) * (values[i + 1] - values[i]);
}

namespace {

/// Sample a density for embedding into a wider grid. A support edge with a
/// jump that lands strictly inside the host grid takes the midpoint value
/// (half the jump): the implied one-cell ramp then carries exactly the true
/// mass, leaving only an O(h^2) moment error. Edges coinciding with the host
/// boundary keep their full value (edge jumps are representable there).
double embedded_sample(const PiecewiseLinearDensity& d, double y, double host_lo,
                       double host_hi) {
    if (d.empty()) return 0.0;
    const double tol = 1e-9 * std::max(1.0, d.step);
    const bool at_left = std::abs(y - d.x_min) <= tol;
    const bool at_right = std::abs(y - d.x_max()) <= tol;
    if (at_left || at_right) {
        const double v = at_left ? d.values.front() : d.values.back();
        const double edge = at_left ? d.x_min : d.x_max();
        const bool on_host_boundary =
            std::abs(edge - host_lo) <= tol || std::abs(edge - host_hi) <= tol;
        return on_host_boundary ? v : 0.5 * v;
    }
    return d(y);
}

}  // namespace

Measure::Measure(std::vector<Atom> atoms, PiecewiseLinearDensity density)
    : atoms_(merged_atoms(std::move(atoms))), density_(std::move(density)) {
    for (const auto& a : atoms_)
        if (a.mass < 0.0) throw ValidationError("measure: negative atom mass");
    for (auto& v : density_.values) {
        if (v < -1e-13) throw ValidationError("measure: negative density sample");
        v = std::max(v, 0.0);
    }
    if (!density_.empty() && !(density_.step > 0.0))
        throw ValidationError("measure: density step must be positive");
    double r = 0.0;
    for (const auto& a : atoms_) r = std::max(r, std::abs(a.loc));
    if (!density_.empty())
        r = std::max({r, std::abs(density_.x_min), std::abs(density_.x_max())});
    support_radius_ = r;
}

Measure Measure::point(double loc, double mass) { return Measure({{loc, mass}}, {}); }

Measure Measure::atoms(std::vector<Atom> list) { return Measure(std::move(list), {}); }

Measure Measure::uniform(double a, double b, double step) {
    if (!(b > a)) throw ValidationError("uniform measure: need b > a");
    const double cells = (b - a) / step;
    if (std::abs(cells - std::round(cells)) > 1e-9)
        throw ValidationError("uniform measure: step must divide b - a");
    const auto n = std::size_t(std::llround(cells)) + 1;
    PiecewiseLinearDensity d{a, step, std::vector<double>(n, 1.0 / (b - a))};
    return Measure({}, std::move(d));
}

Measure Measure::triangle(double a, double b, double step) {
    if (!(b > a)) throw ValidationError("triangle measure: need b > a");
    const double cells = (b - a) / step;
    const auto n = std::llround(cells);
    if (std::abs(cells - double(n)) > 1e-9 || n % 2 != 0)
        throw ValidationError("triangle measure: (b - a)/step must be an even integer");
    const double mid = 0.5 * (a + b);
    const double peak = 2.0 / (b - a);
    PiecewiseLinearDensity d{a, step, std::vector<double>(std::size_t(n) + 1)};
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double y = a + step * double(i);
        d.values[i] = peak * (1.0 - std::abs(y - mid) / (0.5 * (b - a)));
    }
    return Measure({}, std::move(d));
}

Measure Measure::gaussian_truncated(double mean, double stddev, double radius, double step) {
    if (!(stddev > 0.0) || !(radius > 0.0))
        throw ValidationError("gaussian measure: need stddev > 0 and radius > 0");
    const auto n = std::size_t(std::llround(2.0 * radius / step));
    PiecewiseLinearDensity d{mean - radius, step, std::vector<double>(n + 1)};
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double y = d.x_min + step * double(i);
        d.values[i] = std::exp(-0.5 * (y - mean) * (y - mean) / (stddev * stddev));
    }
    const double m = d.mass();
    for (auto& v : d.values) v /= m;
    return Measure({}, std::move(d));
}

double total_mass(const Measure& m) {
    double s = 0.0;
    for (const auto& a : m.atom_list()) s += a.mass;
    return s + m.density().mass();
}

double integrate(const Measure& m, const std::function<double(double)>& g) {
    double s = 0.0;
    for (const auto& a : m.atom_list()) s += a.mass * g(a.loc);
    const auto& d = m.density();
    if (d.empty()) return s;
    // trapezoid of density(y) g(y) on halved refinements of the density grid,
    // reusing previous nodes, until the increment stabilizes
    const std::size_t cells = d.values.size() - 1;
    auto f = [&](double y) { return d(y) * g(y); };
    double h = d.step;
    double t = 0.0;
    for (std::size_t k = 0; k <= cells; ++k) {
        const double w = (k == 0 || k == cells) ? 0.5 : 1.0;
        t += w * f(d.x_min + d.step * double(k));
    }
    t *= h;
    std::size_t n = cells;
    for (int level = 0; level < 14; ++level) {
        double mid = 0.0;
        for (std::size_t k = 0; k < n; ++k) mid += f(d.x_min + h * (double(k) + 0.5));
        const double t_next = 0.5 * t + 0.5 * h * mid;
        const bool stable = std::abs(t_next - t) <= 1e-11 * (1.0 + std::abs(t_next));
        t = t_next;
        h *= 0.5;
        n *= 2;
        if (stable && level >= 1) break;
        if (n > (std::size_t(1) << 19)) break;
    }
    return s + t;
}

namespace {

// integral of (a + b t) e^{lam (y0 + t)} over t in [0, h], exactly; series
// branch guards the small-|lam h| cancellation
double cell_exp_moment(double a, double b, double y0, double h, double lam) {
    const double x = lam * h;
    double i1, i2;
    if (std::abs(x) < 1e-2) {
        i1 = h * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0 + x * x * x * x / 120.0);
        i2 = h * h *
             (0.5 + x / 3.0 + x * x / 8.0 + x * x * x / 30.0 + x * x * x * x / 144.0);
    } else {
        const double e = std::exp(x);
        i1 = (e - 1.0) / lam;
        i2 = (e * (x - 1.0) + 1.0) / (lam * lam);
    }
    return std::exp(lam * y0) * (a * i1 + b * i2);
}

}  // namespace

double exp_moment(const Measure& m, double lam) {
    double s = 0.0;
    for (const auto& a : m.atom_list()) s += a.mass * std::exp(lam * a.loc);
    const auto& d = m.density();
    for (std::size_t k = 0; k + 1 < d.values.size(); ++k) {
        const double y0 = d.x_min + d.step * double(k);
        const double slope = (d.values[k + 1] - d.values[k]) / d.step;
        s += cell_exp_moment(d.values[k], slope, y0, d.step, lam);
    }
    return s;
}

Measure reflect(const Measure& m) {
    std::vector<Measure::Atom> atoms;
    atoms.reserve(m.atom_list().size());
    for (const auto& a : m.atom_list()) atoms.push_back({-a.loc, a.mass});
    PiecewiseLinearDensity d;
    if (!m.density().empty()) {
        const auto& src = m.density();
        d.x_min = -src.x_max();
        d.step = src.step;
        d.values.assign(src.values.rbegin(), src.values.rend());
    }
    return Measure(std::move(atoms), std::move(d));
}

namespace {

/// exact (d1 (*) d2)(x) for two PL densities: integrate d1(y) d2(x-y) over the
/// union of both breakpoint sets restricted to the overlap.
double density_conv_at(const PiecewiseLinearDensity& d1, const PiecewiseLinearDensity& d2,
                       double x) {
    const double lo = std::max(d1.x_min, x - d2.x_max());
    const double hi = std::min(d1.x_max(), x - d2.x_min);
    if (!(hi > lo)) return 0.0;
    static thread_local std::vector<double> bp;
    bp.clear();
    bp.push_back(lo);
    bp.push_back(hi);
    {
        auto k0 = std::size_t(std::max(0.0, std::ceil((lo - d1.x_min) / d1.step - 1e-12)));
        for (std::size_t k = k0; d1.x_min + d1.step * double(k) < hi; ++k)
            bp.push_back(d1.x_min + d1.step * double(k));
        auto j0 = std::size_t(std::max(0.0, std::ceil((x - hi - d2.x_min) / d2.step - 1e-12)));
        for (std::size_t j = j0; d2.x_min + d2.step * double(j) < x - lo; ++j)
            bp.push_back(x - (d2.x_min + d2.step * double(j)));
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-13; }),
             bp.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double y0 = bp[i], y1 = bp[i + 1];
        if (!(y1 > y0)) continue;
        s += segment_bilinear(y1 - y0, d1(y0), d1(y1), d2(x - y0), d2(x - y1));
    }
    return s;
}

}  // namespace

Measure convolve_measures(const Measure& m1, const Measure& m2,
                          const ConvolveMeasureOptions& opts) {
    const double radius = m1.support_radius() + m2.support_radius();
    if (radius > opts.max_support_radius) {
        std::ostringstream msg;
        msg << "convolve_measures: support radius " << radius
            << " exceeds configured maximum " << opts.max_support_radius
            << " (required radius " << radius << ")";
        throw SolverError(msg.str());
    }

    std::vector<Measure::Atom> atoms;
    for (const auto& a : m1.atom_list())
        for (const auto& b : m2.atom_list()) atoms.push_back({a.loc + b.loc, a.mass * b.mass});

    const auto& d1 = m1.density();
    const auto& d2 = m2.density();
    const double atoms1 = [&] {
        double s = 0.0;
        for (const auto& a : m1.atom_list()) s += a.mass;
        return s;
    }();
    const double atoms2 = [&] {
        double s = 0.0;
        for (const auto& a : m2.atom_list()) s += a.mass;
        return s;
    }();

    PiecewiseLinearDensity out;
    const bool any_density = !d1.empty() || !d2.empty();
    if (any_density) {
        double step = opts.density_step.value_or(
            d1.empty() ? d2.step : (d2.empty() ? d1.step : std::min(d1.step, d2.step)));
        double lo = 1e300, hi = -1e300;
        auto widen = [&](double a, double b) {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        };
        const double dd_min = (!d1.empty() && !d2.empty()) ? d1.x_min + d2.x_min : 0.0;
        if (!d1.empty() && !d2.empty()) widen(dd_min, d1.x_max() + d2.x_max());
        if (!d1.empty())
            for (const auto& a : m2.atom_list()) widen(d1.x_min + a.loc, d1.x_max() + a.loc);
        if (!d2.empty())
            for (const auto& a : m1.atom_list()) widen(d2.x_min + a.loc, d2.x_max() + a.loc);

        out.step = step;
        out.x_min = lo;
        if (!d1.empty() && !d2.empty()) {
            // keep the density-density origin on the output lattice
            out.x_min = dd_min - step * std::ceil((dd_min - lo) / step - 1e-12);
        }
        const auto n = std::size_t(std::ceil((hi - out.x_min) / step - 1e-9)) + 1;
        out.values.assign(n, 0.0);

        if (!d1.empty() && !d2.empty()) {
            const bool aligned = std::abs(d1.step - step) < 1e-12 * step &&
                                 std::abs(d2.step - step) < 1e-12 * step;
            if (aligned) {
                // exact PL x PL convolution, cell by cell of d2; a d2 cell whose
                // preimage straddles d1's support edge contributes nothing (d1
                // jumps to zero there), so only fully interior cells are summed
                const auto base = std::ptrdiff_t(std::llround((dd_min - out.x_min) / step));
                const auto n1 = std::ptrdiff_t(d1.values.size());
                const auto cells2 = std::ptrdiff_t(d2.values.size()) - 1;
                for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(out.values.size()); ++i) {
                    double v = 0.0;
                    const std::ptrdiff_t shift = i - base;
                    // d2 cell k integrates d1 over its cell (shift-k-1, shift-k)
                    const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, shift - n1 + 1);
                    const std::ptrdiff_t k_hi = std::min(cells2 - 1, shift - 1);
                    for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) {
                        const double a = d1.values[std::size_t(shift - k)];      // at y_k
                        const double b = d1.values[std::size_t(shift - k - 1)];  // at y_{k+1}
                        v += step / 6.0 *
                             ((2.0 * d2.values[std::size_t(k)] + d2.values[std::size_t(k + 1)]) * a +
                              (d2.values[std::size_t(k)] + 2.0 * d2.values[std::size_t(k + 1)]) * b);
                    }
                    out.values[std::size_t(i)] += v;
                }
            } else {
                for (std::size_t i = 0; i < out.values.size(); ++i)
                    out.values[i] += density_conv_at(d1, d2, out.x_min + step * double(i));
            }
        }
        const double host_lo = out.x_min;
        const double host_hi = out.x_min + step * double(out.values.size() - 1);
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            const double x = out.x_min + step * double(i);
            double v = 0.0;
            if (!d2.empty())
                for (const auto& a : m1.atom_list())
                    v += a.mass * embedded_sample(d2, x - a.loc, host_lo - a.loc, host_hi - a.loc);
            if (!d1.empty())
                for (const auto& a : m2.atom_list())
                    v += a.mass * embedded_sample(d1, x - a.loc, host_lo - a.loc, host_hi - a.loc);
            out.values[i] = std::max(out.values[i] + v, 0.0);
        }
        // pin the density part to the exact product mass
        const double target = atoms1 * d2.mass() + d1.mass() * atoms2 + d1.mass() * d2.mass();
        const double actual = out.mass();
        if (actual > 1e-300 && target > 0.0) {
            const double f = target / actual;
            for (auto& v : out.values) v *= f;
        }
    }
    return Measure(std::move(atoms), std::move(out));
}

Measure exp_series(const Measure& mhat, int K) {
    if (K < 0) throw ValidationError("exp_series: K must be >= 0");
    // running term t_k = mhat^{*k} / k!
    Measure term = Measure::point(0.0, 1.0);
    std::map<long long, double> atom_acc;  // loc keyed at kAtomMergeTol resolution
    auto add_atoms = [&](const Measure& t) {
        for (const auto& a : t.atom_list())
            atom_acc[std::llround(a.loc / kAtomMergeTol)] += a.mass;
    };
    std::vector<PiecewiseLinearDensity> dens_terms;
    add_atoms(term);

    ConvolveMeasureOptions opts;
    for (int k = 1; k <= K; ++k) {
        Measure next = convolve_measures(term, mhat, opts);
        std::vector<Measure::Atom> scaled;
        scaled.reserve(next.atom_list().size());
        for (const auto& a : next.atom_list()) scaled.push_back({a.loc, a.mass / double(k)});
        PiecewiseLinearDensity d = next.density();
        for (auto& v : d.values) v /= double(k);
        term = Measure(std::move(scaled), std::move(d));
        add_atoms(term);
        if (!term.density().empty()) dens_terms.push_back(term.density());
    }

    std::vector<Measure::Atom> atoms;
    atoms.reserve(atom_acc.size());
    for (const auto& [key, mass] : atom_acc)
        atoms.push_back({double(key) * kAtomMergeTol, mass});

    PiecewiseLinearDensity total;
    if (!dens_terms.empty()) {
        double step = dens_terms.front().step;
        double lo = 1e300, hi = -1e300;
        for (const auto& d : dens_terms) {
            step = std::min(step, d.step);
            lo = std::min(lo, d.x_min);
            hi = std::max(hi, d.x_max());
        }
        total.step = step;
        total.x_min = lo;
        const auto n = std::size_t(std::llround((hi - lo) / step));
        total.values.assign(n + 1, 0.0);
        const double host_hi = total.x_min + step * double(n);
        for (const auto& d : dens_terms)
            for (std::size_t i = 0; i < total.values.size(); ++i)
                total.values[i] += embedded_sample(d, total.x_min + step * double(i),
                                                   total.x_min, host_hi);
        // each term's mass is known exactly; keep the sum pinned
        double target = 0.0;
        for (const auto& d : dens_terms) target += d.mass();
        const double actual = total.mass();
        if (actual > 1e-300 && target > 0.0)
            for (auto& v : total.values) v *= target / actual;
    }
    return Measure(std::move(atoms), std::move(total));
}

int choose_series_order(const Measure& mhat, double rel_cutoff, int cap) {
    const double mass = total_mass(mhat);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= cap; ++k) {
        term *= mass / double(k);
        sum += term;
        if (term < rel_cutoff * sum && k >= 4) return k;
    }
    return cap;
}

double verify_mgf_identity(const Measure& mhat, std::span<const double> lams, int K) {
    const Measure nu = exp_series(mhat, K);
    double worst = 0.0;
    for (double lam : lams) {
        const double mgf_mu = exp_moment(mhat, lam);
        // truncation must be negligible at this lambda
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= K; ++k) {
            term *= mgf_mu / double(k);
            sum += term;
        }
        if (!(std::abs(term) < 1e-12 * std::abs(sum))) {
            std::ostringstream msg;
            msg << "verify_mgf_identity: truncation at K=" << K
                << " not converged for lambda=" << lam;
            throw SolverError(msg.str());
        }
        const double lhs = std::log(exp_moment(nu, lam));
        const double rel = std::abs(lhs - mgf_mu) / std::max(1e-12, std::abs(mgf_mu));
        worst = std::max(worst, rel);
    }
    return worst;
}

ConvolutionOperator::ConvolutionOperator(const Measure& m, double grid_step) {
    if (!(grid_step > 0.0)) throw ValidationError("convolution: grid step must be positive");
    for (const auto& a : m.atom_list()) {
        const double cells = a.loc / grid_step;
        const auto c = std::ptrdiff_t(std::llround(cells));
        atom_rounding_error_ =
            std::max(atom_rounding_error_, std::abs(a.loc - double(c) * grid_step));
        shifts_.push_back({c, a.mass});
        mass_ += a.mass;
        reach_ = std::max(reach_, std::ptrdiff_t(std::abs(c)));
    }
    const auto& d = m.density();
    if (!d.empty()) {
        const double off = d.x_min / grid_step;
        const auto q = std::ptrdiff_t(std::llround(off));
        const double misalign = std::abs(off - double(q));
        const double ratio = d.step / grid_step;
        if (misalign > 1e-6 || std::abs(ratio - std::round(ratio)) > 1e-9 ||
            std::llround(ratio) < 1)
            throw ValidationError(
                "convolution: density grid must align with the profile grid "
                "(offset and step multiples)");
        const auto sub = std::size_t(std::llround(ratio));
        // re-express the density on the profile step (exact: PL refinement)
        std::vector<double> dv;
        if (sub == 1) {
            dv = d.values;
        } else {
            dv.resize((d.values.size() - 1) * sub + 1);
            for (std::size_t i = 0; i < dv.size(); ++i)
                dv[i] = d(d.x_min + grid_step * double(i));
        }
        const std::size_t cells = dv.size() - 1;
        stencil_.assign(dv.size(), 0.0);
        for (std::size_t k = 0; k < cells; ++k) {
            stencil_[k] += grid_step / 6.0 * (2.0 * dv[k] + dv[k + 1]);
            stencil_[k + 1] += grid_step / 6.0 * (dv[k] + 2.0 * dv[k + 1]);
        }
        stencil_first_ = q;
        for (double w : stencil_) mass_ += w;
        reach_ = std::max({reach_, std::ptrdiff_t(std::abs(q)),
                           std::ptrdiff_t(std::abs(q + std::ptrdiff_t(stencil_.size()) - 1))});
    }
}

void ConvolutionOperator::apply(std::span<const double> v, double left_tail, double right_tail,
                                std::span<double> out) const {
    const auto n = std::ptrdiff_t(v.size());
    auto at = [&](std::ptrdiff_t j) {
        if (j < 0) return left_tail;
        if (j >= n) return right_tail;
        return v[std::size_t(j)];
    };
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& sh : shifts_) s += sh.mass * at(i - sh.cells);
        const std::ptrdiff_t base = i - stencil_first_;
        for (std::size_t p = 0; p < stencil_.size(); ++p)
            s += stencil_[p] * at(base - std::ptrdiff_t(p));
        out[std::size_t(i)] = s;
    }
}

namespace {

template <typename Eval>
std::vector<double> convolve_values(const Measure& m, const GridSpec& out_grid, const Eval& u,
                                    const GridSpec& u_grid, double* rounding) {
    std::vector<double> out(out_grid.points, 0.0);
    double rerr = 0.0;
    for (const auto& a : m.atom_list()) {
        const double cells = a.loc / out_grid.step;
        const auto c = std::ptrdiff_t(std::llround(cells));
        rerr = std::max(rerr, std::abs(a.loc - double(c) * out_grid.step));
        for (std::size_t i = 0; i < out_grid.points; ++i)
            out[i] += a.mass * u(out_grid.x_at(i) - double(c) * out_grid.step);
    }
    const auto& d = m.density();
    if (!d.empty()) {
        static thread_local std::vector<double> bp;
        for (std::size_t i = 0; i < out_grid.points; ++i) {
            const double x = out_grid.x_at(i);
            const double lo = d.x_min, hi = d.x_max();
            bp.clear();
            for (std::size_t k = 0; k < d.values.size(); ++k)
                bp.push_back(d.x_min + d.step * double(k));
            // breakpoints of y -> u(x - y) land at y = x - nodes(u)
            const double y_lo = std::max(lo, x - u_grid.x_max());
            const double y_hi = std::min(hi, x - u_grid.x_min);
            if (y_hi > y_lo) {
                auto j0 = std::ptrdiff_t(std::ceil((x - y_hi - u_grid.x_min) / u_grid.step - 1e-12));
                for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(j0, 0);
                     j < std::ptrdiff_t(u_grid.points); ++j) {
                    const double y = x - u_grid.x_at(std::size_t(j));
                    if (y <= y_lo) break;
                    if (y < y_hi) bp.push_back(y);
                }
            }
            std::sort(bp.begin(), bp.end());
            bp.erase(std::unique(bp.begin(), bp.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                     bp.end());
            double s = 0.0;
            for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
                const double y0 = bp[k], y1 = bp[k + 1];
                if (!(y1 > y0)) continue;
                s += segment_bilinear(y1 - y0, d(y0), d(y1), u(x - y0), u(x - y1));
            }
            out[i] += s;
        }
    }
    if (rounding) *rounding = rerr;
    return out;
}

bool density_aligned(const Measure& m, const GridSpec& g) {
    const auto& d = m.density();
    if (d.empty()) return true;
    const double off = d.x_min / g.step;
    const double ratio = d.step / g.step;
    return std::abs(off - std::round(off)) < 1e-6 &&
           std::abs(ratio - std::round(ratio)) < 1e-9 && std::llround(ratio) >= 1;
}

}  // namespace

Profile convolve(const Measure& m, const Profile& u, double* atom_rounding_error) {
    const auto& g = u.grid();
    const double mass = total_mass(m);
    if (mass > 1.0 + 1e-9)
        throw ValidationError("convolve: total mass exceeds 1; use the Field overload");
    std::vector<double> out;
    double rerr = 0.0;
    if (density_aligned(m, g)) {
        ConvolutionOperator op(m, g.step);
        out.resize(g.points);
        op.apply(u.values(), u.left_tail(), u.right_tail(), out);
        rerr = op.atom_rounding_error();
    } else {
        out = convolve_values(m, g, u, g, &rerr);
    }
    if (atom_rounding_error) *atom_rounding_error = rerr;
    double corr = 0.0;
    auto p = Profile::projected(g, std::move(out), std::clamp(mass * u.left_tail(), 0.0, 1.0),
                                std::clamp(mass * u.right_tail(), 0.0, 1.0), &corr);
    if (corr > 1e-8)
        throw SolverError("convolve: result violates monotonicity beyond tolerance");
    return p;
}

Profile convolve(const Measure& m, const Profile& u) { return convolve(m, u, nullptr); }

Field convolve(const Measure& m, const Field& v) {
    const double mass = total_mass(m);
    Field out;
    out.grid = v.grid;
    out.left_tail = mass * v.left_tail;
    out.right_tail = mass * v.right_tail;
    if (density_aligned(m, v.grid)) {
        ConvolutionOperator op(m, v.grid.step);
        out.values.resize(v.grid.points);
        op.apply(v.values, v.left_tail, v.right_tail, out.values);
    } else {
        out.values = convolve_values(m, v.grid, v, v.grid, nullptr);
    }
    return out;
}

Field convolve(const Measure& m, const Field& v, const GridSpec& out_grid) {
    const double mass = total_mass(m);
    Field out;
    out.grid = out_grid;
    out.left_tail = mass * v.left_tail;
    out.right_tail = mass * v.right_tail;
    out.values = convolve_values(m, out_grid, v, v.grid, nullptr);
    return out;
}

}  // namespace nlfront
