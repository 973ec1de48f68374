#include "nlfront/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlfront {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_profile_csv(const std::filesystem::path& path, const Profile& u) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path.string());
    out << "x,value\n";
    for (std::size_t i = 0; i < u.grid().points; ++i)
        out << format_double(u.grid().x_at(i)) << "," << format_double(u.values()[i]) << "\n";
    json meta = {{"left_tail", u.left_tail()},
                 {"right_tail", u.right_tail()},
                 {"step", u.grid().step}};
    std::filesystem::path mp = path;
    mp += ".meta.json";
    write_json(mp, meta);
}

Profile read_profile_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
        throw ValidationError("profile csv: bad header in " + path.string());
    std::vector<double> xs, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError("profile csv: bad row in " + path.string());
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() < 2) throw ValidationError("profile csv: too few rows");
    const double step_from_data = xs[1] - xs[0];

    double lt = vs.front(), rt = vs.back(), step = step_from_data;
    std::filesystem::path mp = path;
    mp += ".meta.json";
    if (std::filesystem::exists(mp)) {
        json meta = read_json(mp);
        lt = meta.value("left_tail", lt);
        rt = meta.value("right_tail", rt);
        step = meta.value("step", step);
    }
    GridSpec g{xs.front(), step, xs.size()};
    return Profile(g, std::move(vs), lt, rt);
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open: " + path.string());
    json j;
    in >> j;
    return j;
}

void write_svg(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
               const std::string& title) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series) {
        for (double v : s.x) {
            xlo = std::min(xlo, v);
            xhi = std::max(xhi, v);
        }
        for (double v : s.y) {
            ylo = std::min(ylo, v);
            yhi = std::max(yhi, v);
        }
    }
    if (!(xhi > xlo)) xhi = xlo + 1.0;
    if (!(yhi > ylo)) yhi = ylo + 1.0;
    const double W = 720, H = 420, m = 50;
    auto X = [&](double x) { return m + (x - xlo) / (xhi - xlo) * (W - 2 * m); };
    auto Y = [&](double y) { return H - m - (y - ylo) / (yhi - ylo) * (H - 2 * m); };

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path.string());
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    out << "<line x1='" << m << "' y1='" << H - m << "' x2='" << W - m << "' y2='" << H - m
        << "' stroke='black'/>\n";
    out << "<line x1='" << m << "' y1='" << m << "' x2='" << m << "' y2='" << H - m
        << "' stroke='black'/>\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", xlo);
    out << "<text x='" << m << "' y='" << H - m + 18 << "' font-size='11'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", xhi);
    out << "<text x='" << W - m << "' y='" << H - m + 18
        << "' text-anchor='end' font-size='11'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", ylo);
    out << "<text x='" << m - 6 << "' y='" << H - m << "' text-anchor='end' font-size='11'>"
        << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", yhi);
    out << "<text x='" << m - 6 << "' y='" << m + 4 << "' text-anchor='end' font-size='11'>"
        << buf << "</text>\n";
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << X(s.x[i]) << "," << Y(s.y[i]) << " ";
        out << "'/>\n";
    }
    out << "</svg>\n";
}

json to_json(const HypothesesReport& r) {
    return {{"trials", r.trials},
            {"seed", r.seed},
            {"tau", r.tau},
            {"order_preservation",
             {{"ok", r.order_ok}, {"worst_violation", r.worst_order_violation}}},
            {"translation_equivariance",
             {{"ok", r.translation_ok}, {"worst_defect", r.worst_translation_defect}}},
            {"bistable_constants",
             {{"ok", r.bistable_ok},
              {"margin_below_alpha", r.margin_below_alpha},
              {"margin_above_alpha", r.margin_above_alpha},
              {"alpha_fixed_ok", r.alpha_fixed_ok},
              {"alpha_drift", r.alpha_drift}}},
            {"continuity",
             {{"ok", r.continuity_ok},
              {"ratio", r.continuity_ratio},
              {"small_time_defect", r.small_time_defect}}},
            {"projection_budget", r.projection_budget},
            {"all_ok", r.all_ok()}};
}

json to_json(const RecursionTrace& t) {
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"n", r.n},
                        {"residual", r.residual},
                        {"iterations", r.iterations},
                        {"y", r.y},
                        {"z", r.z},
                        {"y_over_n", r.y_over_n},
                        {"z_over_n", r.z_over_n}});
    return {{"rows", rows},
            {"xi_minus", t.xi_minus},
            {"xi_plus", t.xi_plus},
            {"c_minus", t.c_minus},
            {"c_plus", t.c_plus},
            {"level_lo", t.level_lo},
            {"level_hi", t.level_hi},
            {"N0", t.N0}};
}

namespace {
std::string eq_name(Equilibrium e) {
    switch (e) {
        case Equilibrium::zero: return "0";
        case Equilibrium::alpha: return "alpha";
        default: return "1";
    }
}
}  // namespace

json to_json(const FrontResult& f) {
    return {{"c", f.c},
            {"residual", f.residual},
            {"residual_2tau", f.residual_2tau},
            {"limits", {eq_name(f.limit_left), eq_name(f.limit_right)}},
            {"branch", f.branch == Branch::minus ? "minus" : "plus"},
            {"c_lower", f.c_lower},
            {"c_upper", f.c_upper}};
}

json to_json(const SubSuperPair& p) {
    return {{"epsilon", p.epsilon},
            {"alpha", p.alpha},
            {"c_lower", p.c_lower},
            {"c_upper", p.c_upper},
            {"delta", p.delta},
            {"C_const", p.C_const},
            {"residual_lower", p.residual_lower},
            {"residual_upper", p.residual_upper}};
}

}  // namespace nlfront
