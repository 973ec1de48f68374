#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "nlfront/driver.hpp"
#include "nlfront/io.hpp"

namespace py = pybind11;
using namespace nlfront;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<long long>());
        case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(json_to_py(v));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

RunConfig config_from_str(const std::string& text) {
    return parse_run_config(json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "traveling fronts of the nonlocal bistable equation u_t = mu*u - u + f(u)";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double lo, double hi, double step) {
                 return GridSpec::over(lo, hi, step);
             }),
             py::arg("min"), py::arg("max"), py::arg("step"))
        .def_readonly("x_min", &GridSpec::x_min)
        .def_readonly("step", &GridSpec::step)
        .def_readonly("points", &GridSpec::points)
        .def("x_max", &GridSpec::x_max);

    py::class_<Measure>(m, "Measure")
        .def_static("point", &Measure::point, py::arg("loc"), py::arg("mass") = 1.0)
        .def_static(
            "atoms",
            [](const std::vector<std::pair<double, double>>& list) {
                std::vector<Measure::Atom> atoms;
                for (auto [loc, mass] : list) atoms.push_back({loc, mass});
                return Measure::atoms(std::move(atoms));
            },
            py::arg("atoms"))
        .def_static("uniform", &Measure::uniform, py::arg("a"), py::arg("b"), py::arg("step"))
        .def_static("triangle", &Measure::triangle, py::arg("a"), py::arg("b"), py::arg("step"))
        .def_static("gaussian_truncated", &Measure::gaussian_truncated, py::arg("mean"),
                    py::arg("stddev"), py::arg("radius"), py::arg("step"))
        .def_property_readonly("support_radius", &Measure::support_radius)
        .def("total_mass", [](const Measure& m_) { return total_mass(m_); })
        .def("exp_moment", [](const Measure& m_, double lam) { return exp_moment(m_, lam); },
             py::arg("lam"))
        .def("reflect", [](const Measure& m_) { return reflect(m_); });

    m.def("convolve_measures",
          [](const Measure& a, const Measure& b) { return convolve_measures(a, b); },
          py::arg("m1"), py::arg("m2"));
    m.def("exp_series", &exp_series, py::arg("mhat"), py::arg("K"));
    m.def("verify_mgf_identity",
          [](const Measure& mhat, const std::vector<double>& lams, int K) {
              return verify_mgf_identity(mhat, lams, K);
          },
          py::arg("mhat"), py::arg("lams"), py::arg("K"));

    py::class_<Profile>(m, "Profile")
        .def(py::init([](double grid_min, double step, std::vector<double> values,
                         double left_tail, double right_tail) {
                 GridSpec g{grid_min, step, values.size()};
                 return Profile(g, std::move(values), left_tail, right_tail);
             }),
             py::arg("grid_min"), py::arg("step"), py::arg("values"), py::arg("left_tail"),
             py::arg("right_tail"))
        .def_static("constant", &Profile::constant, py::arg("grid"), py::arg("value"))
        .def_static("ramp", &Profile::ramp, py::arg("grid"), py::arg("x0"), py::arg("x1"))
        .def("__call__", &Profile::operator(), py::arg("x"))
        .def_property_readonly("values", &Profile::values)
        .def_property_readonly("grid", &Profile::grid)
        .def_property_readonly("left_tail", &Profile::left_tail)
        .def_property_readonly("right_tail", &Profile::right_tail);

    m.def("translate", [](const Profile& u, double h) { return translate(u, h); });
    m.def("resample", [](const Profile& u, const GridSpec& g) { return resample(u, g); });
    m.def("level_crossing", &level_crossing, py::arg("u"), py::arg("level"));
    m.def("sup_dist",
          [](const Profile& a, const Profile& b, double lo, double hi) {
              return sup_dist(a, b, {lo, hi});
          },
          py::arg("u1"), py::arg("u2"), py::arg("window_lo"), py::arg("window_hi"));
    m.def("leq", &leq, py::arg("u1"), py::arg("u2"), py::arg("tol"));
    m.def("convolve", [](const Measure& mu, const Profile& u) { return convolve(mu, u); },
          py::arg("mu"), py::arg("u"));

    py::class_<Nonlinearity>(m, "Nonlinearity")
        .def_static("cubic", &Nonlinearity::cubic, py::arg("lam"), py::arg("alpha"))
        .def("__call__", &Nonlinearity::operator(), py::arg("u"))
        .def_property_readonly("alpha", &Nonlinearity::alpha)
        .def_property_readonly("lipschitz", &Nonlinearity::lipschitz)
        .def_property_readonly("derivative_at_alpha", &Nonlinearity::derivative_at_alpha);

    py::class_<Semiflow>(m, "Semiflow")
        .def(py::init([](const Measure& mu, const Nonlinearity& f, double slope_out, double dt,
                         const GridSpec& grid, double projection_tol) {
                 SemiflowConfig cfg;
                 cfg.measure = mu;
                 cfg.reaction = ExtendedNonlinearity(f, slope_out);
                 cfg.dt = dt;
                 cfg.grid = grid;
                 cfg.projection_tol = projection_tol;
                 return Semiflow(cfg);
             }),
             py::arg("measure"), py::arg("nonlinearity"), py::arg("slope_out"), py::arg("dt"),
             py::arg("grid"), py::arg("projection_tol") = 1e-6)
        .def("evolve",
             [](const Semiflow& f, const Profile& u, double t) { return f.evolve(u, t); },
             py::arg("u"), py::arg("t"))
        .def("step", [](const Semiflow& f, const Profile& u) { return f.step(u); },
             py::arg("u"));

    m.def("measure_speed",
          [](const Profile& u0, double T, const Semiflow& flow, double alpha) {
              return measure_speed(u0, T, flow, alpha);
          },
          py::arg("u0"), py::arg("T"), py::arg("flow"), py::arg("alpha"));

    m.def("bound_curve",
          [](const Measure& mu, double sigma, const std::string& direction, double lam) {
              SpeedBoundQuery q{mu, sigma,
                                direction == "plus" ? BoundDirection::plus
                                                    : BoundDirection::minus,
                                {},
                                1e-10};
              return bound_curve(q, lam);
          },
          py::arg("measure"), py::arg("sigma"), py::arg("direction"), py::arg("lam"));
    m.def("speed_bound_infimum",
          [](const Measure& mu, double sigma, const std::string& direction) {
              SpeedBoundQuery q{mu, sigma,
                                direction == "plus" ? BoundDirection::plus
                                                    : BoundDirection::minus,
                                {},
                                1e-10};
              SpeedBoundReport r = infimum(q);
              py::dict out;
              out["value"] = r.value;
              out["lambda_star"] = r.lambda_star;
              out["attained"] = r.attained;
              return out;
          },
          py::arg("measure"), py::arg("sigma"), py::arg("direction"));
    m.def("hypothesis7_gap",
          [](const Measure& mu, double sigma) {
              SpeedBoundReport r = hypothesis7_gap(mu, sigma);
              py::dict out;
              out["gap"] = *r.gap;
              out["gap_positive"] = r.gap_positive;
              return out;
          },
          py::arg("measure"), py::arg("sigma"));

    // config-driven pipelines (JSON text in, report dict out)
    m.def("front_pipeline",
          [](const std::string& config, int jobs) {
              RunConfig cfg = config_from_str(config);
              cfg.out_dir.clear();
              return json_to_py(run_front_pipeline(cfg, jobs).report);
          },
          py::arg("config_json"), py::arg("jobs") = 1);
    m.def("simulate_report",
          [](const std::string& config) {
              RunConfig cfg = config_from_str(config);
              cfg.out_dir.clear();
              return json_to_py(run_simulate(cfg));
          },
          py::arg("config_json"));
    m.def("bounds_report",
          [](const std::string& config) {
              RunConfig cfg = config_from_str(config);
              cfg.out_dir.clear();
              return json_to_py(run_bounds(cfg));
          },
          py::arg("config_json"));
    m.def("hypotheses_report",
          [](const std::string& config) {
              RunConfig cfg = config_from_str(config);
              cfg.out_dir.clear();
              return json_to_py(run_hypotheses(cfg));
          },
          py::arg("config_json"));
    m.def("mgf_report",
          [](const std::string& config) {
              RunConfig cfg = config_from_str(config);
              cfg.out_dir.clear();
              return json_to_py(run_mgf_check(cfg));
          },
          py::arg("config_json"));
    m.def("subsuper_report",
          [](const std::string& config) {
              RunConfig cfg = config_from_str(config);
              cfg.out_dir.clear();
              return json_to_py(run_subsuper_check(cfg));
          },
          py::arg("config_json"));

    m.attr("__version__") = "0.1.0";
}
