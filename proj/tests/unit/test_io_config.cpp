#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "nlfront/io.hpp"
#include "nlfront/run_config.hpp"

using namespace nlfront;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("nlfront_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("profile CSV round-trips bit-exactly") {
    TempDir tmp;
    auto g = GridSpec::over(-3.0, 3.0, 0.1);
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(g.points);
    double acc = 0.0;
    for (auto& x : v) acc = x = std::min(1.0, acc + 0.05 * u(rng));
    Profile p = Profile::projected(g, v, 0.0, 1.0);

    const fs::path file = tmp.path / "p.csv";
    write_profile_csv(file, p);
    Profile q = read_profile_csv(file);

    REQUIRE(q.values().size() == p.values().size());
    for (std::size_t i = 0; i < p.values().size(); ++i)
        CHECK(q.values()[i] == p.values()[i]);  // bit-exact
    CHECK(q.left_tail() == p.left_tail());
    CHECK(q.right_tail() == p.right_tail());
    CHECK(q.grid().step == doctest::Approx(p.grid().step).epsilon(1e-15));
}

TEST_CASE("measure literals: atoms, density, generators") {
    json j = {{"atoms", {{{"loc", 1.0}, {"mass", 0.5}}, {{"loc", -1.0}, {"mass", 0.5}}}}};
    Measure m = parse_measure(j);
    CHECK(m.atom_list().size() == 2);
    CHECK(total_mass(m) == doctest::Approx(1.0));

    json jd = {{"density",
                {{"grid_min", 0.0}, {"step", 0.5}, {"values", std::vector<double>{1, 1, 1}}}}};
    Measure md = parse_measure(jd);
    CHECK(md.density().values.size() == 3);

    json jg = {{"generator", "uniform"}, {"a", 0.0}, {"b", 1.0}, {"step", 0.25}};
    CHECK(total_mass(parse_measure(jg)) == doctest::Approx(1.0));

    json jt = {{"generator", "triangle"}, {"a", -1.0}, {"b", 1.0}, {"step", 0.25}};
    CHECK(total_mass(parse_measure(jt)) == doctest::Approx(1.0).epsilon(1e-12));

    json jgauss = {{"generator", "gaussian_truncated"},
                   {"mean", 0.0},
                   {"stddev", 0.5},
                   {"radius", 2.0},
                   {"step", 0.125}};
    CHECK(total_mass(parse_measure(jgauss)) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(parse_measure(json{{"generator", "pareto"}}), ValidationError);
}

TEST_CASE("run config: required sections and cross-field validation") {
    json base = {
        {"problem",
         {{"measure", {{"atoms", {{{"loc", 1.0}, {"mass", 1.0}}}}}},
          {"nonlinearity", {{"type", "cubic"}, {"lambda", 1.0}, {"alpha", 0.3}}}}},
        {"grid", {{"min", -20.0}, {"max", 20.0}, {"step", 0.25}}},
        {"time", {{"dt", 0.1}, {"tau", 1.0}}},
    };
    RunConfig cfg = parse_run_config(base);
    CHECK_NOTHROW(validate_for_solve(cfg));

    json no_grid = base;
    no_grid.erase("grid");
    CHECK_THROWS_AS(validate_for_solve(parse_run_config(no_grid)), ValidationError);

    json bad_dt = base;
    bad_dt["time"]["dt"] = 0.9;  // breaks dt*(1+L) < 1
    CHECK_THROWS_AS(validate_for_solve(parse_run_config(bad_dt)), ValidationError);

    json bad_atom = base;
    bad_atom["problem"]["measure"]["atoms"][0]["loc"] = 0.33;  // off the 0.25 lattice
    CHECK_THROWS_AS(validate_for_solve(parse_run_config(bad_atom)), ValidationError);

    json bad_sigma = base;
    bad_sigma["bounds"] = {{"sigma", 0.5}};  // above f'(alpha) = 0.21
    CHECK_THROWS_AS(validate_for_solve(parse_run_config(bad_sigma)), ValidationError);

    json bad_levels = base;
    bad_levels["recursion"] = {{"n_list", {10, 20}}, {"level_lo", 0.6}};  // above alpha
    CHECK_THROWS_AS(validate_for_solve(parse_run_config(bad_levels)), ValidationError);
}

TEST_CASE("json report determinism: identical configs give identical dumps") {
    json j = {{"a", 1.25}, {"b", {1.0, 2.0}}, {"c", "x"}};
    CHECK(j.dump(2) == json(j).dump(2));
    HypothesesReport r;
    r.trials = 3;
    CHECK(to_json(r).dump() == to_json(r).dump());
}
