/// @file test_cli.cpp
/// @brief Configuration parsing, command outputs, exit codes and determinism.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kinreg/commands.hpp"
#include "kinreg/config.hpp"
#include "kinreg/errors.hpp"

using namespace kinreg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    json out;
    json err;
    std::string text;
};

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("kinreg_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Outcome run_json(Command c, const json& config, const fs::path& dir, std::optional<std::uint64_t> seed = {}) {
    const auto path = dir / "config.json";
    std::ofstream(path) << config.dump();
    RunOptions opt;
    opt.config = path;
    opt.out_dir = dir / "out";
    opt.seed = seed;
    std::ostringstream out, err;
    const int code = run(c, opt, out, err);
    Outcome o{code, json(), json(), out.str()};
    if (!out.str().empty() && c != Command::verify) o.out = json::parse(out.str());
    if (!err.str().empty()) o.err = json::parse(err.str());
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

json burgers_problem() {
    return {{"flux", {{"kind", "power_abs"}, {"ell", 1}}},
            {"grid", {{"x_lo", -0.5}, {"x_hi", 1.5}, {"n_cells", 100}, {"t_end", 0.5}, {"boundary", "outflow"}}},
            {"u0", {{"riemann", {{"left", 1.0}, {"right", 0.0}, {"x0", 0.0}}}}}};
}

}  // namespace

TEST_CASE("command names") {
    CHECK(parse_command("analyze-flux") == Command::analyze_flux);
    CHECK(parse_command("verify") == Command::verify);
    CHECK_FALSE(parse_command("nope").has_value());
    CHECK(to_string(Command::contraction) == "contraction");
    CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("flux parsing") {
    CHECK(parse_flux(json{{"kind", "power_abs"}, {"ell", 2.0}}).kind() == Flux::Kind::power_abs);
    CHECK(parse_flux(json{{"kind", "sine"}}).value(0.5) == doctest::Approx(std::sin(0.5)));
    CHECK(parse_flux(json{{"kind", "polynomial"}, {"coefficients", {0, 0, 0.5}}}).value(2) == doctest::Approx(2));
    const auto pw = parse_flux(json{{"kind", "piecewise_polynomial"},
                                    {"breakpoints", {0.0}},
                                    {"pieces", {{0, 0, 0.5}, {0, 0, 0.5, 1}}}});
    CHECK(pw.value(1.0) == doctest::Approx(1.5));
    try {
        parse_flux(json{{"kind", "sine"}, {"ell", 2}});
        FAIL("expected an unknown-key error");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "flux.ell");
    }
    try {
        parse_flux(json{{"kind", "power_abs"}});
        FAIL("expected a missing-key error");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "flux.ell");
    }
    CHECK_THROWS_AS(parse_flux(json{{"kind", "power_abs"}, {"ell", 0.5}}), ConfigError);
    CHECK_THROWS_AS(parse_flux(json{{"kind", "tan"}}), ConfigError);
    CHECK_THROWS_AS(parse_flux(json{{"kind", "piecewise_polynomial"}, {"breakpoints", {0.0}}, {"pieces", {{0, 0, 1}, {0, 0, 2}}}}),
                    ConfigError);
}

TEST_CASE("grid, source and initial data parsing") {
    const auto g = parse_grid(json{{"x_lo", 0}, {"x_hi", 2}, {"n_cells", 20}, {"t_end", 1}, {"cfl", 0.4}});
    CHECK(g.dx() == doctest::Approx(0.1));
    CHECK(g.boundary == Boundary::periodic);
    CHECK_THROWS_AS(parse_grid(json{{"x_lo", 0}, {"x_hi", 2}, {"n_cells", 2.5}, {"t_end", 1}}), ConfigError);
    CHECK_THROWS_AS(parse_grid(json{{"x_lo", 0}, {"x_hi", 2}, {"n_cells", 4}, {"t_end", 1}}), ConfigError);
    CHECK_THROWS_AS(parse_grid(json{{"x_lo", 0}, {"x_hi", 2}, {"n_cells", 20}, {"t_end", 1}, {"boundary", "wall"}}),
                    ConfigError);

    CHECK(parse_source(json{{"kind", "constant"}, {"value", 2}}).constant_value() == 2.0);
    const auto table = parse_source(json{{"kind", "table"}, {"times", {0, 1}}, {"values", {{1, 2}, {3, 4}}}});
    CHECK(table.value(1.5, 1, 0.0) == 4.0);
    const auto ex = parse_source(json::parse(R"({"kind":"expression","terms":[
        {"polynomial":{"scale":2,"x":[0,1]}},
        {"trig":{"amplitude":1,"kx":1,"function":"cos"}},
        {"box":{"value":3,"x":[0,1],"t":[0,0.5]}}]})"));
    CHECK(ex.value(0.25, 0, 0.5) == doctest::Approx(1.0 + std::cos(0.5) + 3.0));
    CHECK_THROWS_AS(parse_source(json::parse(R"({"kind":"expression","terms":[{"exp":{}}]})")), ConfigError);
    CHECK_THROWS_AS(parse_source(json::parse(R"({"kind":"expression","terms":[{"trig":{"kz":1}}]})")), ConfigError);

    const auto u = parse_initial_data(json{{"table", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}}, g);
    CHECK(u[4] == 5.0);
    CHECK_THROWS_AS(parse_initial_data(json{{"table", {1, 2}}}, g), ConfigError);
    CHECK_THROWS_AS(parse_initial_data(json{{"table", {1}}, {"riemann", {{"left", 1}, {"right", 0}}}}, g), ConfigError);
    const auto r = parse_initial_data(json{{"riemann", {{"left", 1}, {"right", 0}}}}, g);
    CHECK(r.front() == 1.0);
    CHECK(r.back() == 0.0);
}

TEST_CASE("exponents command, sine profile") {
    const auto dir = scratch("exponents");
    const auto o = run_json(Command::exponents, json{{"alpha", 0.5}, {"beta", 1}, {"kappa", 1}, {"tau", 1}}, dir);
    REQUIRE(o.code == exit_ok);
    CHECK(o.out["s_star"].get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(o.out["r"].get<double>() == doctest::Approx(1.5));
    CHECK(o.out["baseline"]["lpt_s"].get<double>() == doctest::Approx(0.2));
    CHECK(fs::exists(dir / "out" / "exponents.json"));
}

TEST_CASE("exponents command, averaging inputs and profile files") {
    const auto dir = scratch("averaging");
    const auto o = run_json(Command::exponents,
                            json{{"alpha", 0.5}, {"beta", 1}, {"kappa", 1}, {"tau", 1}, {"gamma", 1}, {"sigma", 0},
                                 {"p", 2}, {"q", 2}, {"pbar", 2}, {"mu", 1}},
                            dir);
    REQUIRE(o.code == exit_ok);
    CHECK(o.out["s_star"].get<double>() == doctest::Approx(0.25));
    CHECK(o.out["baseline"]["lpt_theta"].get<double>() == doctest::Approx(0.125));
    CHECK(o.out["baseline"]["tadmor_tao_theta"].get<double>() == doctest::Approx(0.25));

    const auto partial = run_json(Command::exponents, json{{"alpha", 0.5}, {"beta", 1}, {"kappa", 1}, {"tau", 1}, {"p", 2}}, dir);
    CHECK(partial.code == exit_config);
    CHECK(partial.err["error"]["key"] == "gamma");

    std::ofstream(dir / "profile.json") << json{{"alpha", 0.5}, {"beta", 1}, {"kappa", 1}, {"tau", 1}, {"extra", "ignored"}}.dump();
    const auto prof = run_json(Command::exponents, json{{"profile", (dir / "profile.json").string()}}, dir);
    REQUIRE(prof.code == exit_ok);
    CHECK(prof.out["s_star"].get<double>() == doctest::Approx(1.0 / 3.0));

    const auto bad = run_json(Command::exponents, json{{"alpha", 2}, {"beta", 1}, {"kappa", 1}, {"tau", 1}}, dir);
    CHECK(bad.code == exit_config);
}

TEST_CASE("config errors exit 2 and name the key") {
    const auto dir = scratch("errors");
    const auto missing = run_json(Command::solve, json{{"grid", burgers_problem()["grid"]}, {"u0", burgers_problem()["u0"]}}, dir);
    CHECK(missing.code == exit_config);
    CHECK(missing.err["error"]["kind"] == "config");
    CHECK(missing.err["error"]["key"] == "flux");
    CHECK(missing.err["error"]["message"].get<std::string>().find("flux") != std::string::npos);

    auto extra = burgers_problem();
    extra["grid"]["dt"] = 0.1;
    const auto unknown = run_json(Command::solve, extra, dir);
    CHECK(unknown.code == exit_config);
    CHECK(unknown.err["error"]["key"] == "grid.dt");

    RunOptions opt;
    opt.config = dir / "missing.json";
    std::ostringstream out, err;
    CHECK(run(Command::solve, opt, out, err) == exit_config);
    std::ofstream(dir / "broken.json") << "{ not json";
    opt.config = dir / "broken.json";
    CHECK(run(Command::solve, opt, out, err) == exit_config);
    opt.config.reset();
    CHECK(run(Command::exponents, opt, out, err) == exit_config);
}

TEST_CASE("computation errors exit 1") {
    const auto dir = scratch("computation");
    const auto o = run_json(Command::analyze_flux,
                            json{{"flux", {{"kind", "polynomial"}, {"coefficients", {0, 1}}}},
                                 {"interval", {-1, 1}},
                                 {"options", {{"v_points", 10000}}}},
                            dir);
    CHECK(o.code == exit_computation);
    CHECK(o.err["error"]["kind"] == "computation");
}

TEST_CASE("analyze-flux command") {
    const auto dir = scratch("analyze");
    const auto o = run_json(Command::analyze_flux,
                            json{{"flux", {{"kind", "sine"}}}, {"interval", {-4, 4}}}, dir);
    REQUIRE(o.code == exit_ok);
    CHECK(o.out["alpha"].get<double>() == doctest::Approx(0.5).epsilon(0.1));
    CHECK(o.out["beta"].get<double>() == doctest::Approx(1.0).epsilon(0.1));
    CHECK(o.out["kappa"].get<double>() == doctest::Approx(1.0).epsilon(0.1));
    CHECK(o.out["tau"].get<double>() == doctest::Approx(1.0).epsilon(0.1));
    CHECK(o.out["zeros"].size() == 3);
    const auto csv = slurp(dir / "out" / "measures.csv");
    CHECK(csv.rfind("delta,lambda,measure\n", 0) == 0);

    // The profile feeds the exponents command directly.
    const auto e = run_json(Command::exponents, json{{"profile", (dir / "out" / "profile.json").string()}}, dir);
    REQUIRE(e.code == exit_ok);
    CHECK(e.out["s_star"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(0.1));
}

TEST_CASE("solve command writes the field and is deterministic") {
    const auto dir = scratch("solve");
    auto cfg = burgers_problem();
    cfg["source"] = {{"kind", "constant"}, {"value", 0.0}};
    const auto a = run_json(Command::solve, cfg, dir);
    REQUIRE(a.code == exit_ok);
    CHECK(a.out["t_final"].get<double>() == 0.5);
    CHECK(a.out["mass_initial"].get<double>() == doctest::Approx(0.5));
    const auto field = slurp(dir / "out" / "field.csv");
    const auto meta = slurp(dir / "out" / "field.json");
    CHECK(field.rfind("t,x=", 0) == 0);
    const auto b = run_json(Command::solve, cfg, dir);
    REQUIRE(b.code == exit_ok);
    CHECK(slurp(dir / "out" / "field.csv") == field);
    CHECK(slurp(dir / "out" / "field.json") == meta);
    CHECK(a.text == b.text);
}

TEST_CASE("defect command") {
    const auto dir = scratch("defect");
    auto cfg = burgers_problem();
    cfg["flux"] = {{"kind", "polynomial"}, {"coefficients", {0, 0, 0.5}}};
    cfg["grid"]["t_end"] = 1.0;
    cfg["grid"]["n_cells"] = 200;
    cfg["velocity"] = {{"n_v", 64}};
    cfg["moments"] = json::array({{{"v0", 0.0}, {"alpha", 0.5}}, {{"v0", 0.0}, {"alpha", 1.0}}});
    const auto o = run_json(Command::defect, cfg, dir);
    REQUIRE(o.code == exit_ok);
    CHECK(o.out["mass_per_unit_time"].get<double>() == doctest::Approx(1.0 / 12.0).epsilon(0.1));
    CHECK(o.out["moments"][0]["per_unit_time"].get<double>() == doctest::Approx(2.0 / 15.0).epsilon(0.15));
    CHECK(o.out["moments"][1]["moment"].get<double>() == doctest::Approx(o.out["total_mass"].get<double>()));
    CHECK(fs::exists(dir / "out" / "defect_columns.csv"));

    cfg["grid"]["store_every"] = 4;
    CHECK(run_json(Command::defect, cfg, dir).code == exit_config);
}

TEST_CASE("regularity command") {
    const auto dir = scratch("regularity");
    auto cfg = burgers_problem();
    cfg["grid"]["n_cells"] = 400;
    cfg["u0"] = {{"riemann", {{"left", 1.0}, {"right", 0.0}, {"x0", 0.25}}}};
    cfg["p"] = {1, 2};
    const auto o = run_json(Command::regularity, cfg, dir);
    REQUIRE(o.code == exit_ok);
    CHECK(o.out["fits"].size() == 4);
    CHECK(o.out["summary"][0]["s_hat_min"].get<double>() >= 1.0 / 3.0 - 0.05);
    CHECK(fs::exists(dir / "out" / "regularity_norms.csv"));
    cfg["direction"] = "diagonal";
    CHECK(run_json(Command::regularity, cfg, dir).code == exit_config);
}

TEST_CASE("contraction command") {
    const auto dir = scratch("contraction");
    const json grid = {{"x_lo", 0}, {"x_hi", 1}, {"n_cells", 32}, {"t_end", 0.2}};
    const json cfg = {{"flux", {{"kind", "sine"}}},
                      {"grid", grid},
                      {"run1", {{"u0", {{"expression", {{{"trig", {{"amplitude", 1}, {"kx", 6.283185307179586}}}}}}}}}},
                      {"run2", {{"u0", {{"riemann", {{"left", 0.5}, {"right", -0.5}}}}}, {"source", {{"kind", "constant"}, {"value", 0.3}}}}}};
    const auto o = run_json(Command::contraction, cfg, dir);
    REQUIRE(o.code == exit_ok);
    CHECK(o.out["pass"] == true);
    CHECK(o.out["deficit"].get<double>() >= -1e-10);

    const json rnd = {{"flux", {{"kind", "power_abs"}, {"ell", 1}}}, {"grid", grid}, {"random", {{"pairs", 5}}}};
    const auto r1 = run_json(Command::contraction, rnd, dir, 77);
    const auto r2 = run_json(Command::contraction, rnd, dir, 77);
    REQUIRE(r1.code == exit_ok);
    CHECK(r1.out["cases"].size() == 5);
    CHECK(r1.text == r2.text);
    const auto r3 = run_json(Command::contraction, rnd, dir, 78);
    CHECK(r3.text != r1.text);
}

TEST_CASE("verify command runs a subset") {
    const auto dir = scratch("verify");
    const auto o = run_json(Command::verify, json{{"only", {"exponent_table", "sine_profile"}}}, dir);
    CHECK(o.code == exit_ok);
    CHECK(o.text.find("[PASS] exponent_table") != std::string::npos);
    const auto report = json::parse(slurp(dir / "out" / "verify.json"));
    CHECK(report["criteria"].size() == 2);
    CHECK(report["pass"] == true);
    CHECK(run_json(Command::verify, json{{"only", {"bogus"}}}, dir).code == exit_config);
}
