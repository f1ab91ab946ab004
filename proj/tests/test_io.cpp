#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "ferulam/io.hpp"
#include "oracles.hpp"

using namespace ferulam;
using namespace ferulam::testing;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "ferulam_io_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips doubles exactly") {
    const RandomStream rng(151);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const double x = (rng.uniform(i) - 0.5) * std::pow(10.0, rng.uniform(100000 + i, -12, 12));
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(std::stod(format_double(0.1)) == 0.1);
    CHECK(std::stod(format_double(1e300)) == 1e300);
}

TEST_CASE("forcing JSON round trip") {
    const ForcingSpec spec = standard_spec2();
    const ForcingSpec back = forcing_from_json(forcing_to_json(spec));
    CHECK(back.c0() == spec.c0());
    CHECK(back.dim() == spec.dim());
    REQUIRE(back.modes().size() == spec.modes().size());
    for (std::size_t m = 0; m < spec.modes().size(); ++m) {
        CHECK(back.modes()[m].a == spec.modes()[m].a);
        CHECK(back.modes()[m].b == spec.modes()[m].b);
        CHECK(back.modes()[m].k == spec.modes()[m].k);
    }
    CHECK(back.d1() == spec.d1());
}

TEST_CASE("forcing JSON rejects resonant frequencies and bad shapes") {
    nlohmann::json j = forcing_to_json(standard_spec());
    j["nu"] = {1.0, 0.5};
    CHECK_THROWS_AS(forcing_from_json(j), ConfigError);

    nlohmann::json missing;
    missing["c0"] = 2.0;
    CHECK_THROWS_AS(forcing_from_json(missing), ConfigError);

    nlohmann::json badmode = forcing_to_json(standard_spec());
    badmode["modes"][0]["k"] = {1};   // wrong dimension
    CHECK_THROWS_AS(forcing_from_json(badmode), ConfigError);
}

TEST_CASE("config file parse errors carry line and column") {
    const fs::path dir = temp_dir();
    const fs::path bad = dir / "bad.json";
    write_text_file(bad, "{\n  \"forcing\": {\n");
    try {
        load_run_config(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line") != std::string::npos);
        CHECK(msg.find("column") != std::string::npos);
    }
    CHECK_THROWS_AS(load_run_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("run config parsing with forcing file indirection") {
    const fs::path dir = temp_dir();
    write_text_file(dir / "forcing.json", forcing_to_json(standard_spec2()).dump());
    nlohmann::json j;
    j["forcing_file"] = "forcing.json";
    j["seed"] = 99;
    j["census"] = {{"n_omega", 2}, {"n_orbits", 10}, {"n_max", 50}, {"E_esc", 150.0}};
    write_text_file(dir / "run.json", j.dump());
    const RunConfig cfg = load_run_config(dir / "run.json");
    CHECK(cfg.seed == 99);
    CHECK(cfg.census.seed == 99);
    CHECK(cfg.census.n_omega == 2);
    CHECK(cfg.forcing.modes().size() == 2);
}

TEST_CASE("config hash separates configs and is stable") {
    const fs::path dir = temp_dir();
    write_text_file(dir / "forcing.json", forcing_to_json(standard_spec2()).dump());
    nlohmann::json j;
    j["forcing_file"] = "forcing.json";
    j["seed"] = 1;
    write_text_file(dir / "run.json", j.dump());
    const RunConfig a = load_run_config(dir / "run.json");
    const RunConfig b = load_run_config(dir / "run.json");
    CHECK(config_hash(run_config_to_json(a)) == config_hash(run_config_to_json(b)));

    RunConfig c = a;
    c.seed = 2;
    CHECK(config_hash(run_config_to_json(a)) != config_hash(run_config_to_json(c)));
}

TEST_CASE("orbit CSV round trip is exact") {
    const ForcingSpec spec = standard_spec2();
    const auto trace =
        iterate(spec, TorusPoint{0.3, 0.7}, {0.25, 80.0}, 200, spec.energy_threshold() * 1.01);
    const fs::path path = temp_dir() / "orbit.csv";
    write_orbit_csv(path, trace);
    const OrbitTrace back = read_orbit_csv(path);
    REQUIRE(back.states.size() == trace.states.size());
    for (std::size_t i = 0; i < trace.states.size(); ++i) {
        CHECK(back.states[i].t == trace.states[i].t);
        CHECK(back.states[i].E == trace.states[i].E);
        CHECK(back.W_values[i] == trace.W_values[i]);
        if (i > 0) CHECK(back.tilde_residuals[i - 1] == trace.tilde_residuals[i - 1]);
    }
}

TEST_CASE("drift and haar CSVs are emitted with the demanded columns") {
    const fs::path dir = temp_dir();
    write_drift_csv(dir / "drift.csv", {{100.0, 0.5, 0.25, }});
    const CsvTable drift = read_csv(dir / "drift.csv");
    CHECK(drift.header == std::vector<std::string>{"E0", "drift", "delta_bound", "ratio"});
    REQUIRE(drift.rows.size() == 1);
    CHECK(std::stod(drift.rows[0][3]) == 2.0);

    HaarCheckReport hr;
    hr.n = 10;
    hr.rows.push_back({0, 0.5, 0.5, 0.0, 0.01, true});
    write_haar_csv(dir / "haar.csv", hr);
    const CsvTable haar = read_csv(dir / "haar.csv");
    CHECK(haar.header ==
          std::vector<std::string>{"set_id", "haar_estimate", "product_estimate", "diff",
                                   "three_sigma"});
}

TEST_CASE("SVG output is self-contained XML") {
    const fs::path path = temp_dir() / "chart.svg";
    write_line_chart_svg(path, "test", "x", "y",
                         {{"series a", {{0.0, 1.0}, {1.0, 2.0}, {2.0, 1.5}}}});
    const std::string svg = read_text_file(path);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);   // nothing external
}

TEST_CASE("census CSV tables are re-parseable") {
    const ForcingSpec spec = standard_spec2();
    CensusConfig cfg;
    cfg.n_omega = 2;
    cfg.n_orbits = 25;
    cfg.n_max = 200;
    cfg.E0_lo = 50.0;
    cfg.E0_hi = 100.0;
    cfg.E_esc = 150.0;
    cfg.seed = 8;
    const auto resolved = cfg.resolve(spec);
    const auto milestones = run_ensemble(spec, resolved);
    const auto report = assemble_census(spec, resolved, milestones);
    const auto prof = assemble_recurrence(resolved, milestones);

    const fs::path dir = temp_dir();
    write_census_fractions_csv(dir / "fr.csv", report);
    write_census_counts_csv(dir / "ct.csv", report);
    write_recurrence_csv(dir / "rc.csv", prof);

    const CsvTable fr = read_csv(dir / "fr.csv");
    CHECK(fr.rows.size() == 6);   // 2 omegas x 3 horizons
    for (const auto& row : fr.rows) CHECK(std::stod(row[2]) >= 0.0);

    const CsvTable ct = read_csv(dir / "ct.csv");
    REQUIRE(ct.rows.size() == 2);
    for (const auto& row : ct.rows) {
        std::size_t sum = 0;
        for (int c = 1; c <= 4; ++c) sum += std::stoul(row[c]);
        CHECK(sum == 25);
    }

    const CsvTable rc = read_csv(dir / "rc.csv");
    CHECK(rc.rows.size() == prof.bins.size() + 3);   // bins + three no-return rows
}

TEST_CASE("census report JSON serializes deterministically") {
    const ForcingSpec spec = standard_spec2();
    CensusConfig cfg;
    cfg.n_omega = 2;
    cfg.n_orbits = 20;
    cfg.n_max = 100;
    cfg.E0_lo = 50.0;
    cfg.E0_hi = 100.0;
    cfg.E_esc = 150.0;
    cfg.seed = 5;
    const auto r1 = run_census(spec, cfg);
    const auto r2 = run_census(spec, cfg);
    CHECK(census_report_to_json(r1).dump(2) == census_report_to_json(r2).dump(2));
}

} // TEST_SUITE
