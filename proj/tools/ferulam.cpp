// ferulam command-line driver: simulate / census / drift / decompose /
// counterexample / validate. All reports embed the resolved config, its hash
// and the seed; outputs are byte-identical for a given (config, seed) at any
// --workers value.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ferulam/census.hpp"
#include "ferulam/collision.hpp"
#include "ferulam/errors.hpp"
#include "ferulam/invariants.hpp"
#include "ferulam/io.hpp"
#include "ferulam/pingpong.hpp"
#include "ferulam/torus_flow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ferulam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    int workers = 0;
    std::string out_dir;
};

fs::path resolve_out_dir(const CommonOptions& opt) {
    if (const char* env = std::getenv("FERULAM_OUT"); env && *env) return fs::path(env);
    if (!opt.out_dir.empty()) return fs::path(opt.out_dir);
    return fs::path(".");
}

RunConfig load_with_overrides(const CommonOptions& opt) {
    if (opt.config_path.empty()) throw ConfigError("--config PATH is required");
    RunConfig cfg = load_run_config(opt.config_path);
    if (opt.seed) {
        cfg.seed = *opt.seed;
        cfg.census.seed = *opt.seed;
    }
    return cfg;
}

json report_envelope(const RunConfig& cfg) {
    json j;
    const json canonical = run_config_to_json(cfg);
    j["config"] = canonical;
    j["config_hash"] = config_hash(canonical);
    j["seed"] = cfg.seed;
    return j;
}

int cmd_validate(const CommonOptions& opt) {
    const RunConfig cfg = load_with_overrides(opt);
    const auto cert = cfg.forcing.nu().check_nonresonant(cfg.nonresonance_Q, cfg.resonance_tol);
    const auto vs = v_star(cfg.forcing);
    std::cout << "forcing: N=" << cfg.forcing.dim() << " modes=" << cfg.forcing.modes().size()
              << " a=" << format_double(cfg.forcing.lower())
              << " b=" << format_double(cfg.forcing.upper()) << "\n"
              << "derivative bounds: D1=" << format_double(cfg.forcing.d1())
              << " D2=" << format_double(cfg.forcing.d2())
              << " D3=" << format_double(cfg.forcing.d3()) << "\n"
              << "v*: certified=" << format_double(vs.bound)
              << " grid=" << format_double(vs.grid_sup) << "\n"
              << "nonresonance: |k.nu| >= " << format_double(cert.min_abs) << " for |k_i| <= "
              << cfg.nonresonance_Q << "\n";
    cfg.census.resolve(cfg.forcing);
    std::cout << "config ok (hash " << config_hash(run_config_to_json(cfg)) << ")\n";
    return kExitOk;
}

int cmd_simulate(const CommonOptions& opt) {
    const RunConfig cfg = load_with_overrides(opt);
    const fs::path out = resolve_out_dir(opt);

    TorusPoint omega;
    if (cfg.simulate.omega.empty()) {
        omega = haar_sample(substream(cfg.seed, 0x51, 0), 1, cfg.forcing.dim())[0];
    } else {
        omega = TorusPoint(std::span<const double>(cfg.simulate.omega.data(),
                                                   cfg.simulate.omega.size()));
    }
    double floor = cfg.simulate.E_floor;
    if (floor <= 0.0) floor = 1.01 * cfg.forcing.energy_threshold();
    if (!(cfg.simulate.E0 > floor))
        throw ConfigError("simulate: E0 must exceed E_floor = " + format_double(floor));

    const OrbitTrace trace =
        iterate(cfg.forcing, omega, {cfg.simulate.t0, cfg.simulate.E0}, cfg.simulate.n_max, floor);
    if (trace.status == OrbitStatus::Diverged)
        throw NoConvergenceError("simulate: orbit diverged at step " +
                                 std::to_string(trace.stop_step));

    write_orbit_csv(out / "orbit.csv", trace);
    write_orbit_svg(out / "orbit.svg", trace);
    json j = report_envelope(cfg);
    j["omega"] = std::vector<double>(omega.coords().begin(), omega.coords().end());
    j["status"] = trace.status == OrbitStatus::Completed ? "completed" : "left_domain";
    j["steps"] = trace.stop_step;
    j["final_E"] = trace.states.back().E;
    write_text_file(out / "simulate.json", j.dump(2) + "\n");
    std::cout << "wrote " << (out / "orbit.csv").string() << " (" << trace.states.size()
              << " rows), orbit.svg, simulate.json\n";
    return kExitOk;
}

int cmd_census(const CommonOptions& opt) {
    const RunConfig cfg = load_with_overrides(opt);
    const fs::path out = resolve_out_dir(opt);
    const CensusConfig resolved = cfg.census.resolve(cfg.forcing);

    const auto milestones = run_ensemble(cfg.forcing, resolved, opt.workers);
    const CensusReport report = assemble_census(cfg.forcing, resolved, milestones);
    const RecurrenceProfile prof = assemble_recurrence(resolved, milestones);

    json j = report_envelope(cfg);
    j["census"] = census_report_to_json(report);
    j["recurrence"] = recurrence_to_json(prof);
    write_text_file(out / "census.json", j.dump(2) + "\n");
    write_census_fractions_csv(out / "census_fractions.csv", report);
    write_census_counts_csv(out / "census_counts.csv", report);
    write_recurrence_csv(out / "recurrence.csv", prof);
    write_census_svg(out / "census.svg", report);

    std::cout << "census: " << resolved.n_omega << " omega x " << resolved.n_orbits
              << " orbits, horizon " << resolved.n_max << "\n";
    for (int k = 0; k < 3; ++k)
        std::cout << "  escape fraction @" << report.horizons[k] << ": "
                  << format_double(report.escape_fraction_total[k]) << "  [95% "
                  << format_double(report.escape_ci_total[k].lo) << ", "
                  << format_double(report.escape_ci_total[k].hi) << "]\n";
    std::cout << "  no-return mass: half " << prof.no_return_half << ", full "
              << prof.no_return_full << " of " << prof.total << "\n";
    return kExitOk;
}

int cmd_drift(const CommonOptions& opt) {
    const RunConfig cfg = load_with_overrides(opt);
    const fs::path out = resolve_out_dir(opt);
    const auto& d = cfg.drift;
    const DriftScalingReport scaling = drift_scaling(cfg.forcing, d.n_per_decade, d.E_lo, d.E_hi,
                                                     d.C, cfg.seed, opt.workers);
    const double c_hat =
        estimate_drift_constant(cfg.forcing, d.n_chat, d.E_lo, d.E_hi, d.C, cfg.seed, opt.workers);

    write_drift_csv(out / "drift_records.csv", scaling.sample_records);
    json j = report_envelope(cfg);
    j["drift"] = drift_scaling_to_json(scaling, c_hat);
    write_text_file(out / "drift.json", j.dump(2) + "\n");

    std::vector<SvgSeries> series(1);
    series[0].name = "max drift";
    for (const auto& dec : scaling.decades)
        series[0].points.emplace_back(std::log10(dec.E_mid), std::log10(dec.max_drift));
    write_line_chart_svg(out / "drift.svg", "per-decade max drift (log-log)", "log10 E0",
                         "log10 max drift", series);

    std::cout << "drift: slope " << format_double(scaling.slope) << " (R^2 "
              << format_double(scaling.r2) << "), C_hat " << format_double(c_hat) << "\n";
    return kExitOk;
}

int cmd_decompose(const CommonOptions& opt) {
    const RunConfig cfg = load_with_overrides(opt);
    const fs::path out = resolve_out_dir(opt);
    std::vector<Rectangle> rects = cfg.decompose.rectangles;
    if (rects.empty()) {
        const RandomStream rrng = substream(cfg.seed, 0x52, 0);
        for (std::size_t i = 0; i < cfg.decompose.n_rectangles; ++i)
            rects.push_back(random_rectangle(rrng, i, cfg.forcing.dim()));
    }
    const HaarCheckReport report = check_haar_decomposition(
        cfg.forcing.nu(), cfg.decompose.n, rects, cfg.seed, opt.workers);
    write_haar_csv(out / "decompose.csv", report);
    json j = report_envelope(cfg);
    j["decompose"] = haar_check_to_json(report);
    write_text_file(out / "decompose.json", j.dump(2) + "\n");
    for (const auto& row : report.rows)
        std::cout << "rect " << row.set_id << ": haar " << format_double(row.haar_estimate)
                  << " product " << format_double(row.product_estimate) << " diff "
                  << format_double(row.diff) << " 3sigma " << format_double(row.three_sigma)
                  << (row.pass ? "  pass" : "  FAIL") << "\n";
    std::cout << report.failures << " of " << report.rows.size() << " rectangles outside 3 sigma\n";
    return kExitOk;
}

int cmd_counterexample(const CommonOptions& opt) {
    const fs::path out = resolve_out_dir(opt);
    const NonInjectivityExample ex = build_noninjectivity_example();
    json j;
    j["counterexample"] = noninjectivity_to_json(ex);
    write_text_file(out / "counterexample.json", j.dump(2) + "\n");
    std::cout << "two distinct impact states with a common successor:\n"
              << "              t                        v\n"
              << "  preimage1  " << format_double(ex.preimage1.t) << "   "
              << format_double(ex.preimage1.v) << "\n"
              << "  preimage2  " << format_double(ex.preimage2.t) << "   "
              << format_double(ex.preimage2.v) << "\n"
              << "  image1     " << format_double(ex.image1.t) << "   "
              << format_double(ex.image1.v) << "\n"
              << "  image2     " << format_double(ex.image2.t) << "   "
              << format_double(ex.image2.v) << "\n"
              << "  max image difference: " << format_double(ex.image_diff) << "\n"
              << "  preimage separation:  " << format_double(ex.preimage_separation) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fermi-Ulam ping-pong laboratory with quasi-periodic forcing on the N-torus"};
    app.require_subcommand(1);

    CommonOptions opt;
    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opt.config_path, "JSON run configuration");
        if (needs_config) c->required();
        sub->add_option("--seed", [&opt](const std::vector<std::string>& v) {
            opt.seed = std::stoull(v[0]);
            return true;
        }, "override the config seed");
        sub->add_option("--workers", opt.workers, "worker threads (0 = hardware default)");
        sub->add_option("--out", opt.out_dir, "output directory (FERULAM_OUT overrides)");
    };

    auto* simulate = app.add_subcommand("simulate", "iterate one orbit, write CSV + SVG");
    auto* census = app.add_subcommand("census", "Monte-Carlo escape/recurrence census");
    auto* drift = app.add_subcommand("drift", "adiabatic-invariant drift scaling");
    auto* decompose = app.add_subcommand("decompose", "Haar decomposition Monte-Carlo check");
    auto* counterexample =
        app.add_subcommand("counterexample", "non-injectivity construction for the planar map");
    auto* validate = app.add_subcommand("validate", "validate a run configuration");
    for (auto* sub : {simulate, census, drift, decompose, validate}) add_common(sub, true);
    add_common(counterexample, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(opt);
        if (census->parsed()) return cmd_census(opt);
        if (drift->parsed()) return cmd_drift(opt);
        if (decompose->parsed()) return cmd_decompose(opt);
        if (counterexample->parsed()) return cmd_counterexample(opt);
        if (validate->parsed()) return cmd_validate(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
