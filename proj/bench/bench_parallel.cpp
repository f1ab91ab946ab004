// Compares the OpenMP ensemble kernels against their serial reference
// implementations: identical results required, wall time reported.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ferulam/census.hpp"
#include "ferulam/invariants.hpp"
#include "ferulam/io.hpp"
#include "ferulam/torus_flow.hpp"

using namespace ferulam;
using clock_type = std::chrono::steady_clock;

namespace {

double time_of(const char* name, const char* variant, double reference_secs, auto&& fn) {
    const auto t0 = clock_type::now();
    fn();
    const double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (reference_secs > 0.0)
        std::printf("%-22s %-10s %8.3f s   speedup %.2fx\n", name, variant, secs,
                    reference_secs / secs);
    else
        std::printf("%-22s %-10s %8.3f s\n", name, variant, secs);
    std::fflush(stdout);
    return secs;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads available: %d\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; all variants run serially\n\n");
#endif

    const ForcingSpec spec(FrequencyVector{1.0, std::sqrt(2.0)}, 2.0,
                           {{{1, 0}, 0.1, 0.0}, {{0, 1}, 0.0, 0.08}});

    // census ensemble
    {
        CensusConfig cfg;
        cfg.n_omega = 4;
        cfg.n_orbits = 400;
        cfg.n_max = 5000;
        cfg.E0_lo = 50.0;
        cfg.E0_hi = 100.0;
        cfg.E_esc = 150.0;
        cfg.seed = 99;
        CensusReport serial_report, parallel_report;
        const double ref = time_of("census ensemble", "serial", 0.0, [&] {
            serial_report = run_census_serial(spec, cfg);
        });
        time_of("census ensemble", "openmp", ref, [&] {
            parallel_report = run_census(spec, cfg, 0);
        });
        const bool same = census_report_to_json(serial_report).dump() ==
                          census_report_to_json(parallel_report).dump();
        std::printf("%-22s results identical: %s\n\n", "", same ? "yes" : "NO");
        if (!same) return 1;
    }

    // drift-constant estimation
    {
        double serial_c = 0.0, parallel_c = 0.0;
        const double ref = time_of("drift constant", "serial", 0.0, [&] {
            serial_c = estimate_drift_constant_serial(spec, 400000, 1e2, 1e6, 1.0, 7);
        });
        time_of("drift constant", "openmp", ref, [&] {
            parallel_c = estimate_drift_constant(spec, 400000, 1e2, 1e6, 1.0, 7, 0);
        });
        std::printf("%-22s results identical: %s\n\n", "",
                    serial_c == parallel_c ? "yes" : "NO");
        if (serial_c != parallel_c) return 1;
    }

    // Haar decomposition check
    {
        std::vector<Rectangle> rects;
        const RandomStream rrng(17, 3);
        for (std::uint64_t i = 0; i < 20; ++i) rects.push_back(random_rectangle(rrng, i, 2));
        HaarCheckReport serial_report, parallel_report;
        const double ref = time_of("haar decomposition", "serial", 0.0, [&] {
            serial_report = check_haar_decomposition_serial(spec.nu(), 2000000, rects, 5);
        });
        time_of("haar decomposition", "openmp", ref, [&] {
            parallel_report = check_haar_decomposition(spec.nu(), 2000000, rects, 5, 0);
        });
        bool same = serial_report.rows.size() == parallel_report.rows.size();
        for (std::size_t i = 0; same && i < serial_report.rows.size(); ++i)
            same = serial_report.rows[i].haar_estimate == parallel_report.rows[i].haar_estimate &&
                   serial_report.rows[i].product_estimate ==
                       parallel_report.rows[i].product_estimate;
        std::printf("%-22s results identical: %s\n", "", same ? "yes" : "NO");
        if (!same) return 1;
    }
    return 0;
}
