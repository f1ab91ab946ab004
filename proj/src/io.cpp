#include "ferulam/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ferulam {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// --- JSON --------------------------------------------------------------------

json forcing_to_json(const ForcingSpec& spec) {
    json j;
    j["nu"] = std::vector<double>(spec.nu().coords().begin(), spec.nu().coords().end());
    j["c0"] = spec.c0();
    json modes = json::array();
    for (const auto& m : spec.modes()) {
        json jm;
        jm["k"] = std::vector<int>(m.k.begin(), m.k.begin() + spec.dim());
        jm["a"] = m.a;
        jm["b"] = m.b;
        modes.push_back(jm);
    }
    j["modes"] = modes;
    return j;
}

namespace {

[[noreturn]] void config_fail(const std::string& msg) { throw ConfigError("config: " + msg); }

double require_number(const json& j, const std::string& key, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        config_fail("missing numeric field '" + key + "'");
    }
    if (!j.at(key).is_number()) config_fail("field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

} // namespace

ForcingSpec forcing_from_json(const json& j, int Q, double resonance_tol) {
    if (!j.is_object()) config_fail("forcing must be an object");
    if (!j.contains("nu") || !j.at("nu").is_array() || j.at("nu").empty())
        config_fail("forcing.nu must be a non-empty array");
    std::vector<double> nu_values;
    for (const auto& v : j.at("nu")) {
        if (!v.is_number()) config_fail("forcing.nu entries must be numbers");
        nu_values.push_back(v.get<double>());
    }
    FrequencyVector nu{std::span<const double>(nu_values.data(), nu_values.size())};
    const auto cert = nu.check_nonresonant(Q, resonance_tol);
    if (!cert.ok) {
        std::ostringstream os;
        os << "forcing.nu fails the nonresonance certificate: |k.nu| = " << cert.min_abs
           << " < " << resonance_tol << " for k = (";
        for (std::size_t i = 0; i < nu.dim(); ++i)
            os << (i ? "," : "") << cert.worst_k[i];
        os << ")";
        config_fail(os.str());
    }
    const double c0 = require_number(j, "c0");
    std::vector<ForcingMode> modes;
    if (j.contains("modes")) {
        if (!j.at("modes").is_array()) config_fail("forcing.modes must be an array");
        for (const auto& jm : j.at("modes")) {
            ForcingMode m;
            if (!jm.contains("k") || !jm.at("k").is_array() || jm.at("k").size() != nu.dim())
                config_fail("each mode needs an integer vector k of the same dimension as nu");
            std::size_t i = 0;
            for (const auto& kv : jm.at("k")) {
                if (!kv.is_number_integer()) config_fail("mode k entries must be integers");
                m.k[i++] = kv.get<int>();
            }
            m.a = require_number(jm, "a", 0.0);
            m.b = require_number(jm, "b", 0.0);
            modes.push_back(m);
        }
    }
    return ForcingSpec(nu, c0, std::move(modes));
}

namespace {

CensusConfig census_from_json(const json& j, std::uint64_t seed) {
    CensusConfig c;
    c.seed = seed;
    if (j.is_null()) return c;
    if (j.contains("n_omega")) c.n_omega = j.at("n_omega").get<std::size_t>();
    if (j.contains("n_orbits")) c.n_orbits = j.at("n_orbits").get<std::size_t>();
    if (j.contains("n_max")) c.n_max = j.at("n_max").get<std::size_t>();
    if (j.contains("t0_range")) {
        c.t0_lo = j.at("t0_range").at(0).get<double>();
        c.t0_hi = j.at("t0_range").at(1).get<double>();
    }
    if (j.contains("E0_range")) {
        c.E0_lo = j.at("E0_range").at(0).get<double>();
        c.E0_hi = j.at("E0_range").at(1).get<double>();
    }
    c.E_esc = require_number(j, "E_esc", c.E_esc);
    c.E_floor = require_number(j, "E_floor", c.E_floor);
    return c;
}

Rectangle rectangle_from_json(const json& j) {
    if (!j.contains("lo") || !j.contains("hi") || !j.at("lo").is_array() ||
        j.at("lo").size() != j.at("hi").size())
        config_fail("rectangle needs matching lo/hi arrays");
    Rectangle r;
    r.dim = j.at("lo").size();
    if (r.dim < 1 || r.dim > kMaxTorusDim) config_fail("rectangle dimension out of range");
    for (std::size_t i = 0; i < r.dim; ++i) {
        r.lo[i] = j.at("lo").at(i).get<double>();
        r.hi[i] = j.at("hi").at(i).get<double>();
        if (!(0.0 <= r.lo[i] && r.lo[i] < r.hi[i] && r.hi[i] <= 1.0))
            config_fail("rectangle intervals must satisfy 0 <= lo < hi <= 1");
    }
    return r;
}

} // namespace

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) config_fail("top-level config must be a JSON object");

    int Q = 20;
    double tol = 1e-9;
    if (j.contains("nonresonance")) {
        const auto& nr = j.at("nonresonance");
        if (nr.contains("Q")) Q = nr.at("Q").get<int>();
        if (nr.contains("tol")) tol = nr.at("tol").get<double>();
    }

    json forcing_json;
    if (j.contains("forcing")) {
        forcing_json = j.at("forcing");
    } else if (j.contains("forcing_file")) {
        std::filesystem::path p = j.at("forcing_file").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        if (!std::filesystem::exists(p))
            config_fail("forcing_file does not exist: " + p.string());
        forcing_json = json::parse(read_text_file(p));
    } else {
        config_fail("need 'forcing' (inline) or 'forcing_file'");
    }

    RunConfig cfg{forcing_from_json(forcing_json, Q, tol), 1,  Q, tol,
                  SimulateConfig{},                        CensusConfig{},
                  DriftConfig{},                           DecomposeConfig{}};
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("simulate")) {
        const auto& s = j.at("simulate");
        if (s.contains("omega")) {
            for (const auto& v : s.at("omega")) cfg.simulate.omega.push_back(v.get<double>());
            if (cfg.simulate.omega.size() != cfg.forcing.dim())
                config_fail("simulate.omega dimension must match forcing.nu");
        }
        cfg.simulate.t0 = require_number(s, "t0", cfg.simulate.t0);
        cfg.simulate.E0 = require_number(s, "E0", cfg.simulate.E0);
        if (s.contains("n_max")) cfg.simulate.n_max = s.at("n_max").get<std::size_t>();
        cfg.simulate.E_floor = require_number(s, "E_floor", cfg.simulate.E_floor);
    }
    cfg.census = census_from_json(j.contains("census") ? j.at("census") : json(), cfg.seed);
    if (j.contains("drift")) {
        const auto& d = j.at("drift");
        if (d.contains("n_per_decade")) cfg.drift.n_per_decade = d.at("n_per_decade").get<std::size_t>();
        if (d.contains("n_chat")) cfg.drift.n_chat = d.at("n_chat").get<std::size_t>();
        if (d.contains("E_range")) {
            cfg.drift.E_lo = d.at("E_range").at(0).get<double>();
            cfg.drift.E_hi = d.at("E_range").at(1).get<double>();
        }
        cfg.drift.C = require_number(d, "C", cfg.drift.C);
    }
    if (j.contains("decompose")) {
        const auto& d = j.at("decompose");
        if (d.contains("n")) cfg.decompose.n = d.at("n").get<std::size_t>();
        if (d.contains("rectangles")) {
            if (d.at("rectangles").is_number_integer()) {
                cfg.decompose.n_rectangles = d.at("rectangles").get<std::size_t>();
            } else if (d.at("rectangles").is_array()) {
                for (const auto& jr : d.at("rectangles"))
                    cfg.decompose.rectangles.push_back(rectangle_from_json(jr));
                cfg.decompose.n_rectangles = cfg.decompose.rectangles.size();
            } else {
                config_fail("decompose.rectangles must be a count or an array");
            }
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) config_fail("config file does not exist: " + path.string());
    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // translate the byte offset into line/column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        config_fail("JSON parse error at line " + std::to_string(line) + ", column " +
                    std::to_string(col) + ": " + e.what());
    }
    return parse_run_config(j, path.parent_path());
}

json run_config_to_json(const RunConfig& cfg) {
    json j;
    j["forcing"] = forcing_to_json(cfg.forcing);
    j["seed"] = cfg.seed;
    j["nonresonance"] = {{"Q", cfg.nonresonance_Q}, {"tol", cfg.resonance_tol}};
    j["simulate"] = {{"omega", cfg.simulate.omega}, {"t0", cfg.simulate.t0},
                     {"E0", cfg.simulate.E0},       {"n_max", cfg.simulate.n_max},
                     {"E_floor", cfg.simulate.E_floor}};
    j["census"] = {{"n_omega", cfg.census.n_omega},
                   {"n_orbits", cfg.census.n_orbits},
                   {"n_max", cfg.census.n_max},
                   {"t0_range", {cfg.census.t0_lo, cfg.census.t0_hi}},
                   {"E0_range", {cfg.census.E0_lo, cfg.census.E0_hi}},
                   {"E_esc", cfg.census.E_esc},
                   {"E_floor", cfg.census.E_floor},
                   {"seed", cfg.census.seed}};
    j["drift"] = {{"n_per_decade", cfg.drift.n_per_decade},
                  {"n_chat", cfg.drift.n_chat},
                  {"E_range", {cfg.drift.E_lo, cfg.drift.E_hi}},
                  {"C", cfg.drift.C}};
    json rects = json::array();
    for (const auto& r : cfg.decompose.rectangles) {
        rects.push_back({{"lo", std::vector<double>(r.lo.begin(), r.lo.begin() + r.dim)},
                         {"hi", std::vector<double>(r.hi.begin(), r.hi.begin() + r.dim)}});
    }
    j["decompose"] = {{"n", cfg.decompose.n},
                      {"n_rectangles", cfg.decompose.n_rectangles},
                      {"rectangles", rects}};
    return j;
}

std::string config_hash(const json& canonical) {
    const std::string s = canonical.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

json wilson_to_json(const WilsonInterval& w) { return json::array({w.lo, w.hi}); }

json torus_point_to_json(const TorusPoint& p) {
    return json(std::vector<double>(p.coords().begin(), p.coords().end()));
}

} // namespace

json census_report_to_json(const CensusReport& report) {
    json j;
    j["horizons"] = report.horizons;
    j["escape_fraction_total"] = report.escape_fraction_total;
    j["escape_ci_total"] = {wilson_to_json(report.escape_ci_total[0]),
                            wilson_to_json(report.escape_ci_total[1]),
                            wilson_to_json(report.escape_ci_total[2])};
    json per = json::array();
    for (const auto& oc : report.per_omega) {
        json o;
        o["omega"] = torus_point_to_json(oc.omega);
        o["counts"] = {{"escaping_candidate", oc.counts[0]},
                       {"returned", oc.counts[1]},
                       {"left_domain", oc.counts[2]},
                       {"alive", oc.counts[3]}};
        o["n_diverged"] = oc.n_diverged;
        o["escape_fraction"] = oc.escape_fraction;
        o["escape_ci"] = {wilson_to_json(oc.escape_ci[0]), wilson_to_json(oc.escape_ci[1]),
                          wilson_to_json(oc.escape_ci[2])};
        o["growth_quantiles"] = {{"q50", oc.growth_quantiles[0]},
                                 {"q90", oc.growth_quantiles[1]},
                                 {"q99", oc.growth_quantiles[2]},
                                 {"max", oc.growth_quantiles[3]}};
        per.push_back(o);
    }
    j["per_omega"] = per;
    return j;
}

json recurrence_to_json(const RecurrenceProfile& prof) {
    json j;
    json bins = json::array();
    for (std::size_t b = 0; b < prof.bins.size(); ++b)
        bins.push_back({{"lo", prof.bins[b].first},
                        {"hi", prof.bins[b].second},
                        {"count", prof.counts[b]}});
    j["bins"] = bins;
    j["no_return_full"] = prof.no_return_full;
    j["no_return_half"] = prof.no_return_half;
    j["no_return_quarter"] = prof.no_return_quarter;
    j["total"] = prof.total;
    return j;
}

json drift_scaling_to_json(const DriftScalingReport& report, double c_hat_estimate) {
    json j;
    json decades = json::array();
    for (const auto& d : report.decades)
        decades.push_back({{"E_lo", d.E_lo},
                           {"E_hi", d.E_hi},
                           {"E_mid", d.E_mid},
                           {"max_drift", d.max_drift},
                           {"max_ratio", d.max_ratio},
                           {"n", d.n}});
    j["decades"] = decades;
    j["slope"] = report.slope;
    j["intercept"] = report.intercept;
    j["r2"] = report.r2;
    j["c_hat_scaling_samples"] = report.c_hat;
    j["c_hat"] = c_hat_estimate;
    return j;
}

json haar_check_to_json(const HaarCheckReport& report) {
    json j;
    j["n"] = report.n;
    j["failures"] = report.failures;
    json rows = json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"set_id", r.set_id},
                        {"haar_estimate", r.haar_estimate},
                        {"product_estimate", r.product_estimate},
                        {"diff", r.diff},
                        {"three_sigma", r.three_sigma},
                        {"pass", r.pass}});
    j["rows"] = rows;
    return j;
}

json noninjectivity_to_json(const NonInjectivityExample& ex) {
    json j;
    json harmonics = json::array();
    for (const auto& h : ex.forcing.harmonics())
        harmonics.push_back({{"m", h.m}, {"alpha", h.alpha}, {"beta", h.beta}});
    j["forcing"] = {{"c0", ex.forcing.c0()},
                    {"harmonics", harmonics},
                    {"slope_sup", ex.forcing.slope_sup()}};
    j["t_tilde"] = {ex.t_tilde1, ex.t_tilde2};
    j["v1"] = ex.v1;
    j["v0"] = ex.v0;
    j["preimage1"] = {{"t", ex.preimage1.t}, {"v", ex.preimage1.v}};
    j["preimage2"] = {{"t", ex.preimage2.t}, {"v", ex.preimage2.v}};
    j["image1"] = {{"t", ex.image1.t}, {"v", ex.image1.v}};
    j["image2"] = {{"t", ex.image2.t}, {"v", ex.image2.v}};
    j["image_diff"] = ex.image_diff;
    j["preimage_separation"] = ex.preimage_separation;
    return j;
}

// --- CSV ---------------------------------------------------------------------

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open for reading: " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_orbit_csv(const std::filesystem::path& path, const OrbitTrace& trace) {
    std::ostringstream os;
    os << "step,t,E,v,W,residual\n";
    for (std::size_t i = 0; i < trace.states.size(); ++i) {
        const double res = i == 0 ? 0.0 : trace.tilde_residuals[i - 1];
        os << i << ',' << format_double(trace.states[i].t) << ','
           << format_double(trace.states[i].E) << ','
           << format_double(std::sqrt(2.0 * trace.states[i].E)) << ','
           << format_double(trace.W_values[i]) << ',' << format_double(res) << '\n';
    }
    write_text_file(path, os.str());
}

void write_drift_csv(const std::filesystem::path& path, const std::vector<DriftRecord>& records) {
    std::ostringstream os;
    os << "E0,drift,delta_bound,ratio\n";
    for (const auto& r : records)
        os << format_double(r.E0) << ',' << format_double(r.drift) << ','
           << format_double(r.delta_bound) << ',' << format_double(r.drift / r.delta_bound)
           << '\n';
    write_text_file(path, os.str());
}

void write_haar_csv(const std::filesystem::path& path, const HaarCheckReport& report) {
    std::ostringstream os;
    os << "set_id,haar_estimate,product_estimate,diff,three_sigma\n";
    for (const auto& r : report.rows)
        os << r.set_id << ',' << format_double(r.haar_estimate) << ','
           << format_double(r.product_estimate) << ',' << format_double(r.diff) << ','
           << format_double(r.three_sigma) << '\n';
    write_text_file(path, os.str());
}

void write_census_fractions_csv(const std::filesystem::path& path, const CensusReport& report) {
    std::ostringstream os;
    os << "omega_index,horizon,escape_fraction,ci_lo,ci_hi\n";
    for (std::size_t i = 0; i < report.per_omega.size(); ++i) {
        const auto& oc = report.per_omega[i];
        for (int k = 0; k < 3; ++k)
            os << i << ',' << report.horizons[k] << ',' << format_double(oc.escape_fraction[k])
               << ',' << format_double(oc.escape_ci[k].lo) << ','
               << format_double(oc.escape_ci[k].hi) << '\n';
    }
    write_text_file(path, os.str());
}

void write_census_counts_csv(const std::filesystem::path& path, const CensusReport& report) {
    std::ostringstream os;
    os << "omega_index,escaping_candidate,returned,left_domain,alive,diverged\n";
    for (std::size_t i = 0; i < report.per_omega.size(); ++i) {
        const auto& oc = report.per_omega[i];
        os << i << ',' << oc.counts[0] << ',' << oc.counts[1] << ',' << oc.counts[2] << ','
           << oc.counts[3] << ',' << oc.n_diverged << '\n';
    }
    write_text_file(path, os.str());
}

void write_recurrence_csv(const std::filesystem::path& path, const RecurrenceProfile& prof) {
    std::ostringstream os;
    os << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < prof.bins.size(); ++b)
        os << prof.bins[b].first << ',' << prof.bins[b].second << ',' << prof.counts[b] << '\n';
    os << "no_return_quarter,," << prof.no_return_quarter << '\n';
    os << "no_return_half,," << prof.no_return_half << '\n';
    os << "no_return_full,,"
       << prof.no_return_full << '\n';
    write_text_file(path, os.str());
}

CsvTable read_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    CsvTable table;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (first) {
            table.header = fields;
            first = false;
        } else {
            table.rows.push_back(fields);
        }
    }
    return table;
}

OrbitTrace read_orbit_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    if (table.header != std::vector<std::string>{"step", "t", "E", "v", "W", "residual"})
        throw ConfigError("orbit CSV: unexpected header in " + path.string());
    OrbitTrace trace;
    for (const auto& row : table.rows) {
        if (row.size() != 6) throw ConfigError("orbit CSV: malformed row");
        trace.states.push_back({std::stod(row[1]), std::stod(row[2])});
        trace.W_values.push_back(std::stod(row[4]));
        if (trace.states.size() > 1) trace.tilde_residuals.push_back(std::stod(row[5]));
    }
    trace.status = OrbitStatus::Completed;
    trace.stop_step = trace.states.empty() ? 0 : trace.states.size() - 1;
    return trace;
}

// --- SVG ---------------------------------------------------------------------

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

} // namespace

void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series) {
    const double width = 720, height = 480;
    const double ml = 70, mr = 150, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    const auto Y = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
       << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
       << "<text x=\"" << ml << "\" y=\"24\" font-family=\"monospace\" font-size=\"15\">"
       << title << "</text>\n";

    // axes and ticks
    os << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(mt + ph) << "\" x2=\""
       << svg_num(ml + pw) << "\" y2=\"" << svg_num(mt + ph) << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(mt) << "\" x2=\"" << svg_num(ml)
       << "\" y2=\"" << svg_num(mt + ph) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double fy = ymin + (ymax - ymin) * i / 5.0;
        os << "<line x1=\"" << svg_num(X(fx)) << "\" y1=\"" << svg_num(mt + ph) << "\" x2=\""
           << svg_num(X(fx)) << "\" y2=\"" << svg_num(mt + ph + 5) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << svg_num(X(fx)) << "\" y=\"" << svg_num(mt + ph + 20)
           << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">"
           << tick_label(fx) << "</text>\n"
           << "<line x1=\"" << svg_num(ml - 5) << "\" y1=\"" << svg_num(Y(fy)) << "\" x2=\""
           << svg_num(ml) << "\" y2=\"" << svg_num(Y(fy)) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << svg_num(ml - 8) << "\" y=\"" << svg_num(Y(fy) + 4)
           << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">"
           << tick_label(fy) << "</text>\n";
    }
    os << "<text x=\"" << svg_num(ml + pw / 2) << "\" y=\"" << svg_num(height - 12)
       << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">" << x_label
       << "</text>\n"
       << "<text x=\"16\" y=\"" << svg_num(mt + ph / 2)
       << "\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 16 "
       << svg_num(mt + ph / 2) << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[s].points)
            os << svg_num(X(x)) << ',' << svg_num(Y(y)) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << svg_num(ml + pw + 10) << "\" y=\"" << svg_num(mt + 14.0 * (s + 1))
           << "\" font-family=\"monospace\" font-size=\"11\" fill=\"" << color << "\">"
           << series[s].name << "</text>\n";
    }
    os << "</svg>\n";
    write_text_file(path, os.str());
}

void write_orbit_svg(const std::filesystem::path& path, const OrbitTrace& trace) {
    SvgSeries s;
    s.name = "orbit";
    const std::size_t n = trace.states.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);
    for (std::size_t i = 0; i < n; i += stride)
        s.points.emplace_back(trace.states[i].t, trace.states[i].E);
    if ((n - 1) % stride != 0) s.points.emplace_back(trace.states[n - 1].t, trace.states[n - 1].E);
    write_line_chart_svg(path, "orbit energy trace", "t", "E", {s});
}

void write_census_svg(const std::filesystem::path& path, const CensusReport& report) {
    std::vector<SvgSeries> series;
    for (std::size_t i = 0; i < report.per_omega.size(); ++i) {
        SvgSeries s;
        s.name = "omega " + std::to_string(i);
        for (int k = 0; k < 3; ++k)
            s.points.emplace_back(static_cast<double>(report.horizons[k]),
                                  report.per_omega[i].escape_fraction[k]);
        series.push_back(std::move(s));
    }
    SvgSeries total;
    total.name = "total";
    for (int k = 0; k < 3; ++k)
        total.points.emplace_back(static_cast<double>(report.horizons[k]),
                                  report.escape_fraction_total[k]);
    series.push_back(std::move(total));
    write_line_chart_svg(path, "escape-candidate fraction vs horizon", "horizon (steps)",
                         "fraction", series);
}

} // namespace ferulam
