#include "ims/config.hpp"
#include "ims/errors.hpp"
#include "ims/experiments.hpp"
#include "ims/families.hpp"
#include "ims/map_parser.hpp"
#include "ims/norms.hpp"
#include "ims/spectrum.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using ims::AnalyticMap;
using ims::RunConfig;
using nlohmann::json;

namespace {

struct Output {
    std::unique_ptr<std::ofstream> file;
    std::ostream* out = &std::cout;

    void open(const std::string& path) {
        if (path.empty()) return;
        file = std::make_unique<std::ofstream>(path);
        if (!*file) throw ims::RangeError("cannot open output file " + path);
        out = file.get();
    }
    std::ostream& stream() { return *out; }
};

std::pair<int, int> parse_ladder(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw ims::RangeError("ladder must be KMIN:KMAX");
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

std::vector<double> parse_range(const std::string& s) {
    // A:B:STEP inclusive
    auto c1 = s.find(':');
    auto c2 = s.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ims::RangeError("range must be A:B:STEP");
    double a = std::stod(s.substr(0, c1));
    double b = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    double step = std::stod(s.substr(c2 + 1));
    if (!(step > 0.0)) throw ims::RangeError("range step must be positive");
    std::vector<double> out;
    for (double t = a; t <= b + 1e-12; t += step) out.push_back(t);
    return out;
}

ims::SpectrumOptions spectrum_options(const RunConfig& cfg, ims::ResultCache* cache) {
    ims::SpectrumOptions opts;
    opts.ladder = cfg.ladder();
    opts.window = cfg.window;
    opts.rtol = cfg.rtol;
    opts.circle.density = cfg.density;
    opts.cache = cache;
    return opts;
}

json curve_rows_json(const std::vector<ims::CurveRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        if (!row.estimate) {
            arr.push_back(json{{"t", row.t}, {"error", row.error}});
            continue;
        }
        const auto& e = *row.estimate;
        arr.push_back(json{{"t", e.t},
                           {"beta_hat", e.beta_hat},
                           {"regime", ims::regime_name(e.regime)},
                           {"window", e.window},
                           {"fit_residual", e.fit_residual},
                           {"slope_min", e.slope_min},
                           {"slope_max", e.slope_max}});
    }
    return arr;
}

json growth_report_json(const ims::GrowthReport& rep) {
    json profile = json::array();
    for (const auto& [r, v] : rep.tail_profile) profile.push_back(json::array({r, v}));
    return json{{"schema_version", 1},
                {"value", rep.value},
                {"witness", json::array({rep.witness.real(), rep.witness.imag()})},
                {"j", rep.j},
                {"grid",
                 {{"r_min", rep.grid.r_min},
                  {"r_max", rep.grid.r_max},
                  {"radial_steps", rep.grid.radial_steps},
                  {"angular_steps", rep.grid.angular_steps}}},
                {"tail_profile", profile}};
}

int run(int argc, char** argv) {
    RunConfig cfg;
    if (const char* env = std::getenv("IMS_CACHE")) cfg.cache_path = env;
    // config file first, flags override
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") cfg.apply_file(argv[i + 1]);

    CLI::App app{"integral means spectrum laboratory"};
    app.require_subcommand(1);

    std::string ladder_str, cache_flag, out_path, config_path;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    auto* opt_ladder = app.add_option("--ladder", ladder_str, "radius ladder KMIN:KMAX");
    auto* opt_window = app.add_option("--window", cfg.window, "regression window (rungs)");
    auto* opt_rtol = app.add_option("--rtol", cfg.rtol, "circle integral relative tolerance");
    auto* opt_density = app.add_option("--density", cfg.density, "points per boundary peak width");
    auto* opt_cache = app.add_option("--cache", cache_flag, "persistent cache file path");
    auto* opt_format = app.add_option("--format", cfg.format, "csv or json")
                           ->check(CLI::IsMember({"csv", "json"}));
    auto* opt_threads = app.add_option("--threads", cfg.threads, "worker thread cap");
    auto* opt_seed = app.add_option("--seed", cfg.seed, "sampling seed echoed in headers");
    app.add_option("--out", out_path, "write output to a file instead of stdout");
    (void)opt_window;
    (void)opt_rtol;
    (void)opt_density;
    (void)opt_format;
    (void)opt_threads;
    (void)opt_seed;

    // spectrum MAP --t LIST
    auto* sc_spectrum = app.add_subcommand("spectrum", "estimate beta for listed exponents");
    std::string spec_map;
    std::vector<double> spec_ts;
    sc_spectrum->add_option("map", spec_map, "map expression")->required();
    sc_spectrum->add_option("--t", spec_ts, "exponents t")->required()->delimiter(',');

    // curve MAP --t-range A:B:STEP
    auto* sc_curve = app.add_subcommand("curve", "spectrum over a t range");
    std::string curve_map, curve_range;
    sc_curve->add_option("map", curve_map, "map expression")->required();
    sc_curve->add_option("--t-range", curve_range, "A:B:STEP inclusive")->required();

    // norms MAP --j {1|2}
    auto* sc_norms = app.add_subcommand("norms", "growth norm report");
    std::string norms_map;
    int norms_j = 1;
    sc_norms->add_option("map", norms_map, "map expression")->required();
    sc_norms->add_option("--j", norms_j, "weight order")->check(CLI::IsMember({1, 2}));

    // verify [--suite NAME]
    auto* sc_verify = app.add_subcommand("verify", "run the verification checks");
    std::string suite;
    sc_verify->add_option("--suite", suite,
                          "stability|bounds|continuity|asymeq|perturb|monotone|search|norms");

    // search FAMILY --interval A:B --t T
    auto* sc_search = app.add_subcommand("search", "maximize beta over a family parameter");
    std::string search_family, search_interval;
    double search_t = 2.0;
    int search_budget = 24;
    sc_search->add_option("family", search_family, "fgamma|ggamma|kscaled")->required();
    sc_search->add_option("--interval", search_interval, "parameter interval A:B")->required();
    sc_search->add_option("--t", search_t, "exponent t")->required();
    sc_search->add_option("--budget", search_budget, "spectrum evaluations allowed");

    // families list
    auto* sc_families = app.add_subcommand("families", "catalog information");
    std::string families_action;
    sc_families->add_option("action", families_action, "list")->required();

    // cache stats|gc
    auto* sc_cache = app.add_subcommand("cache", "cache maintenance");
    std::string cache_action;
    sc_cache->add_option("action", cache_action, "stats or gc")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (opt_ladder->count()) {
        auto [kmin, kmax] = parse_ladder(ladder_str);
        cfg.k_min = kmin;
        cfg.k_max = kmax;
    }
    if (opt_cache->count()) cfg.cache_path = cache_flag;
    ims::set_max_threads(cfg.threads);

    std::unique_ptr<ims::ResultCache> cache;
    if (!cfg.cache_path.empty()) cache = std::make_unique<ims::ResultCache>(cfg.cache_path);

    Output output;
    output.open(out_path);
    std::ostream& out = output.stream();

    if (*sc_spectrum || *sc_curve) {
        bool is_curve = static_cast<bool>(*sc_curve);
        std::string expr = is_curve ? curve_map : spec_map;
        AnalyticMap map = ims::parse_map(expr);
        std::vector<double> ts = is_curve ? parse_range(curve_range) : spec_ts;
        cfg.write_header(out, (is_curve ? "curve " : "spectrum ") + expr);
        auto rows = ims::spectrum_curve(map, ts, spectrum_options(cfg, cache.get()));
        bool failed = false;
        for (const auto& row : rows)
            if (!row.estimate) failed = true;
        if (cfg.format == "json") {
            json doc{{"schema_version", 1}, {"map", expr}, {"rows", curve_rows_json(rows)}};
            out << doc.dump(2) << "\n";
        } else {
            ims::write_curve_csv(out, rows);
        }
        return failed ? 1 : 0;
    }

    if (*sc_norms) {
        AnalyticMap map = ims::parse_map(norms_map);
        cfg.write_header(out, "norms " + norms_map);
        ims::GrowthReport rep = ims::growth_norm(map.pre_schwarzian(), norms_j);
        json doc = growth_report_json(rep);
        doc["map"] = norms_map;
        doc["of"] = "pre_schwarzian";
        out << doc.dump(2) << "\n";
        return 0;
    }

    if (*sc_verify) {
        cfg.write_header(out, suite.empty() ? "verify" : "verify --suite " + suite);
        ims::LabOptions lopts;
        lopts.spectrum = spectrum_options(cfg, cache.get());
        ims::Lab lab(lopts);
        auto reports = ims::run_verify_suite(lab, suite);
        out << ims::check_reports_json(reports) << "\n";
        std::size_t failed = 0;
        for (const auto& rep : reports)
            if (rep.status == ims::CheckStatus::Fail) ++failed;
        out << (failed == 0 ? "PASS" : "FAIL") << " " << (reports.size() - failed) << "/"
            << reports.size() << " checks\n";
        return failed == 0 ? 0 : 1;
    }

    if (*sc_search) {
        auto colon = search_interval.find(':');
        if (colon == std::string::npos) throw ims::RangeError("interval must be A:B");
        double lo = std::stod(search_interval.substr(0, colon));
        double hi = std::stod(search_interval.substr(colon + 1));
        ims::FamilySpec spec = ims::family_from_name(search_family, lo);
        cfg.write_header(out, "search " + search_family);
        ims::LabOptions lopts;
        lopts.spectrum = spectrum_options(cfg, cache.get());
        ims::Lab lab(lopts);
        ims::SearchResult res = lab.search_lower_bound(spec.kind, lo, hi, search_t, search_budget);
        json evals = json::array(), rows = json::array();
        for (const auto& [p, b] : res.evaluations) evals.push_back(json::array({p, b}));
        for (const auto& row : res.comparison)
            rows.push_back(json{{"label", row.label},
                                {"value", row.value},
                                {"proven", row.proven},
                                {"violated", row.violated}});
        json doc{{"schema_version", 1},
                 {"family", search_family},
                 {"t", search_t},
                 {"param_star", res.param_star},
                 {"beta_star", res.beta_star},
                 {"family_sup", res.family_sup},
                 {"evaluations", evals},
                 {"comparison", rows},
                 {"violation", res.violation}};
        out << doc.dump(2) << "\n";
        return res.violation ? 1 : 0;
    }

    if (*sc_families) {
        if (families_action != "list") throw ims::RangeError("unknown families action");
        cfg.write_header(out, "families list");
        out << "name,parameter_range,reference_beta\n";
        for (const auto& info : ims::family_catalog())
            out << info.name << ",\"" << info.parameter_range << "\",\"" << info.reference
                << "\"\n";
        return 0;
    }

    if (*sc_cache) {
        if (!cache) throw ims::RangeError("cache subcommand needs --cache or IMS_CACHE");
        cfg.write_header(out, "cache " + cache_action);
        if (cache_action == "stats") {
            out << "records," << cache->record_count() << "\n";
            out << "path," << cache->path() << "\n";
        } else if (cache_action == "gc") {
            out << "dropped," << cache->gc() << "\n";
        } else {
            throw ims::RangeError("unknown cache action: " + cache_action);
        }
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ims::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
