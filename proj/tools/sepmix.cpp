// sepmix: simulate and analyze the exclusion process in a random environment.
//
// Subcommands: simulate | exact | boundary | censor | scaling | validate.
// Every run writes a CSV (the authoritative output) plus a JSON summary next
// to it, and is a deterministic function of the flags and the seed.
// Exit codes: 0 on success, 1 when a named check fails, 2 on usage errors.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sep/boundary.hpp"
#include "sep/censoring.hpp"
#include "sep/configuration.hpp"
#include "sep/csvio.hpp"
#include "sep/dominance.hpp"
#include "sep/dynamics.hpp"
#include "sep/enumeration.hpp"
#include "sep/environment.hpp"
#include "sep/estimate.hpp"
#include "sep/event_stream.hpp"
#include "sep/exact.hpp"
#include "sep/law.hpp"
#include "sep/rng.hpp"
#include "sep/stats.hpp"

namespace {

using nlohmann::json;

struct Options {
    std::string law_text = "uniform(0.6,0.9)";
    long long n = 16;
    std::string grid = "32,64,128,256";
    double rho = 0.5;
    double eps = 0.25;
    int replicas = 100;
    std::uint64_t seed = 1;
    double horizon = 0.0;  // 0 picks a subcommand-specific default
    std::string out;
    double tilt = 0.0;
    int environments = 5;
    long long event_cap = 100'000'000;
    std::string estimator = "coalescence";
};

std::string json_path_for(const std::string& csv_path) {
    if (csv_path.size() >= 4 && csv_path.compare(csv_path.size() - 4, 4, ".csv") == 0)
        return csv_path.substr(0, csv_path.size() - 4) + ".json";
    return csv_path + ".json";
}

void emit(const std::string& csv_path, const std::string& csv, json& summary) {
    summary["csv"] = csv_path;
    sep::write_text_file(csv_path, csv);
    sep::write_text_file(json_path_for(csv_path), summary.dump(2) + "\n");
}

std::vector<long long> parse_grid(const std::string& text) {
    std::vector<long long> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        long long v = std::stoll(item, &used);
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
            ++used;
        if (used != item.size()) throw std::invalid_argument("bad grid entry: " + item);
        grid.push_back(v);
    }
    if (grid.empty()) throw std::invalid_argument("empty size grid");
    return grid;
}

int particle_count(const Options& o, long long n) {
    if (!(o.rho > 0.0 && o.rho < 1.0))
        throw std::invalid_argument("density must lie strictly between 0 and 1");
    int k = static_cast<int>(o.rho * static_cast<double>(n));
    if (k < 1) k = 1;
    if (k >= n) k = static_cast<int>(n) - 1;
    return k;
}

json common_summary(const char* sub, const Options& o, const sep::EnvironmentLaw& law) {
    json j;
    j["subcommand"] = sub;
    j["law"] = law.to_string();
    j["seed"] = o.seed;
    return j;
}

int run_simulate(const Options& o, const sep::EnvironmentLaw& law) {
    double horizon = o.horizon > 0.0 ? o.horizon : 10.0;
    sep::Environment env = sep::sample_environment(law, o.n, o.seed);
    int k = particle_count(o, o.n);
    sep::Configuration init = sep::top_state(o.n, k);

    std::string csv = sep::csv_row({"replica", "seed", "time", "leftmost", "configuration"});
    std::vector<double> leftmosts;
    for (int r = 0; r < o.replicas; ++r) {
        std::uint64_t sub = sep::subseed(o.seed, 0x72657063, static_cast<std::uint64_t>(r));
        sep::EventStream stream = sep::build_event_stream(1, o.n, horizon, sub);
        sep::Configuration final_state = sep::evolve(init, env, stream, horizon);
        long long lm = sep::leftmost_particle(final_state);
        leftmosts.push_back(static_cast<double>(lm));
        csv += sep::csv_row({std::to_string(r), std::to_string(sub),
                             sep::format_double(horizon), std::to_string(lm),
                             sep::format_configuration(final_state)});
    }

    json j = common_summary("simulate", o, law);
    j["n"] = o.n;
    j["k"] = k;
    j["replicas"] = o.replicas;
    j["horizon"] = horizon;
    j["mean_leftmost"] = sep::sample_mean(leftmosts).mean;
    emit(o.out.empty() ? "simulate.csv" : o.out, csv, j);
    return 0;
}

int run_exact(const Options& o, const sep::EnvironmentLaw& law) {
    sep::Environment env = sep::sample_environment(law, o.n, o.seed);
    int k = particle_count(o, o.n);
    sep::StateEnumeration states(o.n, k);

    sep::Distribution pi = sep::stationary(env, states);
    double agreement = std::numeric_limits<double>::quiet_NaN();
    bool no_unit_rates = true;
    for (long long x = 2; x <= env.last_site(); ++x) no_unit_rates &= env.at(x) < 1.0;
    if (no_unit_rates) {
        sep::Distribution prod = sep::stationary_product(env, states);
        sep::Distribution null = sep::stationary_nullspace(env, states);
        agreement = 0.0;
        for (size_t i = 0; i < prod.p.size(); ++i)
            agreement = std::max(agreement, std::abs(prod.p[i] - null.p[i]));
    }
    double tmix = sep::exact_mixing_time(env, states, o.eps);
    double pa = sep::stationary_left_quarter_prob(pi, states);
    double bound = sep::left_quarter_stationary_bound(env, o.n, k);

    std::string csv = sep::csv_row({"quantity", "value"});
    auto row = [&csv](const std::string& name, double v) {
        csv += sep::csv_row({name, sep::format_double(v)});
    };
    row("states", static_cast<double>(states.size()));
    row("stationary_max_abs_diff", agreement);
    row("mixing_time", tmix);
    row("left_quarter_prob", pa);
    row("left_quarter_bound", bound);

    json j = common_summary("exact", o, law);
    j["n"] = o.n;
    j["k"] = k;
    j["eps"] = o.eps;
    j["states"] = states.size();
    j["mixing_time"] = tmix;
    j["left_quarter_prob"] = pa;
    j["left_quarter_bound"] = bound;
    emit(o.out.empty() ? "exact.csv" : o.out, csv, j);
    return 0;
}

int run_boundary(const Options& o, const sep::EnvironmentLaw& law) {
    sep::BoundaryChainSpec spec{static_cast<int>(o.n), o.tilt};
    std::vector<double> exact = sep::exact_boundary_profile(spec);

    int batches = 10;
    long long samples = std::max<long long>(o.replicas - o.replicas % batches, 2 * batches);
    double spacing = 5.0 * static_cast<double>(spec.m);
    double burn_in = 10.0 * static_cast<double>(spec.m) * static_cast<double>(spec.m);
    sep::BoundaryProfileEstimate mc =
        sep::mc_boundary_profile(spec, samples, spacing, burn_in, batches, o.seed);

    std::string csv = sep::csv_row({"m", "c", "site", "density", "stderr"});
    for (int i = 0; i < spec.m; ++i)
        csv += sep::csv_row({std::to_string(spec.m), sep::format_double(spec.tilt),
                             std::to_string(i + 1), sep::format_double(mc.mean[i]),
                             sep::format_double(mc.stderr_[i])});

    json j = common_summary("boundary", o, law);
    j["m"] = spec.m;
    j["tilt"] = spec.tilt;
    j["samples"] = samples;
    j["exact_profile"] = exact;
    j["annihilation_rate"] = mc.z_rate;
    if (spec.tilt > 0.0)
        j["right_edge_bound"] = sep::right_edge_occupation_bound(spec.m, spec.tilt);
    emit(o.out.empty() ? "boundary.csv" : o.out, csv, j);
    return 0;
}

int run_censor(const Options& o, const sep::EnvironmentLaw& law) {
    long long window = std::min<long long>(o.n * o.n, 16384);
    int k = particle_count(o, o.n);
    long long box = std::max<long long>(1, std::llround(std::ceil(std::log(
                                               static_cast<double>(o.n)))));
    double lg = std::log(static_cast<double>(o.n));
    double period = std::max(1.0, lg * lg * lg);
    double horizon = o.horizon > 0.0 ? o.horizon : 2.0 * period;

    sep::Environment env = sep::sample_environment(law, window, o.seed);
    sep::CensoringScheme scheme =
        sep::make_alternating_boxes(window, k, box, period, horizon);

    std::vector<double> times;
    for (int i = 1; i <= 32; ++i) times.push_back(horizon * i / 32.0);
    sep::DisplacementCurve plain =
        sep::displacement_experiment(env, k, nullptr, times, o.replicas, o.seed);
    sep::DisplacementCurve boxed =
        sep::displacement_experiment(env, k, &scheme, times, o.replicas, o.seed);

    std::string csv = sep::csv_row(
        {"time", "mean_plain", "median_plain", "mean_boxed", "median_boxed"});
    for (size_t i = 0; i < times.size(); ++i)
        csv += sep::csv_row({sep::format_double(times[i]), sep::format_double(plain.mean[i]),
                             sep::format_double(plain.q50[i]), sep::format_double(boxed.mean[i]),
                             sep::format_double(boxed.q50[i])});

    json j = common_summary("censor", o, law);
    j["n"] = o.n;
    j["window"] = window;
    j["k"] = k;
    j["box_halfwidth"] = box;
    j["switch_period"] = period;
    j["horizon"] = horizon;
    j["replicas"] = o.replicas;
    j["final_mean_plain"] = plain.mean.back();
    j["final_mean_boxed"] = boxed.mean.back();
    emit(o.out.empty() ? "censor.csv" : o.out, csv, j);
    return 0;
}

int run_scaling(const Options& o, const sep::EnvironmentLaw& law) {
    std::vector<long long> grid = parse_grid(o.grid);
    sep::ScalingEstimator est;
    if (o.estimator == "coalescence")
        est = sep::ScalingEstimator::CoalescenceQuantile;
    else if (o.estimator == "hitting")
        est = sep::ScalingEstimator::HittingQuantile;
    else
        throw std::invalid_argument("estimator must be 'coalescence' or 'hitting'");

    sep::ScalingResult res = sep::scaling_experiment(law, grid, est, o.rho, o.eps, o.replicas,
                                                     o.environments, o.seed, o.event_cap);

    std::string csv = sep::csv_row(
        {"regime", "estimator", "N", "k", "eps", "replicas", "estimate", "stderr", "seed"});
    for (const sep::ScalingRecord& r : res.records)
        csv += sep::csv_row({r.regime, r.estimator, std::to_string(r.n), std::to_string(r.k),
                             sep::format_double(r.eps), std::to_string(r.replicas),
                             sep::format_double(r.estimate), sep::format_double(r.stderr_),
                             std::to_string(r.seed)});
    // closing line: the fitted log-log slope in the same column layout
    csv += sep::csv_row({res.records.empty() ? std::string("-") : res.records.front().regime,
                         "slope", "0", "0", sep::format_double(o.eps), "0",
                         sep::format_double(res.slope), sep::format_double(res.slope_stderr),
                         std::to_string(o.seed)});

    json j = common_summary("scaling", o, law);
    j["grid"] = grid;
    j["estimator"] = o.estimator;
    j["rho"] = o.rho;
    j["eps"] = o.eps;
    j["replicas"] = o.replicas;
    j["environments"] = o.environments;
    j["medians"] = res.medians;
    j["slope"] = res.slope;
    j["slope_stderr"] = res.slope_stderr;
    j["dropped_smallest"] = res.dropped_smallest;
    emit(o.out.empty() ? "scaling.csv" : o.out, csv, j);
    return 0;
}

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

int run_validate(const Options& o, const sep::EnvironmentLaw& law) {
    std::vector<CheckResult> results;

    // stationarity is reversible here, so pi weights must balance every edge
    {
        sep::Environment env = sep::sample_environment(law, 6, sep::subseed(o.seed, 1));
        sep::StateEnumeration states(6, 3);
        sep::Distribution pi = sep::stationary(env, states);
        sep::GeneratorMatrix gen = sep::generator_matrix(env, states);
        double worst = 0.0;
        for (size_t i = 0; i < gen.n; ++i) {
            for (size_t a = gen.row_ptr[i]; a < gen.row_ptr[i + 1]; ++a) {
                size_t jdx = gen.col[a];
                double back = 0.0;
                for (size_t b = gen.row_ptr[jdx]; b < gen.row_ptr[jdx + 1]; ++b)
                    if (gen.col[b] == i) back = gen.rate[b];
                worst = std::max(worst, std::abs(pi.p[i] * gen.rate[a] - pi.p[jdx] * back));
            }
        }
        results.push_back({"detailed-balance", worst < 1e-12,
                           "max flux imbalance " + sep::format_double(worst)});
    }

    // symmetric boundary chain has the closed-form linear profile
    {
        sep::BoundaryChainSpec spec{8, 0.0};
        std::vector<double> exact = sep::exact_boundary_profile(spec);
        std::vector<double> flat = sep::flat_boundary_profile(spec.m);
        double worst = 0.0;
        for (int i = 0; i < spec.m; ++i) worst = std::max(worst, std::abs(exact[i] - flat[i]));
        results.push_back({"boundary-profile", worst < 1e-10,
                           "max deviation from linear profile " + sep::format_double(worst)});
    }

    // stationary annihilation flux through the right boundary is 1/(2m)
    {
        sep::BoundaryChainSpec spec{5, 0.0};
        double total = 0.0, time = 0.0;
        for (int rep = 0; rep < 8; ++rep) {
            std::vector<uint8_t> init = sep::sample_boundary_stationary(
                spec, sep::subseed(o.seed, 0x696e6974, static_cast<std::uint64_t>(rep)));
            sep::BoundaryRun run = sep::simulate_boundary(
                spec, init, 2000.0,
                sep::subseed(o.seed, 0x616e6e69, static_cast<std::uint64_t>(rep)));
            total += static_cast<double>(run.annihilated);
            time += run.time;
        }
        double rate = total / time;
        results.push_back({"annihilation-rate", std::abs(rate - 0.1) < 0.015,
                           "measured " + sep::format_double(rate) + " target 0.1"});
    }

    // extremal pair stays ordered under the shared event stream
    {
        long long violations = 0;
        for (int trial = 0; trial < 200; ++trial) {
            sep::Environment env = sep::sample_environment(
                law, 8, sep::subseed(o.seed, 0x6d6f6e6f, static_cast<std::uint64_t>(trial)));
            int k = 1 + trial % 7;
            sep::EventStream stream = sep::build_event_stream(
                1, 8, 10.0,
                sep::subseed(o.seed, 0x6d737472, static_cast<std::uint64_t>(trial)));
            sep::CouplingMonitor monitor;
            std::vector<sep::Configuration> starts = {sep::top_state(8, k),
                                                      sep::ground_state(8, k)};
            std::vector<sep::Environment> envs = {env};
            sep::evolve_coupled(starts, envs, stream, 10.0, &monitor);
            violations += monitor.violations;
        }
        results.push_back({"monotone-coupling", violations == 0,
                           std::to_string(violations) + " order violations in 200 runs"});
    }

    // freezing edges keeps the law above the free one when started on top
    {
        sep::Environment env = sep::sample_environment(law, 5, sep::subseed(o.seed, 5));
        sep::StateEnumeration states(5, 2);
        sep::CensoringScheme scheme = sep::make_alternating_boxes(5, 2, 1, 0.5, 2.0);
        sep::Distribution init = sep::point_mass(states, sep::top_state(5, 2));
        sep::GeneratorMatrix gen = sep::generator_matrix(env, states);
        sep::Distribution censored =
            sep::censored_distribution_at(init, env, states, scheme, 1.0);
        sep::Distribution free_law = sep::distribution_at(init, gen, 1.0);
        sep::DominanceResult dom = sep::stochastic_dominance(censored, free_law, states);
        results.push_back({"censoring-dominance", dom.dominates,
                           dom.dominates ? "censored law dominates"
                                         : "dominance fails on a monotone set"});
    }

    std::string csv = sep::csv_row({"check", "pass", "detail"});
    bool all_pass = true;
    for (const CheckResult& r : results) {
        all_pass &= r.pass;
        std::cout << "check " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.detail
                  << ")\n";
        csv += sep::csv_row({r.name, r.pass ? "1" : "0", r.detail});
    }

    json j = common_summary("validate", o, law);
    j["checks"] = json::array();
    for (const CheckResult& r : results)
        j["checks"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    j["all_pass"] = all_pass;
    emit(o.out.empty() ? "validate.csv" : o.out, csv, j);

    if (!all_pass) {
        for (const CheckResult& r : results)
            if (!r.pass) std::cerr << "failed check: " << r.name << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exclusion process in a random environment: simulation and exact analysis"};
    app.set_config("--config", "", "read options from an INI/TOML file (flags take precedence)");
    app.require_subcommand(1);

    Options o;
    app.add_option("--law", o.law_text,
                   "environment law: constant(p) | twopoint(p1,p2,alpha) | uniform(a,b)");
    app.add_option("--n", o.n, "segment length (chain length for `boundary`)");
    app.add_option("--grid", o.grid, "comma-separated segment lengths for `scaling`");
    app.add_option("--rho", o.rho, "particle density, k = floor(rho*N)");
    app.add_option("--eps", o.eps, "total-variation / quantile level");
    app.add_option("--replicas", o.replicas, "Monte Carlo replicas (samples for `boundary`)");
    app.add_option("--seed", o.seed, "master seed; every replica uses a recorded sub-seed");
    app.add_option("--horizon", o.horizon, "time horizon (0 picks a per-subcommand default)");
    app.add_option("--out", o.out, "CSV output path (JSON summary written alongside)");
    app.add_option("--tilt", o.tilt, "drift of the boundary-driven chain");
    app.add_option("--envs", o.environments, "environment draws per grid point in `scaling`");
    app.add_option("--event-cap", o.event_cap, "per-replica event budget for `scaling`");
    app.add_option("--estimator", o.estimator, "`scaling` estimator: coalescence | hitting");

    const char* names[] = {"simulate", "exact", "boundary", "censor", "scaling", "validate"};
    const char* descs[] = {
        "evolve trajectories and report final configurations",
        "exact distributions, mixing time and small-state diagnostics",
        "boundary-driven chain: exact and sampled occupation profile",
        "leftmost-particle displacement with and without censoring boxes",
        "mixing-scale estimates across a grid of segment lengths",
        "run the built-in consistency checks"};
    for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], descs[i])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    sep::EnvironmentLaw law;
    try {
        law = sep::parse_law(o.law_text);
    } catch (const std::exception& e) {
        std::cerr << "malformed law: " << e.what() << "\n";
        return 2;
    }

    try {
        std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "simulate") return run_simulate(o, law);
        if (sub == "exact") return run_exact(o, law);
        if (sub == "boundary") return run_boundary(o, law);
        if (sub == "censor") return run_censor(o, law);
        if (sub == "scaling") return run_scaling(o, law);
        if (sub == "validate") return run_validate(o, law);
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    }
}
