#include "sep/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sep/dynamics.hpp"
#include "sep/rng.hpp"
#include "sep/stats.hpp"

namespace sep {

namespace {

constexpr int kBootstrapResamples = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Coalescence of the extremal pair under the shared stream, raw-array inner
// loop with an event budget instead of a time horizon.
struct CoalescenceRun {
    double time = 0.0;
    bool resolved = false;
};

CoalescenceRun run_coalescence(const std::vector<double>& rates, int k, uint64_t seed,
                               long long event_cap) {
    const long long n = static_cast<long long>(rates.size());
    std::vector<uint8_t> a(rates.size(), 0), b(rates.size(), 0);
    for (long long i = 0; i < k; ++i) a[static_cast<size_t>(i)] = 1;             // packed left
    for (long long i = n - k; i < n; ++i) b[static_cast<size_t>(i)] = 1;         // packed right
    long long diff = 0;
    for (size_t i = 0; i < rates.size(); ++i) diff += a[i] != b[i];
    if (diff == 0) return {0.0, true};

    SplitMix64 rng(seed);
    const double total_rate = 2.0 * static_cast<double>(n);
    double t = 0.0;
    for (long long e = 0; e < event_cap; ++e) {
        t += rng.exponential(total_rate);
        size_t x = static_cast<size_t>(rng.below(static_cast<uint64_t>(n)));
        bool head = rng.coin();
        double u = rng.uniform01();
        size_t y;
        if (head) {
            if (x + 1 >= rates.size()) continue;
            y = x + 1;
            if (u > rates[x]) continue;
        } else {
            if (x == 0) continue;
            y = x - 1;
            if (u <= rates[x]) continue;
        }
        long long before = (a[x] != b[x]) + (a[y] != b[y]);
        if (a[x] == 1 && a[y] == 0) {
            a[x] = 0;
            a[y] = 1;
        }
        if (b[x] == 1 && b[y] == 0) {
            b[x] = 0;
            b[y] = 1;
        }
        long long after = (a[x] != b[x]) + (a[y] != b[y]);
        diff += after - before;
        if (diff == 0) return {t, true};
    }
    return {t, false};
}

// Quantile with +inf entries for unresolved replicas; bootstrap discards
// infinite resample quantiles and gives up when they are frequent.
QuantileEstimate quantile_with_censoring(std::vector<double> times, double eps, uint64_t seed,
                                         const char* what) {
    double q = empirical_quantile(times, 1.0 - eps);
    long long censored = 0;
    for (double t : times) censored += std::isinf(t) ? 1 : 0;
    double frac = static_cast<double>(censored) / static_cast<double>(times.size());
    if (std::isinf(q)) {
        std::vector<double> resolved;
        for (double t : times)
            if (std::isfinite(t)) resolved.push_back(t);
        double partial = resolved.empty() ? 0.0 : empirical_quantile(resolved, 1.0 - eps);
        throw HorizonExhausted(std::string(what) + ": unresolved fraction " +
                                   std::to_string(frac) + " exceeds eps",
                               partial, frac);
    }

    SplitMix64 rng(subseed(seed, /*tag=*/0x626f6f74));
    std::vector<double> stats;
    stats.reserve(kBootstrapResamples);
    int bad = 0;
    std::vector<double> draw(times.size());
    for (int b = 0; b < kBootstrapResamples; ++b) {
        for (auto& d : draw) d = times[rng.below(times.size())];
        double v = empirical_quantile(draw, 1.0 - eps);
        if (std::isfinite(v))
            stats.push_back(v);
        else
            ++bad;
    }
    if (bad > kBootstrapResamples / 10)
        throw HorizonExhausted(std::string(what) + ": bootstrap quantile unstable under the "
                                                   "event cap",
                               q, frac);

    QuantileEstimate est;
    est.value = q;
    est.replicas = static_cast<int>(times.size());
    if (stats.size() >= 2) {
        MeanStderr ms = sample_mean(stats);
        est.stderr_ = ms.stderr_ * std::sqrt(static_cast<double>(stats.size()));
    }
    return est;
}

}  // namespace

QuantileEstimate mc_mixing_upper(const Environment& env, long long n, int k, double eps,
                                 int replicas, uint64_t seed, long long event_cap) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (env.first_site > 1 || env.last_site() < n)
        throw std::invalid_argument("environment does not cover the segment");
    if (k < 0 || k > n) throw std::invalid_argument("particle count outside [0, N]");
    if (replicas < 1) throw std::invalid_argument("need at least one replica");

    std::vector<double> rates(env.rates.begin() + (1 - env.first_site),
                              env.rates.begin() + (1 - env.first_site) + n);
    std::vector<double> times(static_cast<size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
        CoalescenceRun run = run_coalescence(
            rates, k, subseed(seed, 0x636f616c, static_cast<uint64_t>(r)), event_cap);
        times[static_cast<size_t>(r)] = run.resolved ? run.time : kInf;
    }
    return quantile_with_censoring(std::move(times), eps, seed, "coalescence quantile");
}

double mc_left_quarter_prob(const Environment& env, long long n, int k,
                            const Configuration& init, double t, int replicas, uint64_t seed) {
    if (env.first_site > 1 || env.last_site() < n)
        throw std::invalid_argument("environment does not cover the segment");
    if (init.size() != n || init.first_site() != 1)
        throw std::invalid_argument("initial configuration does not match the segment");
    if (init.particles() != k)
        throw std::invalid_argument("initial configuration has the wrong particle count");
    if (replicas < 1) throw std::invalid_argument("need at least one replica");

    const std::vector<double> rates(env.rates.begin() + (1 - env.first_site),
                                    env.rates.begin() + (1 - env.first_site) + n);
    long long quarter = n / 4;
    long long hits = 0;
    for (int r = 0; r < replicas; ++r) {
        std::vector<uint8_t> c(init.bits());
        SplitMix64 rng(subseed(seed, 0x71747220, static_cast<uint64_t>(r)));
        const double total_rate = 2.0 * static_cast<double>(n);
        double now = 0.0;
        while (true) {
            now += rng.exponential(total_rate);
            if (now > t) break;
            size_t x = static_cast<size_t>(rng.below(static_cast<uint64_t>(n)));
            bool head = rng.coin();
            double u = rng.uniform01();
            if (head) {
                if (x + 1 < c.size() && c[x] == 1 && c[x + 1] == 0 && u <= rates[x]) {
                    c[x] = 0;
                    c[x + 1] = 1;
                }
            } else {
                if (x > 0 && c[x] == 1 && c[x - 1] == 0 && u > rates[x]) {
                    c[x] = 0;
                    c[x - 1] = 1;
                }
            }
        }
        for (long long i = 0; i < quarter; ++i)
            if (c[static_cast<size_t>(i)]) {
                ++hits;
                break;
            }
    }
    return static_cast<double>(hits) / static_cast<double>(replicas);
}

DisplacementCurve displacement_experiment(const Environment& env, int k,
                                          const CensoringScheme* scheme,
                                          const std::vector<double>& times, int replicas,
                                          uint64_t seed) {
    if (k < 1) throw std::invalid_argument("need at least one particle");
    if (times.empty()) throw std::invalid_argument("need at least one sample time");
    if (replicas < 1) throw std::invalid_argument("need at least one replica");

    // k particles packed at the window's left end
    std::vector<uint8_t> occ(static_cast<size_t>(env.size()), 0);
    for (int i = 0; i < k; ++i) occ[static_cast<size_t>(i)] = 1;
    Configuration eta0(std::move(occ), env.first_site);

    DisplacementCurve curve;
    curve.times = times;
    curve.samples.assign(times.size(), std::vector<long long>(static_cast<size_t>(replicas)));
    double horizon = times.back() + 1.0;
    for (int r = 0; r < replicas; ++r) {
        EventStream stream = build_event_stream(env.first_site, env.last_site(), horizon,
                                                subseed(seed, 0x64697370,
                                                        static_cast<uint64_t>(r)));
        std::vector<long long> lm = leftmost_at_times(eta0, env, stream, scheme, times);
        for (size_t i = 0; i < times.size(); ++i)
            curve.samples[i][static_cast<size_t>(r)] = lm[i];
    }

    for (size_t i = 0; i < times.size(); ++i) {
        std::vector<double> vals(curve.samples[i].begin(), curve.samples[i].end());
        MeanStderr ms = sample_mean(vals);
        curve.mean.push_back(ms.mean);
        curve.q25.push_back(empirical_quantile(vals, 0.25));
        curve.q50.push_back(empirical_quantile(vals, 0.50));
        curve.q75.push_back(empirical_quantile(vals, 0.75));
    }
    return curve;
}

QuantileEstimate mc_hitting_eps(const Environment& env, long long n, int k, double eps,
                                int replicas, uint64_t seed, double horizon) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (k < 1 || k >= n) throw std::invalid_argument("need 0 < k < N");
    if (env.first_site >= 1 || env.last_site() <= n)
        throw std::invalid_argument("window must extend beyond the segment on both sides");
    if (replicas < 1) throw std::invalid_argument("need at least one replica");

    // start: k free particles at 1..k plus the sea on (n, hi];
    // target: everything beyond n-k occupied, nothing else
    std::vector<uint8_t> start_occ(static_cast<size_t>(env.size()), 0);
    std::vector<uint8_t> target_occ(static_cast<size_t>(env.size()), 0);
    for (long long x = env.first_site; x <= env.last_site(); ++x) {
        size_t i = static_cast<size_t>(x - env.first_site);
        start_occ[i] = (x >= 1 && x <= k) || x > n;
        target_occ[i] = x > n - k;
    }
    Configuration start(std::move(start_occ), env.first_site);
    Configuration target(std::move(target_occ), env.first_site);

    std::vector<double> times(static_cast<size_t>(replicas));
    long long touched = 0;
    for (int r = 0; r < replicas; ++r) {
        EventStream stream = build_event_stream(env.first_site, env.last_site(), horizon,
                                                subseed(seed, 0x68697474,
                                                        static_cast<uint64_t>(r)));
        WindowHit hit = window_hitting_time(start, target, env, stream, horizon);
        touched += hit.boundary_touched ? 1 : 0;
        times[static_cast<size_t>(r)] = hit.hit ? *hit.hit : kInf;
    }
    double touch_frac = static_cast<double>(touched) / static_cast<double>(replicas);
    if (touch_frac > eps / 10.0)
        throw WindowTooSmall("window boundary touched in fraction " +
                                 std::to_string(touch_frac) + " of replicas",
                             touch_frac);
    return quantile_with_censoring(std::move(times), eps, seed, "hitting quantile");
}

ScalingResult scaling_experiment(const EnvironmentLaw& law, const std::vector<long long>& grid,
                                 ScalingEstimator estimator, double rho, double eps,
                                 int replicas, int environments, uint64_t seed,
                                 long long event_cap) {
    if (grid.size() < 4) throw std::invalid_argument("grid needs at least 4 sizes");
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw std::invalid_argument("grid must increase");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("density must lie in (0,1)");
    if (environments < 1) throw std::invalid_argument("need at least one environment");

    RegimeClass regime = classify(law);
    const char* est_name = estimator == ScalingEstimator::CoalescenceQuantile
                               ? "coalescence-quantile"
                               : "hitting-quantile";

    ScalingResult out;
    std::vector<double> log_n, log_med;
    for (long long n : grid) {
        int k = static_cast<int>(rho * static_cast<double>(n));
        if (k < 1 || k >= n) throw std::invalid_argument("density gives no valid k");
        std::vector<double> estimates;
        for (int e = 0; e < environments; ++e) {
            uint64_t env_seed = subseed(seed, static_cast<uint64_t>(n),
                                        static_cast<uint64_t>(e));
            ScalingRecord rec;
            rec.regime = regime.name();
            rec.estimator = est_name;
            rec.n = n;
            rec.k = k;
            rec.eps = eps;
            rec.replicas = replicas;
            rec.seed = env_seed;
            try {
                QuantileEstimate q;
                if (estimator == ScalingEstimator::CoalescenceQuantile) {
                    Environment env = sample_environment(law, n, env_seed);
                    q = mc_mixing_upper(env, n, k, eps, replicas, env_seed, event_cap);
                } else {
                    long long pad = n / 2 + 16;
                    Environment env = shift(
                        sample_environment(law, n + 2 * pad, env_seed), -pad);
                    double horizon = static_cast<double>(event_cap) /
                                     (2.0 * static_cast<double>(env.size()));
                    q = mc_hitting_eps(env, n, k, eps, replicas, env_seed, horizon);
                }
                rec.estimate = q.value;
                rec.stderr_ = q.stderr_;
                estimates.push_back(q.value);
            } catch (const HorizonExhausted&) {
                rec.estimate = std::numeric_limits<double>::quiet_NaN();
                rec.stderr_ = std::numeric_limits<double>::quiet_NaN();
            }
            out.records.push_back(std::move(rec));
        }
        if (estimates.empty())
            throw std::runtime_error("all environments failed at N = " + std::to_string(n));
        double med = empirical_quantile(estimates, 0.5);
        out.medians.push_back(med);
        log_n.push_back(std::log(static_cast<double>(n)));
        log_med.push_back(std::log(med));
    }

    LineFit fit = fit_line(log_n, log_med);
    // drop the smallest grid point as a finite-size transient when its
    // residual is an outlier
    double ss = 0.0;
    for (double r : fit.residuals) ss += r * r;
    double sd = std::sqrt(ss / static_cast<double>(fit.residuals.size()));
    if (sd > 0.0 && std::abs(fit.residuals.front()) > 2.0 * sd && log_n.size() > 3) {
        std::vector<double> xs(log_n.begin() + 1, log_n.end());
        std::vector<double> ys(log_med.begin() + 1, log_med.end());
        fit = fit_line(xs, ys);
        out.dropped_smallest = true;
    }
    out.slope = fit.slope;
    out.slope_stderr = fit.slope_stderr;
    return out;
}

}  // namespace sep
