#include "sep/boundary.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sep/stats.hpp"

namespace sep {

namespace {

constexpr int kExactCap = 14;     // 2^m states
constexpr int kDenseLuCap = 11;   // direct LU below, power iteration above

void check_spec(const BoundaryChainSpec& spec) {
    if (spec.m < 1) throw std::invalid_argument("boundary chain needs at least one site");
    if (!(std::abs(spec.tilt) < 0.5))
        throw std::invalid_argument("boundary chain tilt must satisfy |tilt| < 1/2");
}

// Enumerates the transitions out of state s; calls f(next_state, rate).
template <typename F>
void for_transitions(const BoundaryChainSpec& spec, uint32_t s, F&& f) {
    int m = spec.m;
    double right = 0.5 + spec.tilt, left = 0.5 - spec.tilt;
    for (int i = 0; i + 1 < m; ++i) {
        bool a = (s >> i) & 1u, b = (s >> (i + 1)) & 1u;
        if (a == b) continue;
        uint32_t swapped = s ^ (1u << i) ^ (1u << (i + 1));
        f(swapped, a ? right : left);
    }
    if (!(s & 1u)) f(s | 1u, 1.0);                               // creation at site 1
    if ((s >> (m - 1)) & 1u) f(s & ~(1u << (m - 1)), 1.0);       // annihilation at site m
}

std::vector<double> stationary_vector(const BoundaryChainSpec& spec) {
    check_spec(spec);
    if (spec.m > kExactCap)
        throw std::invalid_argument("boundary chain exceeds the exact cap m <= 14");
    size_t n = size_t{1} << spec.m;

    std::vector<double> pi(n, 0.0);
    if (spec.m <= kDenseLuCap) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(n));
        for (size_t s = 0; s < n; ++s) {
            double exit = 0.0;
            for_transitions(spec, static_cast<uint32_t>(s), [&](uint32_t t, double r) {
                a(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) += r;
                exit += r;
            });
            a(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) -= exit;
        }
        for (size_t s = 0; s < n; ++s)
            a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(s)) = 1.0;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        b(static_cast<Eigen::Index>(n - 1)) = 1.0;
        Eigen::VectorXd x = a.partialPivLu().solve(b);
        for (size_t s = 0; s < n; ++s) pi[s] = std::max(0.0, x(static_cast<Eigen::Index>(s)));
    } else {
        // power iteration on the uniformized kernel
        double lambda = 1.000001 * (static_cast<double>(spec.m) + 1.0);
        std::vector<double> v(n, 1.0 / static_cast<double>(n)), next(n);
        double residual = 1.0;
        for (long long it = 0; it < 1'000'000 && residual > 1e-12; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (size_t s = 0; s < n; ++s) {
                double vs = v[s];
                double exit = 0.0;
                for_transitions(spec, static_cast<uint32_t>(s), [&](uint32_t t, double r) {
                    next[t] += vs * r / lambda;
                    exit += r;
                });
                next[s] += vs * (1.0 - exit / lambda);
            }
            residual = 0.0;
            for (size_t s = 0; s < n; ++s) residual += std::abs(next[s] - v[s]);
            v.swap(next);
        }
        if (residual > 1e-12)
            throw std::runtime_error("boundary stationary power iteration did not converge");
        pi = v;
    }
    double total = 0.0;
    for (double p : pi) total += p;
    for (double& p : pi) p /= total;
    return pi;
}

}  // namespace

std::vector<double> exact_boundary_profile(const BoundaryChainSpec& spec) {
    std::vector<double> pi = stationary_vector(spec);
    std::vector<double> profile(static_cast<size_t>(spec.m), 0.0);
    for (size_t s = 0; s < pi.size(); ++s)
        for (int i = 0; i < spec.m; ++i)
            if ((s >> i) & 1u) profile[static_cast<size_t>(i)] += pi[s];
    return profile;
}

std::vector<double> flat_boundary_profile(int m) {
    std::vector<double> profile(static_cast<size_t>(m));
    for (int i = 1; i <= m; ++i)
        profile[static_cast<size_t>(i - 1)] =
            (static_cast<double>(m) + 0.5 - static_cast<double>(i)) / static_cast<double>(m);
    return profile;
}

double right_edge_occupation_bound(int m, double tilt) {
    return 2.0 * tilt * static_cast<double>(m) + 2.0 / (static_cast<double>(m) + 1.0);
}

namespace {

// Shared event loop: rate-1 channels (m-1 interior edges, creation,
// annihilation), each tick thinned by a uniform mark. Before each jump (and
// once at the horizon) calls hold(until, state, z): the state is constant on
// [previous until, until).
template <typename Hold>
BoundaryRun run_boundary(const BoundaryChainSpec& spec, const std::vector<uint8_t>& init,
                         double t, uint64_t seed, Hold&& hold) {
    check_spec(spec);
    int m = spec.m;
    std::vector<uint8_t> s = init.empty() ? std::vector<uint8_t>(static_cast<size_t>(m), 0)
                                          : init;
    if (static_cast<int>(s.size()) != m)
        throw std::invalid_argument("initial state length does not match the chain");

    SplitMix64 rng(subseed(seed, /*tag=*/0x62647279));
    double right = 0.5 + spec.tilt;
    double total_rate = static_cast<double>(m + 1);
    double now = 0.0;
    long long z = 0;

    while (true) {
        double dt = rng.exponential(total_rate);
        if (now + dt > t) break;
        now += dt;
        hold(now, s, z);
        uint64_t ch = rng.below(static_cast<uint64_t>(m + 1));
        double u = rng.uniform01();
        if (ch < static_cast<uint64_t>(m - 1)) {
            // interior edge (i, i+1), 0-based
            size_t i = static_cast<size_t>(ch);
            if (u <= right) {
                if (s[i] == 1 && s[i + 1] == 0) {
                    s[i] = 0;
                    s[i + 1] = 1;
                }
            } else {
                if (s[i] == 0 && s[i + 1] == 1) {
                    s[i] = 1;
                    s[i + 1] = 0;
                }
            }
        } else if (ch == static_cast<uint64_t>(m - 1)) {
            if (s[0] == 0) s[0] = 1;
        } else {
            if (s[static_cast<size_t>(m - 1)] == 1) {
                s[static_cast<size_t>(m - 1)] = 0;
                ++z;
            }
        }
    }
    // the state is constant from the last jump through the horizon
    hold(std::numeric_limits<double>::infinity(), s, z);

    BoundaryRun run;
    run.state = std::move(s);
    run.annihilated = z;
    run.time = t;
    return run;
}

}  // namespace

BoundaryRun simulate_boundary(const BoundaryChainSpec& spec, const std::vector<uint8_t>& init,
                              double t, uint64_t seed) {
    return run_boundary(spec, init, t, seed,
                        [](double, const std::vector<uint8_t>&, long long) {});
}

std::vector<uint8_t> sample_boundary_stationary(const BoundaryChainSpec& spec, uint64_t seed) {
    std::vector<double> pi = stationary_vector(spec);
    SplitMix64 rng(subseed(seed, /*tag=*/0x62737461));
    double u = rng.uniform01();
    double acc = 0.0;
    size_t pick = pi.size() - 1;
    for (size_t s = 0; s < pi.size(); ++s) {
        acc += pi[s];
        if (u < acc) {
            pick = s;
            break;
        }
    }
    std::vector<uint8_t> state(static_cast<size_t>(spec.m));
    for (int i = 0; i < spec.m; ++i) state[static_cast<size_t>(i)] = (pick >> i) & 1u;
    return state;
}

BoundaryProfileEstimate mc_boundary_profile(const BoundaryChainSpec& spec, long long samples,
                                            double spacing, double burn_in, int batches,
                                            uint64_t seed) {
    check_spec(spec);
    if (samples < 1 || batches < 2 || samples % batches != 0)
        throw std::invalid_argument("samples must split evenly into at least 2 batches");
    if (!(spacing > 0.0)) throw std::invalid_argument("sample spacing must be positive");

    int m = spec.m;
    double horizon = burn_in + static_cast<double>(samples) * spacing;
    // per-site occupancy sums per batch
    std::vector<std::vector<double>> batch_sum(
        static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(batches), 0.0));
    long long taken = 0;
    long long per_batch = samples / batches;
    double next_sample = burn_in + spacing;
    long long z_at_burn_in = 0;
    bool burn_done = false;

    // the state passed to hold() is constant up to `until`, so it is the
    // value seen at every sample time below that
    BoundaryRun run = run_boundary(
        spec, {}, horizon, seed, [&](double until, const std::vector<uint8_t>& s, long long z) {
            if (!burn_done && until > burn_in) {
                burn_done = true;
                z_at_burn_in = z;
            }
            while (taken < samples && next_sample < until) {
                size_t b = static_cast<size_t>(taken / per_batch);
                for (int i = 0; i < m; ++i)
                    batch_sum[static_cast<size_t>(i)][b] += s[static_cast<size_t>(i)];
                ++taken;
                next_sample += spacing;
            }
        });

    BoundaryProfileEstimate est;
    est.mean.resize(static_cast<size_t>(m));
    est.stderr_.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        std::vector<double> per_batch_mean(static_cast<size_t>(batches));
        for (int b = 0; b < batches; ++b)
            per_batch_mean[static_cast<size_t>(b)] =
                batch_sum[static_cast<size_t>(i)][static_cast<size_t>(b)] /
                static_cast<double>(per_batch);
        MeanStderr ms = sample_mean(per_batch_mean);
        est.mean[static_cast<size_t>(i)] = ms.mean;
        est.stderr_[static_cast<size_t>(i)] = ms.stderr_;
    }
    est.z_rate = static_cast<double>(run.annihilated - z_at_burn_in) /
                 (static_cast<double>(samples) * spacing);
    return est;
}

DecayFit blythe_decay_check(double gamma, const std::vector<int>& sizes) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw std::invalid_argument("decay check needs gamma in (0, 1/2)");
    DecayFit fit;
    fit.sizes = sizes;
    std::vector<double> xs, ys;
    for (int m : sizes) {
        BoundaryChainSpec spec{m, -gamma};
        std::vector<double> profile = exact_boundary_profile(spec);
        double v = profile.back();
        fit.values.push_back(v);
        xs.push_back(static_cast<double>(m));
        ys.push_back(std::log(v));
    }
    LineFit line = fit_line(xs, ys);
    fit.slope = line.slope;
    double q = (0.5 + gamma) / (0.5 - gamma);
    fit.predicted = -0.5 * std::log(q);
    return fit;
}

}  // namespace sep
