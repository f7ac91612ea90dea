#include "sep/exact.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sep {

namespace {

constexpr size_t kDenseCap = 4096;       // dense solves / all-rows propagation
constexpr size_t kDenseLuCap = 2048;     // direct LU for the null-space route
constexpr double kUniformizationPad = 1.000001;

void check_sizes(const Distribution& d, const GeneratorMatrix& gen) {
    if (d.p.size() != gen.n)
        throw std::invalid_argument("distribution and generator sizes differ");
}

// One uniformized kernel step: next = v (I + L/lambda).
void kernel_step(const GeneratorMatrix& gen, double lambda, const std::vector<double>& v,
                 std::vector<double>& next) {
    next.assign(gen.n, 0.0);
    for (size_t i = 0; i < gen.n; ++i) {
        double vi = v[i];
        if (vi == 0.0) continue;
        next[i] += vi * (1.0 + gen.diag[i] / lambda);
        for (size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e)
            next[gen.col[e]] += vi * gen.rate[e] / lambda;
    }
}

// Accumulates sum_m Poisson(m; lambda*t) v_m into out, truncating once the
// cumulative Poisson mass reaches 1 - tol.
void uniformize(const GeneratorMatrix& gen, double t, double tol, std::vector<double> v,
                std::vector<double>& out) {
    double lambda = kUniformizationPad * gen.max_exit_rate();
    out.assign(v.size(), 0.0);
    if (lambda == 0.0 || t == 0.0) {
        out = v;
        return;
    }
    double x = lambda * t;
    double cum = 0.0;
    std::vector<double> next(v.size());
    long long cap = static_cast<long long>(x + 60.0 * std::sqrt(x + 1.0) + 200.0);
    for (long long m = 0; m <= cap; ++m) {
        double logp = static_cast<double>(m) * std::log(x) - x -
                      std::lgamma(static_cast<double>(m) + 1.0);
        double pm = std::exp(logp);
        if (pm > 0.0) {
            for (size_t i = 0; i < v.size(); ++i) out[i] += pm * v[i];
            cum += pm;
        }
        if (cum >= 1.0 - tol) return;
        kernel_step(gen, lambda, v, next);
        v.swap(next);
    }
    if (cum < 1.0 - tol)
        throw std::runtime_error("uniformization failed to reach the requested tolerance");
}

bool product_form_applies(const Environment& env) {
    // the product weights divide by 1 - w(x) for x = 2..N
    for (long long x = env.first_site + 1; x <= env.last_site(); ++x)
        if (env.at(x) >= 1.0) return false;
    return true;
}

std::vector<size_t> reachable_from(const GeneratorMatrix& gen, size_t start) {
    std::vector<char> seen(gen.n, 0);
    std::vector<size_t> stack = {start}, order;
    seen[start] = 1;
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        order.push_back(i);
        for (size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e) {
            size_t j = gen.col[e];
            if (!seen[j]) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

double GeneratorMatrix::max_exit_rate() const {
    double m = 0.0;
    for (double d : diag) m = std::max(m, -d);
    return m;
}

void GeneratorMatrix::apply_left(const std::vector<double>& x, std::vector<double>& y) const {
    if (x.size() != n || y.size() != n)
        throw std::invalid_argument("vector length does not match the generator");
    for (size_t i = 0; i < n; ++i) {
        double xi = x[i];
        if (xi == 0.0) continue;
        y[i] += xi * diag[i];
        for (size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) y[col[e]] += xi * rate[e];
    }
}

GeneratorMatrix generator_matrix(const Environment& env, const StateEnumeration& states,
                                 const std::vector<long long>& blocked_edges) {
    long long n_sites = states.n();
    if (env.first_site > 1 || env.last_site() < n_sites)
        throw std::invalid_argument("environment does not cover the segment");

    std::vector<long long> blocked = blocked_edges;
    std::sort(blocked.begin(), blocked.end());
    auto is_blocked = [&](long long x) {
        return std::binary_search(blocked.begin(), blocked.end(), x);
    };

    GeneratorMatrix gen;
    gen.n = states.size();
    gen.row_ptr.assign(gen.n + 1, 0);
    gen.diag.assign(gen.n, 0.0);

    std::vector<int> newpos;
    for (size_t i = 0; i < gen.n; ++i) {
        const auto& pos = states.positions(i);
        double exit = 0.0;
        for (size_t idx = 0; idx < pos.size(); ++idx) {
            int p = pos[idx];
            long long x = p + 1;  // 1-based site
            bool right_free = (x < n_sites) &&
                              (idx + 1 == pos.size() || pos[idx + 1] != p + 1);
            bool left_free = (x > 1) && (idx == 0 || pos[idx - 1] != p - 1);
            if (right_free && !is_blocked(x)) {
                newpos = pos;
                newpos[idx] = p + 1;
                gen.col.push_back(states.index(newpos));
                gen.rate.push_back(env.at(x));
                exit += env.at(x);
            }
            if (left_free && !is_blocked(x - 1)) {
                newpos = pos;
                newpos[idx] = p - 1;
                gen.col.push_back(states.index(newpos));
                gen.rate.push_back(1.0 - env.at(x));
                exit += 1.0 - env.at(x);
            }
        }
        gen.diag[i] = -exit;
        gen.row_ptr[i + 1] = gen.col.size();
    }
    return gen;
}

Distribution point_mass(const StateEnumeration& states, const Configuration& c) {
    Distribution d;
    d.n = states.n();
    d.k = states.k();
    d.p.assign(states.size(), 0.0);
    d.p[states.index(c)] = 1.0;
    return d;
}

Distribution stationary_product(const Environment& env, const StateEnumeration& states) {
    if (!product_form_applies(env))
        throw std::invalid_argument("product stationary form needs rates < 1 beyond site 1");
    long long n = states.n();
    // G(z) = log of the per-particle weight prod_{x=1}^{z-1} w(x)/(1-w(x+1))
    std::vector<double> g(static_cast<size_t>(n) + 1, 0.0);
    for (long long z = 2; z <= n; ++z)
        g[static_cast<size_t>(z)] = g[static_cast<size_t>(z - 1)] + std::log(env.at(z - 1)) -
                                    std::log(1.0 - env.at(z));

    Distribution d;
    d.n = n;
    d.k = states.k();
    d.p.resize(states.size());
    double top = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < states.size(); ++i) {
        double lw = 0.0;
        for (int p : states.positions(i)) lw += g[static_cast<size_t>(p) + 1];
        d.p[i] = lw;
        top = std::max(top, lw);
    }
    double total = 0.0;
    for (auto& v : d.p) {
        v = std::exp(v - top);
        total += v;
    }
    for (auto& v : d.p) v /= total;
    return d;
}

Distribution stationary_nullspace(const Environment& env, const StateEnumeration& states) {
    GeneratorMatrix gen = generator_matrix(env, states);
    // the closed communicating class is the one the all-right state leads to
    size_t ground = states.index(ground_state(states.n(), states.k()));
    std::vector<size_t> cls = reachable_from(gen, ground);
    size_t m = cls.size();

    std::vector<double> pi_cls(m, 0.0);
    if (m == 1) {
        pi_cls[0] = 1.0;
    } else if (m <= kDenseLuCap) {
        std::vector<size_t> inv(gen.n, SIZE_MAX);
        for (size_t r = 0; r < m; ++r) inv[cls[r]] = r;
        // solve pi L = 0 with the normalization sum(pi) = 1 replacing one row
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                  static_cast<Eigen::Index>(m));
        for (size_t r = 0; r < m; ++r) {
            size_t i = cls[r];
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = gen.diag[i];
            for (size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e) {
                size_t j = inv[gen.col[e]];
                if (j == SIZE_MAX)
                    throw std::logic_error("closed class is not closed");
                a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(r)) += gen.rate[e];
            }
        }
        for (size_t r = 0; r < m; ++r)
            a(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(r)) = 1.0;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        b(static_cast<Eigen::Index>(m - 1)) = 1.0;
        Eigen::VectorXd x = a.partialPivLu().solve(b);
        for (size_t r = 0; r < m; ++r)
            pi_cls[r] = std::max(0.0, x(static_cast<Eigen::Index>(r)));
    } else {
        // power iteration on the uniformized kernel restricted to the class
        std::vector<size_t> inv(gen.n, SIZE_MAX);
        for (size_t r = 0; r < m; ++r) inv[cls[r]] = r;
        double lambda = kUniformizationPad * gen.max_exit_rate();
        std::vector<double> v(m, 1.0 / static_cast<double>(m)), next(m);
        double residual = 1.0;
        for (long long it = 0; it < 2'000'000 && residual > 1e-12; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (size_t r = 0; r < m; ++r) {
                size_t i = cls[r];
                next[r] += v[r] * (1.0 + gen.diag[i] / lambda);
                for (size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e)
                    next[inv[gen.col[e]]] += v[r] * gen.rate[e] / lambda;
            }
            residual = 0.0;
            for (size_t r = 0; r < m; ++r) residual += std::abs(next[r] - v[r]);
            v.swap(next);
        }
        if (residual > 1e-12)
            throw std::runtime_error("stationary power iteration did not converge");
        pi_cls = v;
    }

    double total = 0.0;
    for (double v : pi_cls) total += v;
    Distribution d;
    d.n = states.n();
    d.k = states.k();
    d.p.assign(states.size(), 0.0);
    for (size_t r = 0; r < m; ++r) d.p[cls[r]] = pi_cls[r] / total;
    return d;
}

Distribution stationary(const Environment& env, const StateEnumeration& states) {
    if (product_form_applies(env)) return stationary_product(env, states);
    return stationary_nullspace(env, states);
}

Distribution distribution_at(const Distribution& init, const GeneratorMatrix& gen, double t,
                             double tol) {
    check_sizes(init, gen);
    if (t < 0.0) throw std::invalid_argument("negative time");
    Distribution out = init;
    uniformize(gen, t, tol, init.p, out.p);
    return out;
}

Distribution censored_distribution_at(const Distribution& init, const Environment& env,
                                      const StateEnumeration& states,
                                      const CensoringScheme& scheme, double t) {
    if (scheme.empty()) {
        GeneratorMatrix gen = generator_matrix(env, states);
        return distribution_at(init, gen, t);
    }
    Distribution cur = init;
    for (size_t i = 0; i < scheme.intervals(); ++i) {
        double start = scheme.interval_start(i);
        if (start >= t) break;
        double end = (i + 1 < scheme.intervals()) ? scheme.interval_start(i + 1) : t;
        end = std::min(end, t);
        GeneratorMatrix gen = generator_matrix(env, states, scheme.interval_edges(i));
        cur = distribution_at(cur, gen, end - start);
    }
    return cur;
}

double tv_distance(const Distribution& p, const Distribution& q) {
    if (p.p.size() != q.p.size())
        throw std::invalid_argument("distributions live on different state spaces");
    double s = 0.0;
    for (size_t i = 0; i < p.p.size(); ++i) s += std::abs(p.p[i] - q.p[i]);
    return 0.5 * s;
}

double worst_case_tv(const Environment& env, const StateEnumeration& states, double t) {
    size_t n = states.size();
    if (n > kDenseCap)
        throw std::invalid_argument("state space too large for all-rows propagation");
    GeneratorMatrix gen = generator_matrix(env, states);
    Distribution pi = stationary(env, states);

    double lambda = kUniformizationPad * gen.max_exit_rate();
    // rows r of M: distribution at time t started from state r
    std::vector<std::vector<double>> m_cur(n), m_acc(n, std::vector<double>(n, 0.0));
    for (size_t r = 0; r < n; ++r) {
        m_cur[r].assign(n, 0.0);
        m_cur[r][r] = 1.0;
    }
    if (lambda == 0.0 || t == 0.0) {
        m_acc = m_cur;
    } else {
        double x = lambda * t;
        double cum = 0.0;
        std::vector<double> next(n);
        long long cap = static_cast<long long>(x + 60.0 * std::sqrt(x + 1.0) + 200.0);
        for (long long m = 0; m <= cap && cum < 1.0 - 1e-10; ++m) {
            double pm = std::exp(static_cast<double>(m) * std::log(x) - x -
                                 std::lgamma(static_cast<double>(m) + 1.0));
            if (pm > 0.0) {
                for (size_t r = 0; r < n; ++r)
                    for (size_t j = 0; j < n; ++j) m_acc[r][j] += pm * m_cur[r][j];
                cum += pm;
            }
            if (cum >= 1.0 - 1e-10) break;
            for (size_t r = 0; r < n; ++r) {
                kernel_step(gen, lambda, m_cur[r], next);
                m_cur[r].swap(next);
            }
        }
    }

    double worst = 0.0;
    for (size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (size_t j = 0; j < n; ++j) s += std::abs(m_acc[r][j] - pi.p[j]);
        worst = std::max(worst, 0.5 * s);
    }
    return worst;
}

double exact_mixing_time(const Environment& env, const StateEnumeration& states, double eps,
                         double time_tol) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    // worst-case TV is non-increasing in t; record evaluations and verify
    std::vector<std::pair<double, double>> seen;
    auto d = [&](double t) {
        double v = worst_case_tv(env, states, t);
        for (auto [ts, vs] : seen) {
            bool ok = ts <= t ? (v <= vs + 1e-8) : (v >= vs - 1e-8);
            if (!ok)
                throw std::logic_error("worst-case TV is not monotone in time");
        }
        seen.emplace_back(t, v);
        return v;
    };

    if (d(0.0) <= eps) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (d(hi) > eps) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9) throw std::runtime_error("mixing-time bracket exceeded 1e9");
    }
    while (hi - lo > time_tol) {
        double mid = 0.5 * (lo + hi);
        if (d(mid) > eps)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double mean_hitting_time(const Environment& env, const StateEnumeration& states,
                         const Configuration& from, const Configuration& target) {
    size_t n = states.size();
    if (n > kDenseCap)
        throw std::invalid_argument("state space too large for the dense hitting solve");
    size_t src = states.index(from);
    size_t dst = states.index(target);
    if (src == dst) return 0.0;

    GeneratorMatrix gen = generator_matrix(env, states);
    // solve (L tau)(i) = -1 on the non-target states, tau(target) = 0
    std::vector<size_t> keep, inv(n, SIZE_MAX);
    for (size_t i = 0; i < n; ++i)
        if (i != dst) {
            inv[i] = keep.size();
            keep.push_back(i);
        }
    size_t m = keep.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                              static_cast<Eigen::Index>(m));
    for (size_t r = 0; r < m; ++r) {
        size_t i = keep[r];
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = gen.diag[i];
        for (size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e) {
            size_t j = gen.col[e];
            if (j == dst) continue;
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(inv[j])) += gen.rate[e];
        }
    }
    Eigen::VectorXd b = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), -1.0);
    Eigen::VectorXd tau = a.partialPivLu().solve(b);
    return tau(static_cast<Eigen::Index>(inv[src]));
}

double hitting_tail(const Environment& env, const StateEnumeration& states,
                    const Configuration& from, const Configuration& target, double t) {
    GeneratorMatrix gen = generator_matrix(env, states);
    size_t dst = states.index(target);
    // absorb at the target: zero its outgoing rates
    for (size_t e = gen.row_ptr[dst]; e < gen.row_ptr[dst + 1]; ++e) gen.rate[e] = 0.0;
    gen.diag[dst] = 0.0;
    Distribution d = point_mass(states, from);
    d = distribution_at(d, gen, t);
    return 1.0 - d.p[dst];
}

double stationary_left_quarter_prob(const Distribution& pi, const StateEnumeration& states) {
    if (pi.p.size() != states.size())
        throw std::invalid_argument("distribution does not match the state space");
    long long quarter = states.n() / 4;
    double s = 0.0;
    for (size_t i = 0; i < states.size(); ++i) {
        const auto& pos = states.positions(i);
        if (!pos.empty() && pos.front() + 1 <= quarter) s += pi.p[i];
    }
    return s;
}

double left_quarter_stationary_bound(const Environment& env, long long n, int k) {
    if (2LL * k > n) throw std::invalid_argument("bound requires 2k <= N");
    if (env.first_site > 1 || env.last_site() < n)
        throw std::invalid_argument("environment does not cover the segment");
    long long j_hi = n / 4;
    if (j_hi < 1) return 0.0;  // no site in the left quarter, the event is empty
    long long l_lo = (n + 1) / 2;

    double best = -std::numeric_limits<double>::infinity();
    for (long long j = 1; j <= j_hi; ++j) {
        // running log of prod_{x=j}^{l-1} (1-w(x+1))/w(x); grows with l
        double s = 0.0;
        for (long long x = j; x <= n - 1; ++x) {
            s += std::log(1.0 - env.at(x + 1)) - std::log(env.at(x));
            long long l = x + 1;
            if (l >= l_lo) best = std::max(best, s);
        }
    }
    double nn = static_cast<double>(n);
    return nn * nn * std::exp(best);
}

}  // namespace sep
