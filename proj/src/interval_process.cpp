#include "sep/interval_process.hpp"

#include <cmath>
#include <stdexcept>

#include "sep/dynamics.hpp"
#include "sep/event_stream.hpp"
#include "sep/rng.hpp"

namespace sep {

std::optional<SiteInterval> find_low_drift_interval(const Environment& env, int m,
                                                    double threshold) {
    if (m < 1) throw std::invalid_argument("run length must be positive");
    long long n = env.size();
    long long x_lo = (n + 7) / 8;            // ceil(n/8)
    long long x_hi = n / 4 - (m + 1);        // floor(n/4) - (m+1)
    if (x_hi < x_lo)
        throw std::invalid_argument("search window shorter than the run length");

    long long run = 0;
    for (long long x = x_lo; x <= x_hi + m - 1 && x <= env.last_site(); ++x) {
        run = (env.at(x) <= threshold) ? run + 1 : 0;
        if (run >= m) {
            long long start = x - m + 1;
            if (start <= x_hi) return SiteInterval{start, x};
            break;  // any later full run would start beyond the window
        }
    }
    return std::nullopt;
}

Environment flatten_environment(const Environment& env, double tilt) {
    if (!(tilt >= 0.0 && tilt < 0.5))
        throw std::invalid_argument("flattening tilt must lie in [0, 1/2)");
    Environment out = env;
    double level = 0.5 + tilt;
    for (double& r : out.rates) r = (r <= level) ? level : 1.0;
    return out;
}

ModifiedProcessResult simulate_modified_process(const Configuration& eta0,
                                                const Environment& env, SiteInterval interval,
                                                double tilt, double horizon, uint64_t seed) {
    long long n = env.size();
    long long lo = interval.lo, hi = interval.hi;
    int m = static_cast<int>(interval.length());
    if (env.first_site != 1 || eta0.first_site() != 1 || eta0.size() != n)
        throw std::invalid_argument("modified process runs on a segment starting at 1");
    if (!(lo > 1 && hi >= lo && hi < n)) throw std::invalid_argument("invalid interval");
    if (!(tilt >= 0.0 && tilt < 0.5)) throw std::invalid_argument("invalid tilt");
    for (long long x = lo; x <= hi; ++x)
        if (env.at(x) != 0.5 + tilt)
            throw std::invalid_argument("environment is not flattened on the interval");
    int k = eta0.particles();
    if (k < 1) throw std::invalid_argument("modified process needs at least one particle");
    if (k >= n - hi)
        throw std::invalid_argument("outflow needs k < N - hi so an empty site always exists");

    ModifiedProcessResult res;
    res.final_state = eta0;
    Configuration& xi = res.final_state;
    // coupled boundary-driven chain starts equal to the interval occupations
    std::vector<uint8_t> sigma(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) sigma[static_cast<size_t>(i)] = xi.occupied(lo + i);

    long long lm = leftmost_particle(xi);
    res.leftmost_path.emplace_back(0.0, lm);
    bool drained = lm >= lo;
    if (drained) res.drain_time = 0.0;

    double right = 0.5 + tilt;
    auto check_coupling = [&] {
        for (int i = 0; i < m; ++i)
            if (xi.occupied(lo + i) != (sigma[static_cast<size_t>(i)] != 0)) {
                res.occupancy_match = false;
                break;
            }
        if (res.right_crossings != res.boundary_annihilations) res.crossings_match = false;
    };
    check_coupling();

    // ordinary site clocks (interval-site ticks discarded) merged with the
    // m+1 rate-1 channels
    EventCursor site_cursor(build_event_stream(1, n, horizon, subseed(seed, 0x73697465)));
    SplitMix64 ch_rng(subseed(seed, 0x6368616e));
    double ch_rate = static_cast<double>(m + 1);
    double ch_next = ch_rng.exponential(ch_rate);

    auto note_leftmost = [&](double t) {
        res.leftmost_path.emplace_back(t, lm);
        if (!drained && lm >= lo) {
            drained = true;
            res.drain_time = t;
        }
    };

    SiteEvent ev;
    while (true) {
        double ts = site_cursor.peek_time();
        if (ts <= ch_next) {
            if (!site_cursor.next(ev, horizon)) {
                if (ch_next > horizon) break;
                continue;
            }
            // no site clocks inside the interval; the boundary edges are
            // crossed only by the dedicated channels
            if (ev.site >= lo && ev.site <= hi) continue;
            if (ev.head && ev.site == lo - 1) continue;
            if (!ev.head && ev.site == hi + 1) continue;
            long long before = lm;
            if (apply_event(xi, env, ev) && ev.site == lm) {
                lm += ev.head ? 1 : -1;
                if (lm != before) note_leftmost(ev.time);
            }
            continue;
        }
        if (ch_next > horizon) break;
        double t = ch_next;
        uint64_t ch = ch_rng.below(static_cast<uint64_t>(m + 1));
        double u = ch_rng.uniform01();
        ch_next = t + ch_rng.exponential(ch_rate);
        bool was_drained = drained;

        if (ch < static_cast<uint64_t>(m - 1)) {
            // interior interval edge and the matching chain edge
            long long a = lo + static_cast<long long>(ch);
            size_t i = static_cast<size_t>(ch);
            if (u <= right) {
                if (xi.occupied(a) && !xi.occupied(a + 1)) {
                    xi.set(a, false);
                    xi.set(a + 1, true);
                    if (a == lm) {
                        ++lm;
                        note_leftmost(t);
                    }
                }
                if (sigma[i] == 1 && sigma[i + 1] == 0) {
                    sigma[i] = 0;
                    sigma[i + 1] = 1;
                }
            } else {
                if (xi.occupied(a + 1) && !xi.occupied(a)) {
                    xi.set(a + 1, false);
                    xi.set(a, true);
                    if (a + 1 == lm) {
                        --lm;
                        note_leftmost(t);
                    }
                }
                if (sigma[i] == 0 && sigma[i + 1] == 1) {
                    sigma[i] = 1;
                    sigma[i + 1] = 0;
                }
            }
        } else if (ch == static_cast<uint64_t>(m - 1)) {
            // inflow: rightmost particle left of lo teleports onto lo
            if (!xi.occupied(lo)) {
                long long p = -1;
                for (long long x = lo - 1; x >= 1; --x)
                    if (xi.occupied(x)) {
                        p = x;
                        break;
                    }
                if (p >= 1) {
                    xi.set(p, false);
                    xi.set(lo, true);
                    if (p == lm) {
                        lm = lo;
                        note_leftmost(t);
                    }
                }
            }
            if (sigma[0] == 0) sigma[0] = 1;
        } else {
            // outflow: the particle at hi relocates to the rightmost empty
            // site; the chain annihilates at its right end
            if (xi.occupied(hi)) {
                long long re = -1;
                for (long long x = n; x >= 1; --x)
                    if (!xi.occupied(x)) {
                        re = x;
                        break;
                    }
                if (re > hi) {
                    xi.set(hi, false);
                    xi.set(re, true);
                    ++res.right_crossings;
                    if (hi == lm) {
                        long long x = hi + 1;
                        while (x <= n && !xi.occupied(x)) ++x;
                        lm = x;
                        note_leftmost(t);
                    }
                } else {
                    ++res.suppressed_outflows;
                }
            }
            if (sigma[static_cast<size_t>(m - 1)] == 1) {
                sigma[static_cast<size_t>(m - 1)] = 0;
                ++res.boundary_annihilations;
            }
        }

        if (!was_drained) check_coupling();
    }
    return res;
}

}  // namespace sep
