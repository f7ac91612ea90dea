#include "sep/dynamics.hpp"

#include <stdexcept>

namespace sep {

namespace {

void check_cover(const Configuration& c, const Environment& env) {
    if (env.first_site > c.first_site() || env.last_site() < c.last_site())
        throw std::invalid_argument("environment does not cover the configuration window");
}

// Sites touched by an event if it moves a particle: (x, x+1) or (x-1, x).
// Returns false for boundary rings pointing outward.
inline bool event_span(const Configuration& c, const SiteEvent& ev, long long& from,
                       long long& to) {
    if (ev.head) {
        if (ev.site >= c.last_site()) return false;
        from = ev.site;
        to = ev.site + 1;
    } else {
        if (ev.site <= c.first_site()) return false;
        from = ev.site;
        to = ev.site - 1;
    }
    return true;
}

}  // namespace

bool apply_event(Configuration& c, const Environment& env, const SiteEvent& ev) {
    long long from, to;
    if (!event_span(c, ev, from, to)) return false;
    if (!c.occupied(from) || c.occupied(to)) return false;
    double w = env.at(ev.site);
    if (ev.head ? (ev.u > w) : (ev.u <= w)) return false;
    c.set(from, false);
    c.set(to, true);
    return true;
}

Configuration evolve(const Configuration& eta0, const Environment& env,
                     const EventStream& stream, double t) {
    check_cover(eta0, env);
    Configuration c = eta0;
    EventCursor cursor(stream);
    SiteEvent ev;
    while (cursor.next(ev, t)) apply_event(c, env, ev);
    return c;
}

Configuration evolve_censored(const Configuration& eta0, const Environment& env,
                              const EventStream& stream, const CensoringScheme& scheme,
                              double t) {
    check_cover(eta0, env);
    Configuration c = eta0;
    EventCursor cursor(stream);
    SiteEvent ev;
    while (cursor.next(ev, t)) {
        long long edge = ev.head ? ev.site : ev.site - 1;
        if (scheme.blocked(ev.time, edge)) continue;
        apply_event(c, env, ev);
    }
    return c;
}

std::vector<Configuration> evolve_coupled(const std::vector<Configuration>& starts,
                                          const std::vector<Environment>& envs,
                                          const EventStream& stream, double t,
                                          CouplingMonitor* monitor) {
    if (starts.empty()) throw std::invalid_argument("no trajectories to couple");
    if (envs.size() != 1 && envs.size() != starts.size())
        throw std::invalid_argument("pass one shared environment or one per trajectory");
    for (size_t i = 0; i < starts.size(); ++i)
        check_cover(starts[i], envs[envs.size() == 1 ? 0 : i]);

    std::vector<Configuration> cs = starts;
    EventCursor cursor(stream);
    SiteEvent ev;
    while (cursor.next(ev, t)) {
        bool any = false;
        for (size_t i = 0; i < cs.size(); ++i)
            any = apply_event(cs[i], envs[envs.size() == 1 ? 0 : i], ev) || any;
        if (any && monitor) {
            for (auto [lo, up] : monitor->pairs)
                if (!leq(cs[lo], cs[up])) ++monitor->violations;
        }
    }
    return cs;
}

std::optional<double> coalescence_time(const Environment& env, int k, const EventStream& stream,
                                       double horizon) {
    long long n = env.size();
    Configuration a = top_state(n, k);
    Configuration b = ground_state(n, k);
    long long diff = 0;
    for (long long x = 1; x <= n; ++x) diff += a.occupied(x) != b.occupied(x);
    if (diff == 0) return 0.0;

    EventCursor cursor(stream);
    SiteEvent ev;
    while (cursor.next(ev, horizon)) {
        long long from, to;
        if (!event_span(a, ev, from, to)) continue;
        long long before = (a.occupied(from) != b.occupied(from)) +
                           (a.occupied(to) != b.occupied(to));
        apply_event(a, env, ev);
        apply_event(b, env, ev);
        long long after = (a.occupied(from) != b.occupied(from)) +
                          (a.occupied(to) != b.occupied(to));
        diff += after - before;
        if (diff == 0) return ev.time;
    }
    return std::nullopt;
}

std::optional<double> hitting_time_ground(const Configuration& eta0, const Environment& env,
                                          const EventStream& stream, double horizon) {
    check_cover(eta0, env);
    Configuration target = ground_state(eta0.size(), eta0.particles());
    if (eta0.first_site() != 1)
        throw std::invalid_argument("ground-state hitting is defined for segments starting at 1");
    Configuration c = eta0;
    long long diff = 0;
    for (long long x = 1; x <= c.last_site(); ++x) diff += c.occupied(x) != target.occupied(x);
    if (diff == 0) return 0.0;

    EventCursor cursor(stream);
    SiteEvent ev;
    while (cursor.next(ev, horizon)) {
        long long from, to;
        if (!event_span(c, ev, from, to)) continue;
        long long before = (c.occupied(from) != target.occupied(from)) +
                           (c.occupied(to) != target.occupied(to));
        if (!apply_event(c, env, ev)) continue;
        long long after = (c.occupied(from) != target.occupied(from)) +
                          (c.occupied(to) != target.occupied(to));
        diff += after - before;
        if (diff == 0) return ev.time;
    }
    return std::nullopt;
}

WindowRun evolve_window(const Configuration& eta0, const Environment& env,
                        const EventStream& stream, double t) {
    check_cover(eta0, env);
    WindowRun run;
    run.config = eta0;
    Configuration& c = run.config;
    auto touched = [&] {
        return c.occupied(c.first_site()) || !c.occupied(c.last_site());
    };
    run.boundary_touched = touched();

    EventCursor cursor(stream);
    SiteEvent ev;
    while (cursor.next(ev, t)) {
        if (!apply_event(c, env, ev)) continue;
        if (!run.boundary_touched &&
            (ev.site <= c.first_site() + 1 || ev.site >= c.last_site() - 1))
            run.boundary_touched = touched();
    }
    return run;
}

WindowHit window_hitting_time(const Configuration& eta0, const Configuration& target,
                              const Environment& env, const EventStream& stream,
                              double horizon) {
    check_cover(eta0, env);
    if (eta0.first_site() != target.first_site() || eta0.size() != target.size())
        throw std::invalid_argument("target lives on a different window");

    WindowHit result;
    Configuration c = eta0;
    long long diff = 0;
    for (long long x = c.first_site(); x <= c.last_site(); ++x)
        diff += c.occupied(x) != target.occupied(x);
    auto touched = [&] {
        return c.occupied(c.first_site()) || !c.occupied(c.last_site());
    };
    result.boundary_touched = touched();
    if (diff == 0) {
        result.hit = 0.0;
        return result;
    }

    EventCursor cursor(stream);
    SiteEvent ev;
    while (cursor.next(ev, horizon)) {
        long long from, to;
        if (!event_span(c, ev, from, to)) continue;
        long long before = (c.occupied(from) != target.occupied(from)) +
                           (c.occupied(to) != target.occupied(to));
        if (!apply_event(c, env, ev)) continue;
        long long after = (c.occupied(from) != target.occupied(from)) +
                          (c.occupied(to) != target.occupied(to));
        diff += after - before;
        if (!result.boundary_touched &&
            (ev.site <= c.first_site() + 1 || ev.site >= c.last_site() - 1))
            result.boundary_touched = touched();
        if (diff == 0) {
            result.hit = ev.time;
            return result;
        }
    }
    return result;
}

std::vector<long long> leftmost_at_times(const Configuration& eta0, const Environment& env,
                                         const EventStream& stream,
                                         const CensoringScheme* scheme,
                                         const std::vector<double>& times) {
    check_cover(eta0, env);
    if (eta0.particles() == 0)
        throw std::invalid_argument("leftmost particle undefined for empty configurations");
    for (size_t i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1])
            throw std::invalid_argument("sample times must be ascending");

    Configuration c = eta0;
    long long lm = leftmost_particle(c);
    std::vector<long long> out;
    out.reserve(times.size());
    size_t next = 0;

    EventCursor cursor(stream);
    SiteEvent ev;
    double t_end = times.empty() ? 0.0 : times.back();
    while (cursor.next(ev, t_end)) {
        while (next < times.size() && times[next] < ev.time) {
            out.push_back(lm);
            ++next;
        }
        if (scheme) {
            long long edge = ev.head ? ev.site : ev.site - 1;
            if (scheme->blocked(ev.time, edge)) continue;
        }
        if (!apply_event(c, env, ev)) continue;
        if (ev.site == lm) {
            // the leftmost particle itself moved one step
            lm += ev.head ? 1 : -1;
        }
    }
    while (next < times.size()) {
        out.push_back(lm);
        ++next;
    }
    return out;
}

}  // namespace sep
