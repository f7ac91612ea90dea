#include "sep/second_class.hpp"

#include <stdexcept>

namespace sep {

namespace {

// swap priority: first class > second class > hole
inline int rank(uint8_t v) { return v == 1 ? 2 : (v == 2 ? 1 : 0); }

}  // namespace

ThreeSpecies::ThreeSpecies(std::vector<uint8_t> values, long long first_site)
    : vals_(std::move(values)), first_(first_site) {
    for (auto v : vals_)
        if (v > 2) throw std::invalid_argument("three-species values must be 0, 1 or 2");
}

void ThreeSpecies::set(long long site, uint8_t v) {
    if (v > 2) throw std::invalid_argument("three-species values must be 0, 1 or 2");
    vals_[static_cast<size_t>(site - first_)] = v;
}

bool apply_event_second_class(ThreeSpecies& xi, const Environment& env, const SiteEvent& ev) {
    long long x = ev.site;
    long long other;
    if (ev.head) {
        if (x >= xi.last_site()) return false;
        other = x + 1;
        if (ev.u > env.at(x)) return false;
    } else {
        if (x <= xi.first_site()) return false;
        other = x - 1;
        if (ev.u <= env.at(x)) return false;
    }
    uint8_t a = xi.at(x), b = xi.at(other);
    if (rank(a) <= rank(b)) return false;
    xi.set(x, b);
    xi.set(other, a);
    return true;
}

ThreeSpeciesRun evolve_second_class(const ThreeSpecies& xi0, const Environment& env,
                                    const EventStream& stream, double t) {
    if (env.first_site > xi0.first_site() || env.last_site() < xi0.last_site())
        throw std::invalid_argument("environment does not cover the configuration window");

    ThreeSpeciesRun run;
    run.config = xi0;
    ThreeSpecies& xi = run.config;
    auto touched = [&] {
        return xi.at(xi.first_site()) == 1 || xi.at(xi.last_site()) == 1;
    };
    run.one_touched_boundary = touched();

    EventCursor cursor(stream);
    SiteEvent ev;
    while (cursor.next(ev, t)) {
        if (!apply_event_second_class(xi, env, ev)) continue;
        if (!run.one_touched_boundary &&
            (ev.site <= xi.first_site() + 1 || ev.site >= xi.last_site() - 1))
            run.one_touched_boundary = touched();
    }
    return run;
}

Configuration project_seconds_as_particles(const ThreeSpecies& xi) {
    std::vector<uint8_t> occ(xi.values().size());
    for (size_t i = 0; i < occ.size(); ++i) occ[i] = xi.values()[i] != 0;
    return Configuration(std::move(occ), xi.first_site());
}

Configuration project_seconds_as_holes(const ThreeSpecies& xi) {
    std::vector<uint8_t> occ(xi.values().size());
    for (size_t i = 0; i < occ.size(); ++i) occ[i] = xi.values()[i] == 1;
    return Configuration(std::move(occ), xi.first_site());
}

Configuration project_second_frame(const ThreeSpecies& xi) {
    std::vector<long long> sites;   // retained (non-first-class) sites
    std::vector<uint8_t> occ;       // 1 where the retained site holds a 2
    for (long long x = xi.first_site(); x <= xi.last_site(); ++x) {
        uint8_t v = xi.at(x);
        if (v == 1) continue;
        sites.push_back(x);
        occ.push_back(v == 2);
    }
    // anchor: leftmost 2 at a site <= 0, else leftmost 2 right of 0
    ptrdiff_t anchor = -1;
    for (size_t i = 0; i < sites.size(); ++i) {
        if (occ[i] && sites[i] <= 0) {
            anchor = static_cast<ptrdiff_t>(i);
            break;
        }
    }
    if (anchor < 0) {
        for (size_t i = 0; i < sites.size(); ++i) {
            if (occ[i] && sites[i] > 0) {
                anchor = static_cast<ptrdiff_t>(i);
                break;
            }
        }
    }
    if (anchor < 0)
        throw std::invalid_argument("frame projection needs at least one second-class particle");
    return Configuration(std::move(occ), -static_cast<long long>(anchor));
}

}  // namespace sep
