#include "sep/censoring.hpp"

#include <algorithm>
#include <stdexcept>

namespace sep {

void CensoringScheme::add_interval(double t_start, std::vector<long long> blocked_edges) {
    if (starts_.empty()) {
        if (t_start != 0.0)
            throw std::invalid_argument("first censoring interval must start at time 0");
    } else if (t_start <= starts_.back()) {
        throw std::invalid_argument("censoring interval starts must strictly increase");
    }
    std::sort(blocked_edges.begin(), blocked_edges.end());
    blocked_edges.erase(std::unique(blocked_edges.begin(), blocked_edges.end()),
                        blocked_edges.end());
    starts_.push_back(t_start);
    edges_.push_back(std::move(blocked_edges));
}

size_t CensoringScheme::interval_at(double t) const {
    if (empty() || t < starts_.front())
        throw std::out_of_range("time precedes the censoring scheme");
    // last interval with start <= t
    auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    return static_cast<size_t>(it - starts_.begin()) - 1;
}

bool CensoringScheme::blocked(double t, long long edge_left_site) const {
    if (empty()) return false;
    const auto& ed = edges_[interval_at(t)];
    return std::binary_search(ed.begin(), ed.end(), edge_left_site);
}

CensoringScheme make_alternating_boxes(long long n_sites, int k, long long box_halfwidth,
                                       double switch_period, double horizon) {
    if (box_halfwidth < 1) throw std::invalid_argument("box half-width must be >= 1");
    if (!(switch_period > 0.0)) throw std::invalid_argument("switch period must be positive");
    if (k < 0) throw std::invalid_argument("particle count must be nonnegative");

    CensoringScheme scheme;
    const long long u = box_halfwidth;
    long long n_intervals = static_cast<long long>(horizon / switch_period) + 1;
    for (long long i = 0; i < n_intervals; ++i) {
        // partition edges x = 2jU (even phase) or (2j+1)U (odd phase), j >= 1
        std::vector<long long> edges;
        long long first = (i % 2 == 0) ? 2 * u : 3 * u;
        for (long long x = first; x <= n_sites - 2 * u; x += 2 * u) edges.push_back(x);

        if (i < 2LL * k) {
            // release phase: replace the lowest partition edge at or right of
            // the current fence site with the fence one step left of it, so
            // the leading block sheds exactly one particle per two periods
            long long fence = k - static_cast<long long>(i / 2);
            if (fence - 1 >= 1) {
                auto it = std::lower_bound(edges.begin(), edges.end(), fence);
                if (it != edges.end()) edges.erase(it);
                edges.push_back(fence - 1);
            }
        }
        scheme.add_interval(static_cast<double>(i) * switch_period, std::move(edges));
    }
    return scheme;
}

}  // namespace sep
