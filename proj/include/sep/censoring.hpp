#pragma once

#include <vector>

#include "sep/event_stream.hpp"

namespace sep {

// Piecewise-constant, right-continuous map from time to a set of blocked
// edges. The edge {x, x+1} is stored by its left endpoint x. A transition
// along an edge at time t is performed iff the edge is not blocked at t.
class CensoringScheme {
  public:
    CensoringScheme() = default;

    // Appends an interval starting at t_start (must exceed the previous
    // start; the first must be 0) blocking the given edges.
    void add_interval(double t_start, std::vector<long long> blocked_edges);

    bool empty() const { return starts_.empty(); }
    size_t intervals() const { return starts_.size(); }
    double interval_start(size_t i) const { return starts_[i]; }
    const std::vector<long long>& interval_edges(size_t i) const { return edges_[i]; }

    // Index of the interval containing time t (the last with start <= t).
    size_t interval_at(double t) const;

    bool blocked(double t, long long edge_left_site) const;

  private:
    std::vector<double> starts_;
    std::vector<std::vector<long long>> edges_;  // sorted per interval
};

// The alternating-box scheme: during [iS, (i+1)S) the blocked partition edges
// sit at x = 2jU (even i) or x = (2j+1)U (odd i), j >= 1, x <= n_sites - 2U;
// for i < 2k the lowest blocked edge with x >= k - floor(i/2) is replaced by
// the fence {k - floor(i/2) - 1, k - floor(i/2)}, releasing one particle of
// the initial left block per two periods. Intervals are generated up to the
// horizon.
CensoringScheme make_alternating_boxes(long long n_sites, int k, long long box_halfwidth,
                                       double switch_period, double horizon);

}  // namespace sep
