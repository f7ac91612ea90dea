#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sep/configuration.hpp"
#include "sep/environment.hpp"

namespace sep {

// Inclusive run of sites [lo, hi].
struct SiteInterval {
    long long lo = 0;
    long long hi = 0;
    long long length() const { return hi - lo + 1; }
};

// Leftmost run of m consecutive sites with rate <= threshold whose start lies
// in the window [ceil(n/8), floor(n/4) - (m+1)], where n = env.size().
// Returns nothing when no such run exists. Throws if the window is shorter
// than m.
std::optional<SiteInterval> find_low_drift_interval(const Environment& env, int m,
                                                    double threshold);

// Two-level flattening: sites with rate <= 1/2 + tilt are set to exactly
// 1/2 + tilt, all others to 1. Pointwise >= the original environment wherever
// the original is <= 1/2 + tilt, so the flattened dynamics is dominated by
// the original one in the environment partial order.
Environment flatten_environment(const Environment& env, double tilt);

// Exclusion dynamics on the flattened environment with the interval turned
// into a bottleneck driven by dedicated channels:
//   - ordinary site clocks run only outside [lo, hi]; moves across the edges
//     {lo-1, lo} and {hi, hi+1} by those clocks are suppressed;
//   - each interior interval edge carries a rate-1 channel that attempts a
//     right move with probability 1/2 + tilt, else a left move;
//   - a rate-1 inflow channel moves the rightmost particle left of lo onto lo
//     when lo is vacant;
//   - a rate-1 outflow channel relocates the particle at hi (when present) to
//     the rightmost empty site of the segment, counting the relocation in
//     right_crossings.
// A boundary-driven chain on {1,...,m} is run off the same channel draws; up
// to drain_time its occupations must equal the interval occupations site for
// site and its annihilation counter must equal right_crossings. Both checks
// are recorded.
struct ModifiedProcessResult {
    Configuration final_state;
    // First time the leftmost particle is at or right of the interval start
    // (0 when already true initially); empty if it never happens before the
    // horizon.
    std::optional<double> drain_time;
    long long right_crossings = 0;          // outflow-channel relocations
    long long boundary_annihilations = 0;   // coupled chain's counter
    bool occupancy_match = true;            // interval == chain at all events up to drain_time
    bool crossings_match = true;            // counters equal at all events up to drain_time
    long long suppressed_outflows = 0;      // outflow fired with no empty site right of hi
    // Change points of the leftmost-particle position, (time, site).
    std::vector<std::pair<double, long long>> leftmost_path;
};

// env must already be flattened: every site in `interval` at exactly
// 1/2 + tilt. Requires 1 < interval.lo, interval.hi < env.size(), and
// k < env.size() - interval.hi so the outflow channel always finds room.
ModifiedProcessResult simulate_modified_process(const Configuration& eta0,
                                                const Environment& env, SiteInterval interval,
                                                double tilt, double horizon, uint64_t seed);

}  // namespace sep
