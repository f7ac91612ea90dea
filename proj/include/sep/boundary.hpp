#pragma once

#include <cstdint>
#include <vector>

#include "sep/rng.hpp"

namespace sep {

// Boundary-driven exclusion chain on sites {1,...,m}: interior jumps right at
// rate 1/2 + tilt and left at rate 1/2 - tilt, a particle is created at site 1
// at rate 1 when it is empty, and the particle at site m is destroyed at
// rate 1 when present. Requires |tilt| < 1/2.
struct BoundaryChainSpec {
    int m = 0;
    double tilt = 0.0;
};

// Exact stationary occupation profile E[sigma(i)], i = 1..m, from the full
// 2^m-state stationarity equations (dense LU for m <= 11, power iteration on
// the uniformized kernel with residual <= 1e-12 up to the cap m <= 14).
std::vector<double> exact_boundary_profile(const BoundaryChainSpec& spec);

// Closed-form profile at tilt = 0: E[sigma(i)] = (m + 1/2 - i) / m.
std::vector<double> flat_boundary_profile(int m);

// Upper bound 2*tilt*m + 2/(m+1) for the right-edge stationary occupation
// when tilt > 0.
double right_edge_occupation_bound(int m, double tilt);

struct BoundaryRun {
    std::vector<uint8_t> state;   // occupation at the final time
    long long annihilated = 0;    // number of right-boundary removals
    double time = 0.0;
};

// Event-driven simulation from `init` for time t; an empty init means the
// all-empty state, any other length mismatch throws.
BoundaryRun simulate_boundary(const BoundaryChainSpec& spec, const std::vector<uint8_t>& init,
                              double t, uint64_t seed);

// One draw from the exact stationary distribution (inverse CDF over the 2^m
// states; same cap as exact_boundary_profile).
std::vector<uint8_t> sample_boundary_stationary(const BoundaryChainSpec& spec, uint64_t seed);

struct BoundaryProfileEstimate {
    std::vector<double> mean;     // per-site occupation frequency
    std::vector<double> stderr_;  // batch-means standard errors
    double z_rate = 0.0;          // post-burn-in annihilations per unit time
};

// Occupancy sampled `samples` times `spacing` apart after `burn_in`, from the
// all-empty state; standard errors by batch means over `batches` batches.
BoundaryProfileEstimate mc_boundary_profile(const BoundaryChainSpec& spec, long long samples,
                                            double spacing, double burn_in, int batches,
                                            uint64_t seed);

struct DecayFit {
    std::vector<int> sizes;
    std::vector<double> values;   // E[sigma(m)] under the reversed drift
    double slope = 0.0;           // fitted d ln(value) / dm
    double predicted = 0.0;       // -ln(q)/2 for q = (1/2+gamma)/(1/2-gamma)
};

// Right-edge stationary occupation under tilt = -gamma across the given chain
// lengths, with the fitted exponential decay rate against the predicted one.
DecayFit blythe_decay_check(double gamma, const std::vector<int>& sizes);

}  // namespace sep
