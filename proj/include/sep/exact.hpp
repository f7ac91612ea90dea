#pragma once

#include <optional>
#include <vector>

#include "sep/censoring.hpp"
#include "sep/configuration.hpp"
#include "sep/enumeration.hpp"
#include "sep/environment.hpp"

namespace sep {

// Sparse CTMC generator over a StateEnumeration. Off-diagonal entries connect
// configurations differing by one nearest-neighbor move; rows sum to zero.
struct GeneratorMatrix {
    size_t n = 0;
    std::vector<size_t> row_ptr;
    std::vector<size_t> col;
    std::vector<double> rate;
    std::vector<double> diag;

    double max_exit_rate() const;
    // y += x L (left multiplication by a row vector)
    void apply_left(const std::vector<double>& x, std::vector<double>& y) const;
};

// blocked_edges: left endpoints x of edges {x,x+1} whose transitions (both
// directions) are removed.
GeneratorMatrix generator_matrix(const Environment& env, const StateEnumeration& states,
                                 const std::vector<long long>& blocked_edges = {});

struct Distribution {
    long long n = 0;
    int k = 0;
    std::vector<double> p;
};

Distribution point_mass(const StateEnumeration& states, const Configuration& c);

// Stationary distribution. For environments with all rates < 1 this is the
// reversible product form; with rate-1 atoms it solves the stationarity
// equations restricted to the unique closed communicating class.
Distribution stationary(const Environment& env, const StateEnumeration& states);

// Product form directly (requires all omega(x) < 1) and the linear-algebra
// route (any environment); exposed separately so they can cross-check.
Distribution stationary_product(const Environment& env, const StateEnumeration& states);
Distribution stationary_nullspace(const Environment& env, const StateEnumeration& states);

// init * exp(tL) by uniformization, L1 truncation error <= tol.
Distribution distribution_at(const Distribution& init, const GeneratorMatrix& gen, double t,
                             double tol = 1e-10);

// Interval-wise censored evolution: on each scheme interval the blocked
// edges' rates are zeroed and the corresponding semigroup factor applied.
Distribution censored_distribution_at(const Distribution& init, const Environment& env,
                                      const StateEnumeration& states,
                                      const CensoringScheme& scheme, double t);

double tv_distance(const Distribution& p, const Distribution& q);

// max over point-mass initial states of TV(exp(tL) row, pi).
double worst_case_tv(const Environment& env, const StateEnumeration& states, double t);

// First time the worst-case TV curve drops below eps, by bracketing plus
// bisection to the given absolute time tolerance. The curve is spot-checked
// for monotonicity before the bracket is trusted.
double exact_mixing_time(const Environment& env, const StateEnumeration& states, double eps,
                         double time_tol = 2e-7);

// Expected hitting time of `target` from `from` (linear solve on the
// non-target states).
double mean_hitting_time(const Environment& env, const StateEnumeration& states,
                         const Configuration& from, const Configuration& target);

// P(tau_target > t) from `from`, via the absorbed chain.
double hitting_tail(const Environment& env, const StateEnumeration& states,
                    const Configuration& from, const Configuration& target, double t);

// Stationary probability of the left-quarter event.
double stationary_left_quarter_prob(const Distribution& pi, const StateEnumeration& states);

// N^2 * max over 1 <= j <= floor(N/4), ceil(N/2) <= l <= N of
// prod_{x=j}^{l-1} (1-omega(x+1))/omega(x), accumulated in log space.
// Requires 2k <= N. Upper-bounds the stationary left-quarter probability.
double left_quarter_stationary_bound(const Environment& env, long long n, int k);

}  // namespace sep
