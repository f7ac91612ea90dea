#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sep/censoring.hpp"
#include "sep/configuration.hpp"
#include "sep/environment.hpp"
#include "sep/law.hpp"

namespace sep {

struct QuantileEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    int replicas = 0;
};

// Raised when too many replicas fail to resolve before the horizon/event cap;
// carries the quantile of the resolved runs so callers can still see it.
struct HorizonExhausted : std::runtime_error {
    HorizonExhausted(const std::string& what, double censored_quantile_, double censored_fraction_)
        : std::runtime_error(what),
          censored_quantile(censored_quantile_),
          censored_fraction(censored_fraction_) {}
    double censored_quantile;
    double censored_fraction;
};

// Raised by the window estimators when the fraction of replicas whose
// trajectory touched the window boundary exceeds eps/10.
struct WindowTooSmall : std::runtime_error {
    WindowTooSmall(const std::string& what, double touch_fraction_)
        : std::runtime_error(what), touch_fraction(touch_fraction_) {}
    double touch_fraction;
};

// Empirical (1-eps)-quantile of the coalescence time of the coupled pair
// started from the two extremal states (every state is sandwiched between
// them under the monotone coupling, so their coalescence bounds the coupling
// time of any pair). Bootstrap standard error attached. Each replica runs
// until coalescence or the per-replica event cap; if more than an eps
// fraction hit the cap, HorizonExhausted is thrown.
QuantileEstimate mc_mixing_upper(const Environment& env, long long n, int k, double eps,
                                 int replicas, uint64_t seed,
                                 long long event_cap = 100'000'000);

// Fraction of replicas whose configuration at time t has a particle in the
// left quarter of the segment.
double mc_left_quarter_prob(const Environment& env, long long n, int k,
                            const Configuration& init, double t, int replicas, uint64_t seed);

// Leftmost-particle statistics at the given times, from the left-packed
// state, optionally under a censoring scheme (pass nullptr for none). The
// window env should be much wider than the particle cloud; sites are
// env.first_site()..env.last_site() and the initial configuration packs k
// particles at the window's left end.
struct DisplacementCurve {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> q25, q50, q75;
    // samples[t][r]: leftmost position of replica r at times[t]
    std::vector<std::vector<long long>> samples;
};

DisplacementCurve displacement_experiment(const Environment& env, int k,
                                          const CensoringScheme* scheme,
                                          const std::vector<double>& times, int replicas,
                                          uint64_t seed);

// Empirical (1-eps)-quantile of the first time the infinite-volume dynamics
// started from the left-packed state with a right-infinite particle sea
// (k free particles at sites 1..k, all sites > n occupied) reaches the
// packed state with everything beyond n-k occupied. Simulated on the finite
// window env; throws WindowTooSmall when boundary touches exceed eps/10, and
// HorizonExhausted when more than an eps fraction never hit before `horizon`.
QuantileEstimate mc_hitting_eps(const Environment& env, long long n, int k, double eps,
                                int replicas, uint64_t seed, double horizon);

enum class ScalingEstimator { CoalescenceQuantile, HittingQuantile };

struct ScalingRecord {
    std::string regime;
    std::string estimator;
    long long n = 0;
    int k = 0;
    double eps = 0.0;
    int replicas = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    uint64_t seed = 0;
};

struct ScalingResult {
    std::vector<ScalingRecord> records;   // one per (N, environment draw)
    std::vector<double> medians;          // per-N median estimate over environments
    double slope = 0.0;                   // OLS slope of log(median) vs log(N)
    double slope_stderr = 0.0;
    bool dropped_smallest = false;        // smallest N excluded as a transient
};

// For each N in the grid: draw `environments` fresh environments from the
// law, run the chosen estimator with k = floor(rho*N) on each, and take the
// median. Fits log(median) against log(N); the smallest grid point is
// dropped from the fit when its residual exceeds twice the residual sd.
ScalingResult scaling_experiment(const EnvironmentLaw& law, const std::vector<long long>& grid,
                                 ScalingEstimator estimator, double rho, double eps,
                                 int replicas, int environments, uint64_t seed,
                                 long long event_cap = 100'000'000);

}  // namespace sep
