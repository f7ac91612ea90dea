#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sep/censoring.hpp"
#include "sep/configuration.hpp"
#include "sep/environment.hpp"
#include "sep/event_stream.hpp"

namespace sep {

// Applies one clock ring to a configuration under the canonical rules:
// HEAD at x (x < right end): move the particle at x right if u <= omega(x)
// and x+1 is empty; TAIL at x (x > left end): move it left if u > omega(x)
// and x-1 is empty. Rings at the ends pointing outward are no-ops.
// Returns true iff a particle moved.
bool apply_event(Configuration& c, const Environment& env, const SiteEvent& ev);

// Evolution from eta0 applying every stream event with time <= t in order.
Configuration evolve(const Configuration& eta0, const Environment& env,
                     const EventStream& stream, double t);

// Same, skipping events whose edge is blocked at the event time.
Configuration evolve_censored(const Configuration& eta0, const Environment& env,
                              const EventStream& stream, const CensoringScheme& scheme,
                              double t);

// Several trajectories driven by one shared stream (the canonical coupling).
// If monitor_pairs is non-null, the prefix order is checked for each listed
// (lower, upper) index pair after every event and violations are counted.
struct CouplingMonitor {
    std::vector<std::pair<size_t, size_t>> pairs;  // (expected lower, expected upper)
    long long violations = 0;
};

std::vector<Configuration> evolve_coupled(const std::vector<Configuration>& starts,
                                          const std::vector<Environment>& envs,
                                          const EventStream& stream, double t,
                                          CouplingMonitor* monitor = nullptr);

// First event time at which the coupled trajectories from (top, ground)
// agree; nullopt if they have not met by the horizon.
std::optional<double> coalescence_time(const Environment& env, int k, const EventStream& stream,
                                       double horizon);

// First event time the trajectory from eta0 equals the ground state;
// nullopt if unseen within the horizon. Returns 0 when eta0 is already there.
std::optional<double> hitting_time_ground(const Configuration& eta0, const Environment& env,
                                          const EventStream& stream, double horizon);

// Window evolution for dynamics on the integers restricted to a finite
// window, for initial conditions that are empty left of the window and fully
// occupied right of it. Boundary rings are no-ops; the run is flagged once a
// particle reaches the left edge or a hole reaches the right edge, after
// which the window no longer determines the infinite-volume trajectory.
struct WindowRun {
    Configuration config;
    bool boundary_touched = false;
};

WindowRun evolve_window(const Configuration& eta0, const Environment& env,
                        const EventStream& stream, double t);

// First event time the window trajectory equals `target`, with the same
// boundary flag semantics. hit is nullopt if unseen within the horizon.
struct WindowHit {
    std::optional<double> hit;
    bool boundary_touched = false;
};

WindowHit window_hitting_time(const Configuration& eta0, const Configuration& target,
                              const Environment& env, const EventStream& stream,
                              double horizon);

// Leftmost-particle position sampled at the given (ascending) times along a
// single censored or uncensored trajectory.
std::vector<long long> leftmost_at_times(const Configuration& eta0, const Environment& env,
                                         const EventStream& stream,
                                         const CensoringScheme* scheme,
                                         const std::vector<double>& times);

}  // namespace sep
