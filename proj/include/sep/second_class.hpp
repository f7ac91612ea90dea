#pragma once

#include <cstdint>
#include <vector>

#include "sep/configuration.hpp"
#include "sep/environment.hpp"
#include "sep/event_stream.hpp"

namespace sep {

// Configuration with first-class particles (1), second-class particles (2)
// and holes (0) on a window. Priorities for swaps: 1 > 2 > 0.
class ThreeSpecies {
  public:
    ThreeSpecies() = default;
    ThreeSpecies(std::vector<uint8_t> values, long long first_site = 1);

    long long size() const { return static_cast<long long>(vals_.size()); }
    long long first_site() const { return first_; }
    long long last_site() const { return first_ + size() - 1; }

    uint8_t at(long long site) const { return vals_[static_cast<size_t>(site - first_)]; }
    void set(long long site, uint8_t v);

    const std::vector<uint8_t>& values() const { return vals_; }
    uint8_t* data() { return vals_.data(); }

    bool operator==(const ThreeSpecies& other) const = default;

  private:
    std::vector<uint8_t> vals_;
    long long first_ = 1;
};

// Canonical-coupling dynamics with priorities: a HEAD ring at x swaps (x,x+1)
// iff u <= omega(x) and x outranks x+1; a TAIL ring at x swaps (x-1,x) iff
// u > omega(x) and x outranks x-1. Equal values never swap. Boundary rings
// pointing outward are no-ops; the run is flagged if a first-class particle
// ever sits on a window edge (the window then no longer determines the
// infinite-volume trajectory).
struct ThreeSpeciesRun {
    ThreeSpecies config;
    bool one_touched_boundary = false;
};

ThreeSpeciesRun evolve_second_class(const ThreeSpecies& xi0, const Environment& env,
                                    const EventStream& stream, double t);

bool apply_event_second_class(ThreeSpecies& xi, const Environment& env, const SiteEvent& ev);

// Particle blindness: both particle classes become particles.
Configuration project_seconds_as_particles(const ThreeSpecies& xi);

// Second-class/hole blindness: second-class particles become holes.
Configuration project_seconds_as_holes(const ThreeSpecies& xi);

// The process seen on non-first-class sites: delete every 1-site, enumerate
// the remaining sites in increasing order anchored so that index 0 is the
// leftmost 2 at a site <= 0, or the leftmost 2 right of 0 if there is none.
// The result marks which retained sites hold second-class particles.
// Throws if the window holds no 2 at all.
Configuration project_second_frame(const ThreeSpecies& xi);

}  // namespace sep
