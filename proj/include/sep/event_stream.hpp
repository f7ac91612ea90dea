#pragma once

#include <cstdint>
#include <limits>

#include "sep/rng.hpp"

namespace sep {

// One tick of a site's rate-2 clock: a fair coin (head = try to push the
// particle at `site` one step right, tail = pull it one step left) and an
// independent uniform mark deciding against the site's rate.
struct SiteEvent {
    double time = 0.0;
    long long site = 0;
    bool head = false;
    double u = 0.0;
};

// All site clocks over the window [site_lo, site_hi]. Realized as the
// superposition of the per-site rate-2 Poisson clocks: a single rate
// 2*(site_hi - site_lo + 1) clock whose ticks carry a uniform site mark.
// Identical in law to independent per-site clocks and O(1) per event.
struct EventStream {
    uint64_t seed = 0;
    long long site_lo = 1;
    long long site_hi = 1;
    double horizon = std::numeric_limits<double>::infinity();
};

EventStream build_event_stream(long long site_lo, long long site_hi, double horizon,
                               uint64_t seed);

// Replayable cursor over a stream. Draw order per event is fixed (waiting
// time, site, coin, mark), so two cursors over the same stream yield the
// same sequence; that sharing is what every coupling here rests on.
class EventCursor {
public:
    explicit EventCursor(const EventStream& stream);

    // Advances to the next event with time <= t_max (and <= the stream
    // horizon). Returns false, consuming nothing, once the next tick would
    // land beyond that.
    bool next(SiteEvent& out, double t_max);

    // Time of the upcoming tick without consuming it.
    double peek_time();

    double now() const { return pending_ ? pending_time_ : time_; }

private:
    void draw();

    SplitMix64 rng_;
    long long lo_ = 0;
    long long span_ = 1;
    double rate_ = 2.0;
    double horizon_ = 0.0;
    double time_ = 0.0;          // time of the last consumed tick
    bool pending_ = false;       // one undelivered tick buffered
    double pending_time_ = 0.0;
    long long pending_site_ = 0;
    bool pending_head_ = false;
    double pending_u_ = 0.0;
};

}  // namespace sep
