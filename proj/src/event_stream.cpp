#include "sep/event_stream.hpp"

#include <stdexcept>

namespace sep {

EventStream build_event_stream(long long site_lo, long long site_hi, double horizon,
                               uint64_t seed) {
    if (site_hi < site_lo) throw std::invalid_argument("event stream window is empty");
    if (!(horizon > 0.0)) throw std::invalid_argument("event stream horizon must be positive");
    EventStream s;
    s.seed = seed;
    s.site_lo = site_lo;
    s.site_hi = site_hi;
    s.horizon = horizon;
    return s;
}

EventCursor::EventCursor(const EventStream& stream)
    : rng_(subseed(stream.seed, /*tag=*/0x7374726d)),
      lo_(stream.site_lo),
      span_(stream.site_hi - stream.site_lo + 1),
      rate_(2.0 * static_cast<double>(stream.site_hi - stream.site_lo + 1)),
      horizon_(stream.horizon) {}

void EventCursor::draw() {
    pending_time_ = time_ + rng_.exponential(rate_);
    pending_site_ = lo_ + static_cast<long long>(rng_.below(static_cast<uint64_t>(span_)));
    pending_head_ = rng_.coin();
    pending_u_ = rng_.uniform01();
    pending_ = true;
}

double EventCursor::peek_time() {
    if (!pending_) draw();
    return pending_time_;
}

bool EventCursor::next(SiteEvent& out, double t_max) {
    if (!pending_) draw();
    double cap = t_max < horizon_ ? t_max : horizon_;
    if (pending_time_ > cap) return false;
    out.time = pending_time_;
    out.site = pending_site_;
    out.head = pending_head_;
    out.u = pending_u_;
    time_ = pending_time_;
    pending_ = false;
    return true;
}

}  // namespace sep
