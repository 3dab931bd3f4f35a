#pragma once

#include <cstdint>
#include <vector>

#include "evdepth/types.hpp"

namespace evdepth {

// Slices a stream into contiguous half-open windows [t0 + k*dt, t0 + (k+1)*dt)
// anchored at the first event's timestamp. Windows tile the full span, so
// interior windows with no events are still emitted; the trailing window is
// flagged partial when the data ends before its nominal end. Every event lands
// in exactly one window. The returned windows reference the stream's storage.
std::vector<EventWindow> window_events(const EventStream& stream,
                                       std::uint64_t dt);

// True wherever at least one event fired inside the window.
ValidMask event_mask(const EventWindow& window);

}  // namespace evdepth
