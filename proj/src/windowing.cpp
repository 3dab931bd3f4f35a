#include "evdepth/windowing.hpp"

#include "evdepth/errors.hpp"

namespace evdepth {

std::vector<EventWindow> window_events(const EventStream& stream,
                                       std::uint64_t dt) {
    if (dt == 0) throw ZeroDurationWindow();
    if (stream.empty()) throw EmptyStream();

    const std::uint64_t t_first = stream.events.front().t;
    const std::uint64_t t_last = stream.events.back().t;
    const std::uint64_t count = (t_last - t_first) / dt + 1;

    std::vector<EventWindow> windows;
    windows.reserve(count);
    std::size_t begin = 0;
    for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t t0 = t_first + k * dt;
        const std::uint64_t t_end = t0 + dt;
        std::size_t end = begin;
        while (end < stream.events.size() && stream.events[end].t < t_end) ++end;
        EventWindow w;
        w.t0 = t0;
        w.dt = dt;
        w.width = stream.width;
        w.height = stream.height;
        w.events = std::span<const Event>(stream.events.data() + begin,
                                          end - begin);
        w.partial = (k + 1 == count) && (t_last + 1 < t_end);
        windows.push_back(w);
        begin = end;
    }
    return windows;
}

ValidMask event_mask(const EventWindow& window) {
    ValidMask mask(window.height, window.width);
    for (const Event& e : window.events)
        mask.data[static_cast<std::size_t>(e.y) * window.width + e.x] = 1;
    return mask;
}

}  // namespace evdepth
