#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace evdepth {

// One sensor activation. Coordinates are 0-based and must lie inside the
// owning stream's geometry; polarity is exactly +1 or -1.
struct Event {
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::uint64_t t = 0;  // microseconds
    std::int8_t p = 1;    // +1 or -1
};

inline bool operator==(const Event& a, const Event& b) {
    return a.x == b.x && a.y == b.y && a.t == b.t && a.p == b.p;
}

// Events sorted nondecreasing in t, all coordinates inside width x height.
// Geometry is declared, never inferred from data.
struct EventStream {
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::vector<Event> events;

    [[nodiscard]] std::size_t size() const { return events.size(); }
    [[nodiscard]] bool empty() const { return events.empty(); }
};

// A half-open slice [t0, t0 + dt) of a parent stream. `events` points into
// the parent's storage; the window is only valid while the stream lives.
struct EventWindow {
    std::uint64_t t0 = 0;
    std::uint64_t dt = 0;
    std::span<const Event> events;
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    bool partial = false;  // trailing window whose span exceeds the data
};

// H x W boolean plane stored as bytes (0 or 1), row-major.
struct ValidMask {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> data;

    ValidMask() = default;
    ValidMask(std::size_t h, std::size_t w)
        : height(h), width(w), data(h * w, 0) {}

    [[nodiscard]] std::size_t size() const { return data.size(); }
    std::uint8_t& at(std::size_t y, std::size_t x) { return data[y * width + x]; }
    [[nodiscard]] std::uint8_t at(std::size_t y, std::size_t x) const {
        return data[y * width + x];
    }
    [[nodiscard]] std::size_t count() const {
        std::size_t n = 0;
        for (auto v : data) n += (v != 0);
        return n;
    }
};

// Per-pixel metric depth in meters, row-major. Zero marks an invalid pixel;
// valid depths are strictly positive.
struct DepthMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> values;

    DepthMap() = default;
    DepthMap(std::size_t h, std::size_t w)
        : height(h), width(w), values(h * w, 0.0) {}

    [[nodiscard]] std::size_t size() const { return values.size(); }
    double& at(std::size_t y, std::size_t x) { return values[y * width + x]; }
    [[nodiscard]] double at(std::size_t y, std::size_t x) const {
        return values[y * width + x];
    }
};

}  // namespace evdepth
