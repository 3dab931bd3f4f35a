#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evdepth/types.hpp"

namespace evdepth {

enum class SceneKind { TranslatingTexture, ApproachingPlane };

SceneKind scene_from_name(const std::string& name);
std::string scene_name(SceneKind kind);

// One rendered instant: log intensity (natural log units) plus metric depth,
// both H x W row-major. The generator never emits the zero-invalid code.
struct SceneFrame {
    std::size_t height = 0;
    std::size_t width = 0;
    std::uint64_t t = 0;  // microseconds
    std::vector<double> log_intensity;
    std::vector<double> depth;
};

struct GenConfig {
    double threshold = 0.25;  // log-intensity firing threshold C, > 0
    std::uint64_t seed = 0;
    SceneKind scene = SceneKind::TranslatingTexture;
    double frame_rate = 100.0;  // Hz
    double duration = 1.0;      // seconds
    std::uint16_t width = 64;
    std::uint16_t height = 48;
    std::uint64_t jitter_us = 0;     // optional per-event timestamp jitter
    std::int64_t velocity_px = 2;    // texture shift per frame (translating)

    [[nodiscard]] std::size_t frame_count() const;
};

// Deterministic in (cfg, index). The translating texture is periodic in x,
// so frame k is an exact cyclic shift of frame 0 by velocity_px * k pixels;
// its depth is a fixed slanted plane. The approaching plane keeps a static
// texture while depth decreases linearly in time.
SceneFrame render_scene(const GenConfig& cfg, std::size_t frame_index);

// Idealized brightness-threshold sensor: per pixel a reference level starts
// at the first frame's log intensity; whenever the linearly interpolated
// log intensity moves a full threshold C away from the reference, an event
// with the sign of the change fires at the interpolated crossing time and
// the reference steps by p*C. Output is sorted by timestamp, ties keeping
// pixel order (row-major) then per-pixel chronology.
EventStream generate_events(const std::vector<SceneFrame>& frames,
                            double threshold, std::uint64_t jitter_us = 0,
                            std::uint64_t jitter_seed = 0);

// Depth of the nearest frame at or before t_query (no value interpolation).
DepthMap ground_truth_at(const std::vector<SceneFrame>& frames,
                         std::uint64_t t_query);

// Renders all frames for a config.
std::vector<SceneFrame> render_all(const GenConfig& cfg);

}  // namespace evdepth
