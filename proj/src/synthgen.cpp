#include "evdepth/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "evdepth/errors.hpp"
#include "evdepth/par.hpp"

namespace evdepth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Texture spectrum drawn once from the seed; frames only move it.
struct TextureParams {
    int kx1, ky1, kx2, ky2;
    double phase1, phase2, phase3;
    double amp1, amp2, amp3;
};

TextureParams texture_params(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> kx(1, 4);
    std::uniform_int_distribution<int> ky(1, 3);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    TextureParams t;
    t.kx1 = kx(rng);
    t.ky1 = ky(rng);
    t.kx2 = kx(rng);
    t.ky2 = ky(rng);
    t.phase1 = phase(rng);
    t.phase2 = phase(rng);
    t.phase3 = phase(rng);
    t.amp1 = std::uniform_real_distribution<double>(0.4, 0.8)(rng);
    t.amp2 = std::uniform_real_distribution<double>(0.2, 0.5)(rng);
    t.amp3 = std::uniform_real_distribution<double>(0.1, 0.3)(rng);
    return t;
}

// Periodic in x with period W, so integer shifts wrap exactly.
double texture_at(const TextureParams& t, std::size_t x, std::size_t y,
                  std::size_t w, std::size_t h) {
    const double fx = static_cast<double>(x) / static_cast<double>(w);
    const double fy = static_cast<double>(y) / static_cast<double>(h);
    return t.amp1 * std::sin(kTwoPi * (t.kx1 * fx + t.ky1 * fy) + t.phase1) +
           t.amp2 * std::cos(kTwoPi * t.kx2 * fx + t.phase2) +
           t.amp3 * std::sin(kTwoPi * t.ky2 * fy + t.phase3);
}

double plane_depth(const GenConfig& cfg, std::size_t x, std::size_t y) {
    const double gx = 1.0 / std::max<std::size_t>(cfg.width - 1, 1);
    const double gy = 2.0 / std::max<std::size_t>(cfg.height - 1, 1);
    return 2.0 + gx * static_cast<double>(x) + gy * static_cast<double>(y);
}

void validate(const GenConfig& cfg) {
    if (!(cfg.threshold > 0.0))
        throw InvalidParams("threshold must be > 0");
    if (!(cfg.frame_rate > 0.0) || cfg.frame_rate > 1e6)
        throw InvalidParams("frame rate must be in (0, 1e6] Hz");
    if (cfg.width == 0 || cfg.height == 0)
        throw InvalidParams("geometry must be nonzero");
    if (cfg.frame_count() < 2)
        throw InvalidParams("frame rate x duration must give >= 2 frames");
}

std::uint64_t frame_time_us(const GenConfig& cfg, std::size_t index) {
    return static_cast<std::uint64_t>(
        std::llround(static_cast<double>(index) * 1e6 / cfg.frame_rate));
}

}  // namespace

SceneKind scene_from_name(const std::string& name) {
    if (name == "translating-texture") return SceneKind::TranslatingTexture;
    if (name == "approaching-plane") return SceneKind::ApproachingPlane;
    throw OutOfRange("unknown scene: " + name);
}

std::string scene_name(SceneKind kind) {
    return kind == SceneKind::TranslatingTexture ? "translating-texture"
                                                 : "approaching-plane";
}

std::size_t GenConfig::frame_count() const {
    return static_cast<std::size_t>(std::llround(frame_rate * duration));
}

SceneFrame render_scene(const GenConfig& cfg, std::size_t frame_index) {
    validate(cfg);
    const std::size_t count = cfg.frame_count();
    if (frame_index >= count) throw IndexOutOfRange(frame_index, count);

    const std::size_t w = cfg.width, h = cfg.height;
    SceneFrame frame;
    frame.height = h;
    frame.width = w;
    frame.t = frame_time_us(cfg, frame_index);
    frame.log_intensity.resize(h * w);
    frame.depth.resize(h * w);

    const TextureParams tex = texture_params(cfg.seed);
    const double t_sec = static_cast<double>(frame.t) * 1e-6;

    if (cfg.scene == SceneKind::TranslatingTexture) {
        const std::int64_t shift =
            cfg.velocity_px * static_cast<std::int64_t>(frame_index);
        par::parallel_for(h * w, [&](std::size_t i) {
            const std::size_t y = i / w, x = i % w;
            const std::int64_t sw = static_cast<std::int64_t>(w);
            std::int64_t sx = (static_cast<std::int64_t>(x) - shift) % sw;
            if (sx < 0) sx += sw;
            frame.log_intensity[i] =
                texture_at(tex, static_cast<std::size_t>(sx), y, w, h);
            frame.depth[i] = plane_depth(cfg, x, y);
        });
    } else {
        const double drop = 3.0 * t_sec / cfg.duration;
        par::parallel_for(h * w, [&](std::size_t i) {
            const std::size_t y = i / w, x = i % w;
            frame.log_intensity[i] = texture_at(tex, x, y, w, h);
            frame.depth[i] = std::max(0.5, plane_depth(cfg, x, y) + 3.0 - drop);
        });
    }
    return frame;
}

std::vector<SceneFrame> render_all(const GenConfig& cfg) {
    validate(cfg);
    std::vector<SceneFrame> frames;
    frames.reserve(cfg.frame_count());
    for (std::size_t i = 0; i < cfg.frame_count(); ++i)
        frames.push_back(render_scene(cfg, i));
    return frames;
}

EventStream generate_events(const std::vector<SceneFrame>& frames,
                            double threshold, std::uint64_t jitter_us,
                            std::uint64_t jitter_seed) {
    if (frames.size() < 2)
        throw InvalidParams("event generation needs >= 2 frames");
    if (!(threshold > 0.0)) throw InvalidParams("threshold must be > 0");
    const std::size_t h = frames[0].height, w = frames[0].width;
    for (std::size_t j = 1; j < frames.size(); ++j) {
        if (frames[j].height != h || frames[j].width != w)
            throw InvalidParams("frame shapes disagree");
        if (frames[j].t <= frames[j - 1].t) throw NonMonotonicFrames();
    }

    struct Fired {
        std::uint64_t t;
        std::int8_t p;
    };
    std::vector<std::vector<Fired>> per_pixel(h * w);

    par::parallel_for(h * w, [&](std::size_t pix) {
        double ref = frames[0].log_intensity[pix];
        auto& out = per_pixel[pix];
        for (std::size_t j = 1; j < frames.size(); ++j) {
            const double la = frames[j - 1].log_intensity[pix];
            const double lb = frames[j].log_intensity[pix];
            const std::uint64_t ta = frames[j - 1].t;
            const std::uint64_t tb = frames[j].t;
            // Fire every full-threshold crossing along the linear segment;
            // the loop invariant |la - ref| < C keeps fractions in (0, 1].
            while (true) {
                const double diff = lb - ref;
                if (std::abs(diff) < threshold) break;
                const std::int8_t p = diff > 0.0 ? 1 : -1;
                const double level = ref + p * threshold;
                const double frac = (level - la) / (lb - la);
                const auto dt = static_cast<double>(tb - ta);
                std::uint64_t t = ta + static_cast<std::uint64_t>(frac * dt);
                if (t > tb) t = tb;
                out.push_back({t, p});
                ref = level;
            }
        }
    });

    EventStream stream;
    stream.width = static_cast<std::uint16_t>(w);
    stream.height = static_cast<std::uint16_t>(h);
    std::size_t total = 0;
    for (const auto& v : per_pixel) total += v.size();
    stream.events.reserve(total);
    for (std::size_t pix = 0; pix < per_pixel.size(); ++pix) {
        const auto x = static_cast<std::uint16_t>(pix % w);
        const auto y = static_cast<std::uint16_t>(pix / w);
        for (const Fired& f : per_pixel[pix])
            stream.events.push_back({x, y, f.t, f.p});
    }

    if (jitter_us > 0) {
        std::mt19937_64 rng(jitter_seed);
        std::uniform_int_distribution<std::int64_t> jit(
            -static_cast<std::int64_t>(jitter_us),
            static_cast<std::int64_t>(jitter_us));
        for (Event& e : stream.events) {
            const std::int64_t t =
                static_cast<std::int64_t>(e.t) + jit(rng);
            e.t = t < 0 ? 0 : static_cast<std::uint64_t>(t);
        }
    }

    std::stable_sort(
        stream.events.begin(), stream.events.end(),
        [](const Event& a, const Event& b) { return a.t < b.t; });
    return stream;
}

DepthMap ground_truth_at(const std::vector<SceneFrame>& frames,
                         std::uint64_t t_query) {
    if (frames.empty()) throw OutOfSpan("no frames");
    if (t_query < frames.front().t || t_query > frames.back().t)
        throw OutOfSpan("t=" + std::to_string(t_query));

    std::size_t lo = 0;
    for (std::size_t j = 0; j < frames.size() && frames[j].t <= t_query; ++j)
        lo = j;
    const SceneFrame& f = frames[lo];
    DepthMap d(f.height, f.width);
    d.values = f.depth;
    return d;
}

}  // namespace evdepth
