#include "evdepth/representations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evdepth/errors.hpp"
#include "evdepth/par.hpp"

namespace evdepth {

namespace {

// CSR buckets of event indices grouped by pixel, preserving event order
// inside each bucket. The parallel builders iterate pixels independently,
// so per-pixel accumulation order (and the float result) never depends on
// the thread count.
struct PixelBuckets {
    std::vector<std::uint32_t> offsets;  // H*W + 1
    std::vector<std::uint32_t> order;    // event indices grouped by pixel
};

PixelBuckets bucket_by_pixel(std::span<const Event> events, std::size_t height,
                             std::size_t width) {
    const std::size_t n_pixels = height * width;
    PixelBuckets b;
    b.offsets.assign(n_pixels + 1, 0);
    b.order.resize(events.size());
    for (const Event& e : events)
        ++b.offsets[static_cast<std::size_t>(e.y) * width + e.x + 1];
    for (std::size_t i = 0; i < n_pixels; ++i) b.offsets[i + 1] += b.offsets[i];
    std::vector<std::uint32_t> cursor(b.offsets.begin(), b.offsets.end() - 1);
    for (std::uint32_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        b.order[cursor[static_cast<std::size_t>(e.y) * width + e.x]++] = i;
    }
    return b;
}

}  // namespace

RepTensor build_voxel_grid(const EventWindow& window, std::size_t bins) {
    if (bins < 1) throw OutOfRange("voxel bin count must be >= 1");
    if (window.dt == 0) throw ZeroDurationWindow();

    const std::size_t h = window.height, w = window.width;
    RepTensor grid(bins, h, w, TensorKind::Voxel);
    if (window.events.empty()) return grid;

    const PixelBuckets buckets = bucket_by_pixel(window.events, h, w);
    const double scale =
        static_cast<double>(bins - 1) / static_cast<double>(window.dt);
    const std::size_t plane = h * w;

    par::parallel_for(plane, [&](std::size_t pix) {
        for (std::uint32_t s = buckets.offsets[pix]; s < buckets.offsets[pix + 1];
             ++s) {
            const Event& e = window.events[buckets.order[s]];
            const double tstar =
                scale * (static_cast<double>(e.t) - static_cast<double>(window.t0));
            const double b0f = std::floor(tstar);
            const auto b0 = static_cast<std::int64_t>(b0f);
            const double w1 = tstar - b0f;  // weight for bin b0 + 1
            const double w0 = 1.0 - w1;
            if (b0 >= 0 && b0 < static_cast<std::int64_t>(bins))
                grid.data[static_cast<std::size_t>(b0) * plane + pix] += e.p * w0;
            if (w1 != 0.0 && b0 + 1 >= 0 &&
                b0 + 1 < static_cast<std::int64_t>(bins))
                grid.data[static_cast<std::size_t>(b0 + 1) * plane + pix] +=
                    e.p * w1;
        }
    });
    return grid;
}

RepTensor build_cstr(const EventWindow& window) {
    if (window.dt == 0) throw ZeroDurationWindow();

    const std::size_t h = window.height, w = window.width;
    const std::size_t plane = h * w;
    RepTensor out(3, h, w, TensorKind::Cstr);
    if (window.events.empty()) return out;

    const PixelBuckets buckets = bucket_by_pixel(window.events, h, w);
    const double inv_dt = 1.0 / static_cast<double>(window.dt);

    std::vector<double> total_count(plane, 0.0);
    par::parallel_for(plane, [&](std::size_t pix) {
        double count_pos = 0.0, count_neg = 0.0;
        double sum_pos = 0.0, sum_neg = 0.0;
        for (std::uint32_t s = buckets.offsets[pix]; s < buckets.offsets[pix + 1];
             ++s) {
            const Event& e = window.events[buckets.order[s]];
            const double ts =
                (static_cast<double>(e.t) - static_cast<double>(window.t0)) *
                inv_dt;
            if (e.p > 0) {
                count_pos += 1.0;
                sum_pos += ts;
            } else {
                count_neg += 1.0;
                sum_neg += ts;
            }
        }
        if (count_pos > 0.0) out.data[pix] = sum_pos / count_pos;
        if (count_neg > 0.0) out.data[2 * plane + pix] = sum_neg / count_neg;
        total_count[pix] = count_pos + count_neg;
    });

    double max_count = 0.0;
    for (double c : total_count) max_count = std::max(max_count, c);
    if (max_count > 0.0) {
        par::parallel_for(plane, [&](std::size_t pix) {
            out.data[plane + pix] = total_count[pix] / max_count;
        });
    }
    return out;
}

RepTensor build_tore(const EventStream& stream, std::uint64_t t_query,
                     const ToreConfig& cfg) {
    if (cfg.k < 1) throw InvalidParams("TORE K must be >= 1");
    if (cfg.tau_prime == 0 || cfg.tau_prime >= cfg.tau)
        throw InvalidParams("TORE requires 0 < tau' < tau");

    const std::size_t h = stream.height, w = stream.width;
    const std::size_t plane = h * w;
    const std::size_t k = cfg.k;
    const double log_tau = std::log(static_cast<double>(cfg.tau));
    const double log_tau_prime = std::log(static_cast<double>(cfg.tau_prime));

    RepTensor out(2 * k, h, w, TensorKind::Tore);
    std::fill(out.data.begin(), out.data.end(), log_tau);

    // Only events at or before the query instant participate.
    auto it = std::upper_bound(
        stream.events.begin(), stream.events.end(), t_query,
        [](std::uint64_t t, const Event& e) { return t < e.t; });
    const std::span<const Event> used(stream.events.data(),
                                      static_cast<std::size_t>(
                                          it - stream.events.begin()));
    if (used.empty()) return out;

    const PixelBuckets buckets = bucket_by_pixel(used, h, w);

    par::parallel_for(plane, [&](std::size_t pix) {
        std::size_t filled_pos = 0, filled_neg = 0;
        // Walk newest to oldest; slots fill most recent first.
        for (std::uint32_t s = buckets.offsets[pix + 1];
             s > buckets.offsets[pix]; --s) {
            if (filled_pos == k && filled_neg == k) break;
            const Event& e = used[buckets.order[s - 1]];
            const double age = static_cast<double>(t_query - e.t) + 1.0;
            double v = std::log(age);
            v = std::clamp(v, log_tau_prime, log_tau);
            if (e.p > 0) {
                if (filled_pos < k)
                    out.data[filled_pos++ * plane + pix] = v;
            } else {
                if (filled_neg < k)
                    out.data[(k + filled_neg++) * plane + pix] = v;
            }
        }
    });
    return out;
}

namespace {

NormalizeStatus normalize_span(double* data, std::size_t n) {
    const double count =
        par::block_sum(n, [&](std::size_t i) { return data[i] != 0.0 ? 1.0 : 0.0; });
    if (count == 0.0) return NormalizeStatus::AllZero;
    const double sum =
        par::block_sum(n, [&](std::size_t i) { return data[i] != 0.0 ? data[i] : 0.0; });
    const double mean = sum / count;
    const double sq = par::block_sum(n, [&](std::size_t i) {
        if (data[i] == 0.0) return 0.0;
        const double d = data[i] - mean;
        return d * d;
    });
    const double var = sq / count;
    if (var == 0.0) {
        par::parallel_for(n, [&](std::size_t i) {
            if (data[i] != 0.0) data[i] -= mean;
        });
        return NormalizeStatus::ZeroVariance;
    }
    const double inv_std = 1.0 / std::sqrt(var);
    par::parallel_for(n, [&](std::size_t i) {
        if (data[i] != 0.0) data[i] = (data[i] - mean) * inv_std;
    });
    return NormalizeStatus::Ok;
}

}  // namespace

NormalizeResult normalize_nonzero(const RepTensor& t, NormalizeScope scope) {
    NormalizeResult r{t, NormalizeStatus::Ok};
    if (scope == NormalizeScope::PerTensor) {
        r.status = normalize_span(r.tensor.data.data(), r.tensor.size());
        return r;
    }
    // Per channel: each channel normalized independently; report the
    // strongest degeneracy that applies to every channel.
    bool all_zero = true, any_zero_var = false;
    for (std::size_t c = 0; c < t.channels; ++c) {
        const NormalizeStatus s =
            normalize_span(r.tensor.data.data() + c * t.plane(), t.plane());
        if (s != NormalizeStatus::AllZero) all_zero = false;
        if (s == NormalizeStatus::ZeroVariance) any_zero_var = true;
    }
    if (all_zero)
        r.status = NormalizeStatus::AllZero;
    else if (any_zero_var)
        r.status = NormalizeStatus::ZeroVariance;
    return r;
}

RepTensor downsample(const RepTensor& t, std::size_t factor,
                     DownsampleMode mode) {
    if (factor < 2) throw OutOfRange("downsample factor must be >= 2");
    if (t.height % factor != 0 || t.width % factor != 0)
        throw NonDivisibleShape(t.height, t.width, factor);

    const std::size_t oh = t.height / factor, ow = t.width / factor;
    RepTensor out(t.channels, oh, ow, t.kind);
    const double inv_area = 1.0 / (static_cast<double>(factor) * factor);

    par::parallel_for(t.channels * oh * ow, [&](std::size_t idx) {
        const std::size_t c = idx / (oh * ow);
        const std::size_t rem = idx % (oh * ow);
        const std::size_t oy = rem / ow;
        const std::size_t ox = rem % ow;
        const std::size_t iy = oy * factor, ix = ox * factor;
        switch (mode) {
            case DownsampleMode::Nearest:
                out.data[idx] = t.at(c, iy, ix);
                break;
            case DownsampleMode::MinPool: {
                double m = std::numeric_limits<double>::infinity();
                for (std::size_t dy = 0; dy < factor; ++dy)
                    for (std::size_t dx = 0; dx < factor; ++dx)
                        m = std::min(m, t.at(c, iy + dy, ix + dx));
                out.data[idx] = m;
                break;
            }
            case DownsampleMode::Bilinear: {
                double s = 0.0;
                for (std::size_t dy = 0; dy < factor; ++dy)
                    for (std::size_t dx = 0; dx < factor; ++dx)
                        s += t.at(c, iy + dy, ix + dx);
                out.data[idx] = s * inv_area;
                break;
            }
        }
    });
    return out;
}

RepTensor hflip(const RepTensor& t) {
    RepTensor out(t.channels, t.height, t.width, t.kind);
    par::parallel_for(t.channels * t.height, [&](std::size_t row) {
        const double* src = t.data.data() + row * t.width;
        double* dst = out.data.data() + row * t.width;
        for (std::size_t x = 0; x < t.width; ++x)
            dst[x] = src[t.width - 1 - x];
    });
    return out;
}

}  // namespace evdepth
