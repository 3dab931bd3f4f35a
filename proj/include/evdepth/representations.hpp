#pragma once

#include <cstdint>

#include "evdepth/tensor.hpp"
#include "evdepth/types.hpp"

namespace evdepth {

// Per-pixel/polarity history depth K with log-age clipping horizons, both in
// microseconds. Defaults: K=3, tau=5e4 us, tau'=150 us.
struct ToreConfig {
    std::size_t k = 3;
    std::uint64_t tau = 50000;
    std::uint64_t tau_prime = 150;
};

// B x H x W signed event count with triangular temporal weighting:
// each event at normalized time t* = (B-1)(t - t0)/dt contributes
// max(0, 1 - |b - t*|) * p to bin b at its pixel. Per-pixel accumulation
// follows event order, so the result is bit-identical across thread counts.
RepTensor build_voxel_grid(const EventWindow& window, std::size_t bins);

// 3 x H x W: channel 0 = mean normalized timestamp of positive events,
// channel 1 = per-pixel event count normalized by the per-window maximum,
// channel 2 = mean normalized timestamp of negative events.
// An empty window yields an all-zero tensor.
RepTensor build_cstr(const EventWindow& window);

// 2K x H x W log-ages of the K most recent events per pixel and polarity at
// t_query, clipped to [log tau', log tau]. Channels 0..K-1 are positive
// polarity (most recent first), K..2K-1 negative. Pixels with fewer than K
// events fill the remaining slots with log(tau).
RepTensor build_tore(const EventStream& stream, std::uint64_t t_query,
                     const ToreConfig& cfg);

enum class NormalizeStatus { Ok, AllZero, ZeroVariance };
enum class NormalizeScope { PerTensor, PerChannel };

struct NormalizeResult {
    RepTensor tensor;
    NormalizeStatus status = NormalizeStatus::Ok;
};

// Shifts/scales the nonzero entries to zero mean and unit population
// variance; exact zeros are preserved. All-zero input is returned unchanged
// (flagged); if all nonzeros are equal only the mean is subtracted.
NormalizeResult normalize_nonzero(const RepTensor& t,
                                  NormalizeScope scope = NormalizeScope::PerTensor);

enum class DownsampleMode { Nearest, Bilinear, MinPool };

// Integer-factor block downsampling. Nearest picks the top-left sample of
// each block, minpool the block minimum, bilinear the uniform block average.
// H and W must be divisible by the factor.
RepTensor downsample(const RepTensor& t, std::size_t factor,
                     DownsampleMode mode);

// Reverses column order per channel; an involution.
RepTensor hflip(const RepTensor& t);

}  // namespace evdepth
