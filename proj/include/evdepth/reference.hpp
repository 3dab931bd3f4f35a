#pragma once

// Serial reference implementations written straight from the definitions,
// independent of the optimized kernels. Tests compare kernels against these;
// the benchmark target measures the gap. Not linked into the CLI.

#include <cstdint>
#include <span>
#include <vector>

#include "evdepth/metrics.hpp"
#include "evdepth/representations.hpp"
#include "evdepth/tensor.hpp"
#include "evdepth/types.hpp"
#include "evdepth/uncertainty.hpp"

namespace evdepth::ref {

// Direct triple loop over (bin, pixel, event).
RepTensor build_voxel_grid(const EventWindow& window, std::size_t bins);

// Per-pixel scans of the whole event list.
RepTensor build_cstr(const EventWindow& window);
RepTensor build_tore(const EventStream& stream, std::uint64_t t_query,
                     const ToreConfig& cfg);

NormalizeResult normalize_nonzero(const RepTensor& t);
RepTensor downsample(const RepTensor& t, std::size_t factor,
                     DownsampleMode mode);

double absrel(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask);
double rmse(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask);
double mae(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask);

// Evaluates every fraction by materializing the kept subset and recomputing
// its MAE from scratch.
SparsificationCurve sparsification(std::span<const double> errors,
                                   std::span<const double> uncertainty,
                                   std::size_t fraction_count);

MetricsReport evaluate(const DepthMap& gt, const DepthMap& pred,
                       std::span<const double> uncertainty,
                       const ValidMask& event_mask, double retain,
                       std::size_t fraction_count = 100);

LossReport batch_loss(const UncertaintyField& field, const DepthMap& gt,
                      const ValidMask& valid, double lambda);

// Threshold sensor simulated on a fine time grid instead of analytic
// crossing times; `substeps` intensity samples per frame interval.
EventStream generate_events_stepped(const std::vector<SceneFrame>& frames,
                                    double threshold, std::size_t substeps);

}  // namespace evdepth::ref
