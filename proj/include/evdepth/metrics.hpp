#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "evdepth/types.hpp"

namespace evdepth {

// Mean |y - yhat| / y over pixels with mask set AND gt > 0.
double absrel(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask);
double rmse(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask);
double mae(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask);

// Sparsification data: at each fraction alpha_j = j / F the highest-
// uncertainty (predicted) or highest-error (oracle) share of pixels is
// removed and the MAE of the kept ceil((1-alpha) n) pixels is recorded,
// normalized by the full MAE. `ause` is the trapezoidal integral of
// (pred - oracle) over the sampled fractions.
struct SparsificationCurve {
    std::vector<double> fractions;
    std::vector<double> pred;    // Err_pred(alpha) / Err
    std::vector<double> oracle;  // Err_oracle(alpha) / Err
    double ause = 0.0;
};

// errors[i] = |y_i - yhat_i|; uncertainty is any per-pixel ranking scalar.
// Sorting is ascending with ties broken by original index. Requires >= 2
// pixels and a nonzero total error.
SparsificationCurve sparsification(std::span<const double> errors,
                                   std::span<const double> uncertainty,
                                   std::size_t fraction_count = 100);

// Selects the ceil(retain * n) pixels of lowest uncertainty (stable
// tie-break by index) as an H x W mask shaped like `shape_like`.
ValidMask confidence_mask(std::span<const double> uncertainty,
                          double retain, std::size_t height,
                          std::size_t width);

struct MetricsReport {
    double absrel = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double ause = 0.0;
    double absrel_m = 0.0;
    double rmse_m = 0.0;
    double absrel_c = 0.0;
    double rmse_c = 0.0;
    double retain = 0.0;
    std::size_t count_all = 0;
    std::size_t count_m = 0;
    std::size_t count_c = 0;
};

// Full protocol: all / event-masked (M) / lowest-uncertainty (C) subsets of
// AbsRel and RMSE plus AUSE, with zero-depth masking applied everywhere.
// The C subset is chosen over the whole uncertainty plane before the
// validity mask is applied. pred==gt yields a report with ause = 0 (the
// curve is undefined but the ranking is vacuously perfect).
MetricsReport evaluate(const DepthMap& gt, const DepthMap& pred,
                       std::span<const double> uncertainty,
                       const ValidMask& event_mask, double retain,
                       std::size_t fraction_count = 100);

// Plain-text key=value lines.
std::string report_to_text(const MetricsReport& r);
// CSV header + row in table column order:
// absrel,rmse,ause,absrel_m,rmse_m,absrel_c,rmse_c
std::string report_to_csv(const MetricsReport& r);
// CSV "alpha,pred,oracle" rows for curve plotting.
std::string curve_to_csv(const SparsificationCurve& c);

}  // namespace evdepth
