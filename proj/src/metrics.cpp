#include "evdepth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "evdepth/errors.hpp"
#include "evdepth/par.hpp"

namespace evdepth {

namespace {

void check_shapes(const DepthMap& gt, const DepthMap& pred,
                  const ValidMask& mask) {
    if (gt.height != pred.height || gt.width != pred.width ||
        gt.height != mask.height || gt.width != mask.width)
        throw InvalidParams("gt/pred/mask shapes disagree");
}

// Count + sum of a per-pixel term over {mask set AND gt > 0}.
template <typename F>
std::pair<double, double> masked_sum(const DepthMap& gt, const ValidMask& mask,
                                     F&& term) {
    const std::size_t n = gt.size();
    auto included = [&](std::size_t i) {
        return mask.data[i] != 0 && gt.values[i] > 0.0;
    };
    const double count =
        par::block_sum(n, [&](std::size_t i) { return included(i) ? 1.0 : 0.0; });
    const double sum =
        par::block_sum(n, [&](std::size_t i) { return included(i) ? term(i) : 0.0; });
    return {count, sum};
}

// keep(j) = ceil((1 - j/F) * n), computed in exact integer arithmetic.
std::size_t kept_count(std::size_t n, std::size_t j, std::size_t f) {
    return (n * (f - j) + f - 1) / f;
}

}  // namespace

double absrel(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask) {
    check_shapes(gt, pred, mask);
    auto [count, sum] = masked_sum(gt, mask, [&](std::size_t i) {
        return std::abs(gt.values[i] - pred.values[i]) / gt.values[i];
    });
    if (count == 0.0) throw NoValidPixels("absrel");
    return sum / count;
}

double rmse(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask) {
    check_shapes(gt, pred, mask);
    auto [count, sum] = masked_sum(gt, mask, [&](std::size_t i) {
        const double d = gt.values[i] - pred.values[i];
        return d * d;
    });
    if (count == 0.0) throw NoValidPixels("rmse");
    return std::sqrt(sum / count);
}

double mae(const DepthMap& gt, const DepthMap& pred, const ValidMask& mask) {
    check_shapes(gt, pred, mask);
    auto [count, sum] = masked_sum(gt, mask, [&](std::size_t i) {
        return std::abs(gt.values[i] - pred.values[i]);
    });
    if (count == 0.0) throw NoValidPixels("mae");
    return sum / count;
}

SparsificationCurve sparsification(std::span<const double> errors,
                                   std::span<const double> uncertainty,
                                   std::size_t fraction_count) {
    const std::size_t n = errors.size();
    if (n < 2 || uncertainty.size() != n)
        throw InvalidParams("sparsification needs >= 2 matched pixels");
    if (fraction_count < 2)
        throw InvalidParams("fraction count must be >= 2");

    double total = 0.0;
    for (double e : errors) total += e;
    if (total == 0.0) throw ZeroTotalError();
    const double full_mae = total / static_cast<double>(n);

    // Ascending order with stable index tie-break, for both rankings.
    std::vector<std::uint32_t> by_unc(n), by_err(n);
    std::iota(by_unc.begin(), by_unc.end(), 0);
    by_err = by_unc;
    std::sort(by_unc.begin(), by_unc.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (uncertainty[a] != uncertainty[b]) return uncertainty[a] < uncertainty[b];
        return a < b;
    });
    std::sort(by_err.begin(), by_err.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (errors[a] != errors[b]) return errors[a] < errors[b];
        return a < b;
    });

    // Prefix error sums along each ranking; kept-subset MAE is then O(1)
    // per fraction.
    std::vector<double> prefix_unc(n + 1, 0.0), prefix_err(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix_unc[i + 1] = prefix_unc[i] + errors[by_unc[i]];
        prefix_err[i + 1] = prefix_err[i] + errors[by_err[i]];
    }

    SparsificationCurve curve;
    curve.fractions.resize(fraction_count);
    curve.pred.resize(fraction_count);
    curve.oracle.resize(fraction_count);
    for (std::size_t j = 0; j < fraction_count; ++j) {
        const std::size_t keep = kept_count(n, j, fraction_count);
        const double inv = 1.0 / static_cast<double>(keep);
        curve.fractions[j] =
            static_cast<double>(j) / static_cast<double>(fraction_count);
        curve.pred[j] = prefix_unc[keep] * inv / full_mae;
        curve.oracle[j] = prefix_err[keep] * inv / full_mae;
    }

    double ause = 0.0;
    for (std::size_t j = 0; j + 1 < fraction_count; ++j) {
        const double g0 = curve.pred[j] - curve.oracle[j];
        const double g1 = curve.pred[j + 1] - curve.oracle[j + 1];
        ause += 0.5 * (g0 + g1) * (curve.fractions[j + 1] - curve.fractions[j]);
    }
    curve.ause = ause;
    return curve;
}

ValidMask confidence_mask(std::span<const double> uncertainty, double retain,
                          std::size_t height, std::size_t width) {
    const std::size_t n = uncertainty.size();
    if (n != height * width)
        throw InvalidParams("uncertainty plane does not match mask shape");
    if (!(retain > 0.0 && retain <= 1.0))
        throw OutOfRange("retain fraction must be in (0, 1]");

    const auto keep = static_cast<std::size_t>(
        std::ceil(retain * static_cast<double>(n)));
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (uncertainty[a] != uncertainty[b]) return uncertainty[a] < uncertainty[b];
        return a < b;
    });

    ValidMask mask(height, width);
    for (std::size_t i = 0; i < keep && i < n; ++i) mask.data[idx[i]] = 1;
    return mask;
}

MetricsReport evaluate(const DepthMap& gt, const DepthMap& pred,
                       std::span<const double> uncertainty,
                       const ValidMask& event_mask, double retain,
                       std::size_t fraction_count) {
    check_shapes(gt, pred, event_mask);
    const std::size_t n = gt.size();
    if (uncertainty.size() != n)
        throw InvalidParams("uncertainty plane shape disagrees");

    ValidMask all(gt.height, gt.width);
    std::fill(all.data.begin(), all.data.end(), 1);

    MetricsReport r;
    r.retain = retain;

    try {
        r.absrel = absrel(gt, pred, all);
        r.rmse = rmse(gt, pred, all);
        r.mae = mae(gt, pred, all);
    } catch (const NoValidPixels&) {
        throw NoValidPixels("all");
    }

    // AUSE over the valid pixels. A perfect prediction has no curve to
    // integrate; its ranking is vacuously perfect, so report 0.
    std::vector<double> err_v, unc_v;
    err_v.reserve(n);
    unc_v.reserve(n);
    std::size_t count_all = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (gt.values[i] > 0.0) {
            err_v.push_back(std::abs(gt.values[i] - pred.values[i]));
            unc_v.push_back(uncertainty[i]);
            ++count_all;
        }
    }
    r.count_all = count_all;
    try {
        r.ause = sparsification(err_v, unc_v, fraction_count).ause;
    } catch (const ZeroTotalError&) {
        r.ause = 0.0;
    }

    ValidMask m_mask(gt.height, gt.width);
    for (std::size_t i = 0; i < n; ++i) m_mask.data[i] = event_mask.data[i];
    try {
        r.absrel_m = absrel(gt, pred, m_mask);
        r.rmse_m = rmse(gt, pred, m_mask);
    } catch (const NoValidPixels&) {
        throw NoValidPixels("M");
    }
    std::size_t count_m = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (m_mask.data[i] && gt.values[i] > 0.0) ++count_m;
    r.count_m = count_m;

    const ValidMask c_mask =
        confidence_mask(uncertainty, retain, gt.height, gt.width);
    try {
        r.absrel_c = absrel(gt, pred, c_mask);
        r.rmse_c = rmse(gt, pred, c_mask);
    } catch (const NoValidPixels&) {
        throw NoValidPixels("C");
    }
    std::size_t count_c = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (c_mask.data[i] && gt.values[i] > 0.0) ++count_c;
    r.count_c = count_c;

    return r;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string report_to_text(const MetricsReport& r) {
    std::string out;
    out += "absrel=" + fmt(r.absrel) + "\n";
    out += "rmse=" + fmt(r.rmse) + "\n";
    out += "mae=" + fmt(r.mae) + "\n";
    out += "ause=" + fmt(r.ause) + "\n";
    out += "absrel_m=" + fmt(r.absrel_m) + "\n";
    out += "rmse_m=" + fmt(r.rmse_m) + "\n";
    out += "absrel_c=" + fmt(r.absrel_c) + "\n";
    out += "rmse_c=" + fmt(r.rmse_c) + "\n";
    out += "retain=" + fmt(r.retain) + "\n";
    out += "count_all=" + std::to_string(r.count_all) + "\n";
    out += "count_m=" + std::to_string(r.count_m) + "\n";
    out += "count_c=" + std::to_string(r.count_c) + "\n";
    return out;
}

std::string report_to_csv(const MetricsReport& r) {
    std::string out = "absrel,rmse,ause,absrel_m,rmse_m,absrel_c,rmse_c\n";
    out += fmt(r.absrel) + "," + fmt(r.rmse) + "," + fmt(r.ause) + "," +
           fmt(r.absrel_m) + "," + fmt(r.rmse_m) + "," + fmt(r.absrel_c) +
           "," + fmt(r.rmse_c) + "\n";
    return out;
}

std::string curve_to_csv(const SparsificationCurve& c) {
    std::string out = "alpha,pred,oracle\n";
    for (std::size_t j = 0; j < c.fractions.size(); ++j)
        out += fmt(c.fractions[j]) + "," + fmt(c.pred[j]) + "," +
               fmt(c.oracle[j]) + "\n";
    return out;
}

}  // namespace evdepth
