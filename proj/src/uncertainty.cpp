#include "evdepth/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "evdepth/errors.hpp"
#include "evdepth/par.hpp"

namespace evdepth {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)

double digamma(double x) {
    // Recurrence into the asymptotic region, then the standard series.
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double inv4 = inv2 * inv2;
    const double inv6 = inv4 * inv2;
    result += std::log(x) - 0.5 * inv - (1.0 / 12.0) * inv2 +
              (1.0 / 120.0) * inv4 - (1.0 / 252.0) * inv6;
    return result;
}

void check_gaussian(const GaussianParams& p) {
    if (!(p.sigma > 0.0)) throw NonPositiveSigma();
}

void check_lognormal(const LogNormalParams& p) {
    if (!(p.sigma > 0.0)) throw NonPositiveSigma();
}

void check_evidential(const EvidentialParams& p) {
    if (!(p.kappa > 0.0)) throw InvalidParams("kappa must be > 0");
    if (!(p.alpha > 1.0)) throw InvalidParams("alpha must be > 1");
    if (!(p.beta > 0.0)) throw InvalidParams("beta must be > 0");
}

}  // namespace

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Gaussian: return "gaussian";
        case ModelKind::LogNormal: return "lognormal";
        case ModelKind::Evidential: return "evidential";
    }
    return "unknown";
}

ModelKind model_from_name(const std::string& name) {
    if (name == "gaussian") return ModelKind::Gaussian;
    if (name == "lognormal") return ModelKind::LogNormal;
    if (name == "evidential") return ModelKind::Evidential;
    throw OutOfRange("unknown model: " + name);
}

double positivity(double raw, double floor) {
    if (raw > 0.0) return floor + raw + std::log1p(std::exp(-raw));
    return floor + std::log1p(std::exp(raw));
}

double positivity_grad(double raw) {
    if (raw > 0.0) return 1.0 / (1.0 + std::exp(-raw));
    const double e = std::exp(raw);
    return e / (1.0 + e);
}

double positivity_inverse(double value, double floor) {
    const double v = value - floor;
    if (!(v > 0.0)) throw OutOfRange("positivity inverse needs value > floor");
    if (v > 20.0) return v + std::log1p(-std::exp(-v));
    return std::log(std::expm1(v));
}

double gaussian_nll(double y, const GaussianParams& p) {
    check_gaussian(p);
    const double r = y - p.mu;
    return std::log(p.sigma) + kHalfLog2Pi +
           r * r / (2.0 * p.sigma * p.sigma);
}

GaussianGrad gaussian_nll_grad(double y, const GaussianParams& p) {
    check_gaussian(p);
    const double r = y - p.mu;
    const double s2 = p.sigma * p.sigma;
    GaussianGrad g;
    g.d_mu = (p.mu - y) / s2;
    g.d_sigma = 1.0 / p.sigma - r * r / (s2 * p.sigma);
    return g;
}

double lognormal_nll(double y, const LogNormalParams& p) {
    check_lognormal(p);
    if (!(y > 0.0)) throw NonPositiveDepth();
    const double ly = std::log(y);
    const double r = ly - p.mu;
    return ly + std::log(p.sigma) + kHalfLog2Pi +
           r * r / (2.0 * p.sigma * p.sigma);
}

LogNormalGrad lognormal_nll_grad(double y, const LogNormalParams& p) {
    check_lognormal(p);
    if (!(y > 0.0)) throw NonPositiveDepth();
    const double r = std::log(y) - p.mu;
    const double s2 = p.sigma * p.sigma;
    LogNormalGrad g;
    g.d_mu = -r / s2;
    g.d_sigma = 1.0 / p.sigma - r * r / (s2 * p.sigma);
    return g;
}

LogNormalMoments lognormal_moments(const LogNormalParams& p) {
    check_lognormal(p);
    const double s2 = p.sigma * p.sigma;
    LogNormalMoments m;
    m.mean = std::exp(p.mu + 0.5 * s2);
    m.variance = std::expm1(s2) * std::exp(2.0 * p.mu + s2);
    m.overflow = !std::isfinite(m.mean) || !std::isfinite(m.variance);
    return m;
}

EvidentialNll evidential_nll(double y, const EvidentialParams& p,
                             double lambda) {
    check_evidential(p);
    if (lambda < 0.0) throw InvalidParams("lambda must be >= 0");
    const double r = y - p.m;
    // Q = 1 + z^2/nu; alpha cancels because nu * scale^2 = 2 beta (1+k)/k.
    const double q = 1.0 + p.kappa * r * r / (2.0 * p.beta * (1.0 + p.kappa));
    const double log_scale2 =
        std::log(p.beta) + std::log1p(p.kappa) - std::log(p.kappa) -
        std::log(p.alpha);
    EvidentialNll out;
    out.nll = -std::lgamma(p.alpha + 0.5) + std::lgamma(p.alpha) +
              0.5 * std::log(2.0 * p.alpha * std::numbers::pi) +
              0.5 * log_scale2 + (p.alpha + 0.5) * std::log(q);
    out.penalty = lambda * std::abs(r) * (2.0 * p.kappa + p.alpha);
    return out;
}

EvidentialGrad evidential_nll_grad(double y, const EvidentialParams& p,
                                   double lambda) {
    check_evidential(p);
    if (lambda < 0.0) throw InvalidParams("lambda must be >= 0");
    const double r = y - p.m;
    const double a = p.alpha + 0.5;
    const double denom = 2.0 * p.beta * (1.0 + p.kappa);
    const double q = 1.0 + p.kappa * r * r / denom;
    const double qm1 = q - 1.0;

    EvidentialGrad g;
    g.d_m = -a * p.kappa * r / (p.beta * (1.0 + p.kappa) * q);
    g.d_kappa = 0.5 * (1.0 / (1.0 + p.kappa) - 1.0 / p.kappa) +
                a * qm1 / (p.kappa * (1.0 + p.kappa) * q);
    g.d_alpha = digamma(p.alpha) - digamma(p.alpha + 0.5) + std::log(q);
    g.d_beta = 0.5 / p.beta - a * qm1 / (p.beta * q);

    const double sgn = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    g.d_m += -lambda * sgn * (2.0 * p.kappa + p.alpha);
    g.d_kappa += 2.0 * lambda * std::abs(r);
    g.d_alpha += lambda * std::abs(r);
    return g;
}

EvidentialMoments evidential_moments(const EvidentialParams& p) {
    check_evidential(p);
    EvidentialMoments m;
    m.depth = p.m;
    m.aleatoric = p.beta / (p.alpha - 1.0);
    m.epistemic = m.aleatoric / p.kappa;
    return m;
}

double e2depth_map(double dhat, double dmax, double decay) {
    if (!(dmax > 0.0) || !(decay > 0.0))
        throw OutOfRange("e2depth_map requires dmax > 0 and decay > 0");
    if (!(dhat >= 0.0 && dhat <= 1.0))
        throw OutOfRange("normalized log depth must be in [0,1]");
    return dmax * std::exp(-decay * (1.0 - dhat));
}

double e2depth_inverse(double depth, double dmax, double decay) {
    if (!(dmax > 0.0) || !(decay > 0.0))
        throw OutOfRange("e2depth_inverse requires dmax > 0 and decay > 0");
    if (!(depth > 0.0)) throw OutOfRange("metric depth must be > 0");
    const double dhat = 1.0 + std::log(depth / dmax) / decay;
    if (dhat < -1e-9 || dhat > 1.0 + 1e-9)
        throw OutOfRange("metric depth outside the mapped range");
    return std::clamp(dhat, 0.0, 1.0);
}

namespace {

void require_plane(const std::vector<double>& v, std::size_t n,
                   const char* name) {
    if (v.size() != n)
        throw InvalidParams(std::string(name) + " plane has wrong size");
}

}  // namespace

UncertaintyField UncertaintyField::gaussian(std::size_t h, std::size_t w,
                                            std::vector<double> mu,
                                            std::vector<double> sigma) {
    const std::size_t n = h * w;
    require_plane(mu, n, "mu");
    require_plane(sigma, n, "sigma");
    for (double s : sigma)
        if (!(s > 0.0)) throw NonPositiveSigma();

    UncertaintyField f;
    f.model = ModelKind::Gaussian;
    f.height = h;
    f.width = w;
    f.p0 = std::move(mu);
    f.p1 = std::move(sigma);
    f.depth = f.p0;
    f.variance.resize(n);
    par::parallel_for(n, [&](std::size_t i) {
        f.variance[i] = f.p1[i] * f.p1[i];
    });
    return f;
}

UncertaintyField UncertaintyField::lognormal(std::size_t h, std::size_t w,
                                             std::vector<double> mu,
                                             std::vector<double> sigma) {
    const std::size_t n = h * w;
    require_plane(mu, n, "mu");
    require_plane(sigma, n, "sigma");
    for (double s : sigma)
        if (!(s > 0.0)) throw NonPositiveSigma();

    UncertaintyField f;
    f.model = ModelKind::LogNormal;
    f.height = h;
    f.width = w;
    f.p0 = std::move(mu);
    f.p1 = std::move(sigma);
    f.depth.resize(n);
    f.variance.resize(n);
    par::parallel_for(n, [&](std::size_t i) {
        const LogNormalMoments m =
            lognormal_moments({f.p0[i], f.p1[i]});
        f.depth[i] = m.mean;
        f.variance[i] = m.variance;
    });
    return f;
}

UncertaintyField UncertaintyField::evidential(std::size_t h, std::size_t w,
                                              std::vector<double> m,
                                              std::vector<double> kappa,
                                              std::vector<double> alpha,
                                              std::vector<double> beta) {
    const std::size_t n = h * w;
    require_plane(m, n, "m");
    require_plane(kappa, n, "kappa");
    require_plane(alpha, n, "alpha");
    require_plane(beta, n, "beta");
    for (std::size_t i = 0; i < n; ++i)
        check_evidential({m[i], kappa[i], alpha[i], beta[i]});

    UncertaintyField f;
    f.model = ModelKind::Evidential;
    f.height = h;
    f.width = w;
    f.p0 = std::move(m);
    f.p1 = std::move(kappa);
    f.p2 = std::move(alpha);
    f.p3 = std::move(beta);
    f.depth = f.p0;
    f.aleatoric.resize(n);
    f.epistemic.resize(n);
    f.variance.resize(n);
    par::parallel_for(n, [&](std::size_t i) {
        f.aleatoric[i] = f.p3[i] / (f.p2[i] - 1.0);
        f.epistemic[i] = f.aleatoric[i] / f.p1[i];
        f.variance[i] = f.epistemic[i];  // ranking plane
    });
    return f;
}

LossReport batch_loss(const UncertaintyField& field, const DepthMap& gt,
                      const ValidMask& valid, double lambda) {
    if (gt.height != field.height || gt.width != field.width ||
        valid.height != field.height || valid.width != field.width)
        throw InvalidParams("field/gt/mask shapes disagree");

    const std::size_t n = field.size();
    auto included = [&](std::size_t i) {
        return valid.data[i] != 0 && gt.values[i] > 0.0;
    };

    const double count =
        par::block_sum(n, [&](std::size_t i) { return included(i) ? 1.0 : 0.0; });
    if (count == 0.0) throw NoValidPixels("batch");

    LossReport report;
    report.lambda = lambda;
    report.count = static_cast<std::size_t>(count);

    switch (field.model) {
        case ModelKind::Gaussian:
            report.mean_nll = par::block_sum(n, [&](std::size_t i) {
                return included(i)
                           ? gaussian_nll(gt.values[i], {field.p0[i], field.p1[i]})
                           : 0.0;
            }) / count;
            break;
        case ModelKind::LogNormal:
            report.mean_nll = par::block_sum(n, [&](std::size_t i) {
                return included(i)
                           ? lognormal_nll(gt.values[i], {field.p0[i], field.p1[i]})
                           : 0.0;
            }) / count;
            break;
        case ModelKind::Evidential: {
            report.mean_nll = par::block_sum(n, [&](std::size_t i) {
                if (!included(i)) return 0.0;
                return evidential_nll(gt.values[i],
                                      {field.p0[i], field.p1[i], field.p2[i],
                                       field.p3[i]},
                                      lambda)
                    .nll;
            }) / count;
            report.penalty = par::block_sum(n, [&](std::size_t i) {
                if (!included(i)) return 0.0;
                return evidential_nll(gt.values[i],
                                      {field.p0[i], field.p1[i], field.p2[i],
                                       field.p3[i]},
                                      lambda)
                    .penalty;
            }) / count;
            break;
        }
    }
    return report;
}

namespace {

struct RawState {
    double raw[4] = {0.0, 0.0, 0.0, 0.0};
};

}  // namespace

FitResult fit_pointwise(std::span<const double> samples, ModelKind model,
                        const FitOptions& opts) {
    const std::size_t n = samples.size();
    if (n < 2) throw InvalidParams("need at least 2 samples");
    if (model == ModelKind::LogNormal)
        for (double y : samples)
            if (!(y > 0.0)) throw NonPositiveDepth();

    // Moment-based initialization.
    double mean = 0.0;
    for (double y : samples) mean += y;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double y : samples) var += (y - mean) * (y - mean);
    var /= static_cast<double>(n);
    double log_mean = 0.0, log_var = 0.0;
    if (model == ModelKind::LogNormal) {
        for (double y : samples) log_mean += std::log(y);
        log_mean /= static_cast<double>(n);
        for (double y : samples) {
            const double d = std::log(y) - log_mean;
            log_var += d * d;
        }
        log_var /= static_cast<double>(n);
    }
    const double sd = std::sqrt(std::max(var, 1e-8));
    const double log_sd = std::sqrt(std::max(log_var, 1e-8));

    RawState st;
    switch (model) {
        case ModelKind::Gaussian:
            st.raw[0] = mean;
            st.raw[1] = positivity_inverse(sd + kSigmaFloor, kSigmaFloor);
            break;
        case ModelKind::LogNormal:
            st.raw[0] = log_mean;
            st.raw[1] = positivity_inverse(log_sd + kSigmaFloor, kSigmaFloor);
            break;
        case ModelKind::Evidential:
            st.raw[0] = mean;
            st.raw[1] = positivity_inverse(1.0 + kKappaFloor, kKappaFloor);
            st.raw[2] = positivity_inverse(2.0, kAlphaFloor);
            st.raw[3] = positivity_inverse(std::max(var, 1e-6) + kBetaFloor,
                                           kBetaFloor);
            break;
    }

    auto objective_and_grad = [&](const RawState& s, double grad[4]) {
        double obj = 0.0;
        switch (model) {
            case ModelKind::Gaussian: {
                const GaussianParams p{s.raw[0],
                                       positivity(s.raw[1], kSigmaFloor)};
                obj = par::block_sum(n, [&](std::size_t i) {
                    return gaussian_nll(samples[i], p);
                });
                const double gmu = par::block_sum(n, [&](std::size_t i) {
                    return gaussian_nll_grad(samples[i], p).d_mu;
                });
                const double gsd = par::block_sum(n, [&](std::size_t i) {
                    return gaussian_nll_grad(samples[i], p).d_sigma;
                });
                grad[0] = gmu / static_cast<double>(n);
                grad[1] = gsd / static_cast<double>(n) * positivity_grad(s.raw[1]);
                break;
            }
            case ModelKind::LogNormal: {
                const LogNormalParams p{s.raw[0],
                                        positivity(s.raw[1], kSigmaFloor)};
                obj = par::block_sum(n, [&](std::size_t i) {
                    return lognormal_nll(samples[i], p);
                });
                const double gmu = par::block_sum(n, [&](std::size_t i) {
                    return lognormal_nll_grad(samples[i], p).d_mu;
                });
                const double gsd = par::block_sum(n, [&](std::size_t i) {
                    return lognormal_nll_grad(samples[i], p).d_sigma;
                });
                grad[0] = gmu / static_cast<double>(n);
                grad[1] = gsd / static_cast<double>(n) * positivity_grad(s.raw[1]);
                break;
            }
            case ModelKind::Evidential: {
                const EvidentialParams p{
                    s.raw[0], positivity(s.raw[1], kKappaFloor),
                    positivity(s.raw[2], kAlphaFloor),
                    positivity(s.raw[3], kBetaFloor)};
                obj = par::block_sum(n, [&](std::size_t i) {
                    return evidential_nll(samples[i], p, opts.lambda).total();
                });
                double acc[4] = {0.0, 0.0, 0.0, 0.0};
                for (int j = 0; j < 4; ++j) {
                    acc[j] = par::block_sum(n, [&](std::size_t i) {
                        const EvidentialGrad g =
                            evidential_nll_grad(samples[i], p, opts.lambda);
                        switch (j) {
                            case 0: return g.d_m;
                            case 1: return g.d_kappa;
                            case 2: return g.d_alpha;
                            default: return g.d_beta;
                        }
                    });
                }
                grad[0] = acc[0] / static_cast<double>(n);
                grad[1] = acc[1] / static_cast<double>(n) *
                          positivity_grad(s.raw[1]);
                grad[2] = acc[2] / static_cast<double>(n) *
                          positivity_grad(s.raw[2]);
                grad[3] = acc[3] / static_cast<double>(n) *
                          positivity_grad(s.raw[3]);
                break;
            }
        }
        return obj / static_cast<double>(n);
    };

    const int n_params = model == ModelKind::Evidential ? 4 : 2;
    double prev_obj = std::numeric_limits<double>::infinity();
    double obj = 0.0;
    int rising = 0;
    std::size_t step = 0;
    for (; step < opts.steps; ++step) {
        double grad[4] = {0.0, 0.0, 0.0, 0.0};
        obj = objective_and_grad(st, grad);
        if (obj > prev_obj) {
            if (++rising >= 50) throw Divergence(step, obj);
        } else {
            rising = 0;
        }
        prev_obj = obj;
        for (int j = 0; j < n_params; ++j)
            st.raw[j] -= opts.step_size * grad[j];
    }

    FitResult out;
    out.model = model;
    out.steps_run = step;
    switch (model) {
        case ModelKind::Gaussian:
            out.gaussian = {st.raw[0], positivity(st.raw[1], kSigmaFloor)};
            out.final_nll = par::block_sum(n, [&](std::size_t i) {
                return gaussian_nll(samples[i], out.gaussian);
            }) / static_cast<double>(n);
            break;
        case ModelKind::LogNormal:
            out.lognormal = {st.raw[0], positivity(st.raw[1], kSigmaFloor)};
            out.final_nll = par::block_sum(n, [&](std::size_t i) {
                return lognormal_nll(samples[i], out.lognormal);
            }) / static_cast<double>(n);
            break;
        case ModelKind::Evidential:
            out.evidential = {st.raw[0], positivity(st.raw[1], kKappaFloor),
                              positivity(st.raw[2], kAlphaFloor),
                              positivity(st.raw[3], kBetaFloor)};
            out.final_nll = par::block_sum(n, [&](std::size_t i) {
                return evidential_nll(samples[i], out.evidential, opts.lambda)
                    .total();
            }) / static_cast<double>(n);
            break;
    }
    return out;
}

}  // namespace evdepth
