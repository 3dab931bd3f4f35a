#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "evdepth/types.hpp"

namespace evdepth {

enum class ModelKind { Gaussian, LogNormal, Evidential };

std::string model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);

// Shifted softplus: floor + log(1 + e^raw). Strictly above the floor,
// monotone, and stable for large |raw|.
double positivity(double raw, double floor = 0.0);
double positivity_grad(double raw);   // d positivity / d raw = sigmoid(raw)
double positivity_inverse(double value, double floor = 0.0);

// Softplus floors used when mapping raw fitter parameters to valid model
// parameters; they keep the likelihoods away from their singularities.
inline constexpr double kSigmaFloor = 1e-6;
inline constexpr double kKappaFloor = 1e-6;
inline constexpr double kAlphaFloor = 1.0 + 1e-6;
inline constexpr double kBetaFloor = 1e-6;

inline constexpr double kDefaultPenaltyWeight = 0.25;

struct GaussianParams {
    double mu = 0.0;
    double sigma = 1.0;
};

struct GaussianGrad {
    double d_mu = 0.0;
    double d_sigma = 0.0;
};

// -log N(y | mu, sigma^2) = log sigma + 0.5 log(2 pi) + (y-mu)^2 / (2 sigma^2)
double gaussian_nll(double y, const GaussianParams& p);
GaussianGrad gaussian_nll_grad(double y, const GaussianParams& p);

struct LogNormalParams {
    double mu = 0.0;     // location of log depth
    double sigma = 1.0;  // scale of log depth, > 0
};

struct LogNormalGrad {
    double d_mu = 0.0;
    double d_sigma = 0.0;
};

// -log LN(y | mu, sigma^2); requires y > 0.
double lognormal_nll(double y, const LogNormalParams& p);
LogNormalGrad lognormal_nll_grad(double y, const LogNormalParams& p);

struct LogNormalMoments {
    double mean = 0.0;      // e^{mu + sigma^2/2}
    double variance = 0.0;  // (e^{sigma^2} - 1) e^{2 mu + sigma^2}
    bool overflow = false;
};

LogNormalMoments lognormal_moments(const LogNormalParams& p);

struct EvidentialParams {
    double m = 0.0;      // location
    double kappa = 1.0;  // evidence, > 0
    double alpha = 2.0;  // variance confidence, > 1
    double beta = 1.0;   // noise level, > 0
};

struct EvidentialNll {
    double nll = 0.0;      // -log Student-t(y | m, scale, 2 alpha)
    double penalty = 0.0;  // lambda |y - m| (2 kappa + alpha)
    [[nodiscard]] double total() const { return nll + penalty; }
};

struct EvidentialGrad {  // gradient of nll + penalty
    double d_m = 0.0;
    double d_kappa = 0.0;
    double d_alpha = 0.0;
    double d_beta = 0.0;
};

// Student-t marginal of the Normal-Inverse-Gamma posterior:
// location m, scale sqrt(beta (1 + kappa) / (kappa alpha)), 2 alpha degrees
// of freedom, evaluated in log space via lgamma.
EvidentialNll evidential_nll(double y, const EvidentialParams& p,
                             double lambda);
EvidentialGrad evidential_nll_grad(double y, const EvidentialParams& p,
                                   double lambda);

struct EvidentialMoments {
    double depth = 0.0;      // m
    double aleatoric = 0.0;  // beta / (alpha - 1)
    double epistemic = 0.0;  // beta / (kappa (alpha - 1))
};

EvidentialMoments evidential_moments(const EvidentialParams& p);

// Normalized log depth in [0,1] -> metric depth D = dmax e^{-decay (1 - dhat)}
// and its inverse. Strictly increasing, bounded by (0, dmax].
double e2depth_map(double dhat, double dmax, double decay);
double e2depth_inverse(double depth, double dmax, double decay);

// Per-pixel distribution parameters plus derived planes. The `variance`
// plane is the one used for uncertainty ranking: sigma^2 for Gaussian,
// the log-normal variance for LogNormal, and the epistemic variance for
// Evidential.
struct UncertaintyField {
    ModelKind model = ModelKind::Gaussian;
    std::size_t height = 0;
    std::size_t width = 0;

    // Parameter planes; Gaussian/LogNormal use p0=mu, p1=sigma, Evidential
    // uses p0=m, p1=kappa, p2=alpha, p3=beta.
    std::vector<double> p0, p1, p2, p3;

    // Derived planes, consistent with the moment formulas.
    std::vector<double> depth;
    std::vector<double> variance;
    std::vector<double> aleatoric;  // evidential only
    std::vector<double> epistemic;  // evidential only

    [[nodiscard]] std::size_t size() const { return height * width; }

    static UncertaintyField gaussian(std::size_t h, std::size_t w,
                                     std::vector<double> mu,
                                     std::vector<double> sigma);
    static UncertaintyField lognormal(std::size_t h, std::size_t w,
                                      std::vector<double> mu,
                                      std::vector<double> sigma);
    static UncertaintyField evidential(std::size_t h, std::size_t w,
                                       std::vector<double> m,
                                       std::vector<double> kappa,
                                       std::vector<double> alpha,
                                       std::vector<double> beta);
};

struct LossReport {
    double mean_nll = 0.0;
    double penalty = 0.0;  // mean penalty contribution (0 unless evidential)
    std::size_t count = 0;
    double lambda = 0.0;
    [[nodiscard]] double total() const { return mean_nll + penalty; }
};

// Mean NLL over pixels where `valid` is set AND gt > 0. Uses a fixed-shape
// block reduction, so the result is identical for any thread count.
LossReport batch_loss(const UncertaintyField& field, const DepthMap& gt,
                      const ValidMask& valid,
                      double lambda = kDefaultPenaltyWeight);

struct FitOptions {
    std::size_t steps = 2000;
    double step_size = 0.05;
    double lambda = kDefaultPenaltyWeight;  // evidential only
};

struct FitResult {
    ModelKind model = ModelKind::Gaussian;
    GaussianParams gaussian;
    LogNormalParams lognormal;
    EvidentialParams evidential;
    double final_nll = 0.0;  // mean objective at the fitted parameters
    std::size_t steps_run = 0;
};

// Full-batch gradient descent on the mean NLL through the positivity
// mapping. Deliberately plain: fixed step size, divergence guard after 50
// consecutive increases. Exists to exercise the analytic gradients.
FitResult fit_pointwise(std::span<const double> samples, ModelKind model,
                        const FitOptions& opts = {});

}  // namespace evdepth
