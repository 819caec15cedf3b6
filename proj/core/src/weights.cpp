#include "modelavg/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modelavg/errors.hpp"

namespace modelavg {

ModelWeights::ModelWeights(double p_r) : p_r_(p_r) {
    if (!(p_r >= 0.0 && p_r <= 1.0)) throw InvalidArgument("model weight must lie in [0, 1]");
}

PretestConfig PretestConfig::aic() { return {std::numbers::sqrt2, PretestStatistic::TRatio}; }

PretestConfig PretestConfig::bic(std::size_t n) {
    if (n < 2) throw InvalidArgument("BIC threshold needs n >= 2");
    return {std::sqrt(std::log(static_cast<double>(n))), PretestStatistic::TRatio};
}

void PretestConfig::validate() const {
    if (!(c > 0.0)) throw InvalidArgument("pretest threshold c must be positive");
}

void AdaptiveConfig::validate() const {
    if (!(a_n > 0.0) || !std::isfinite(a_n)) throw InvalidArgument("a_n must be positive");
    if (!(k_n > 0.0) || !std::isfinite(k_n)) throw InvalidArgument("k_n must be positive");
}

void PosteriorPrior::validate() const {
    if (!(variance > 0.0)) throw InvalidArgument("prior variance must be positive");
    if (!(p_restricted > 0.0 && p_restricted < 1.0)) {
        throw InvalidArgument("prior probability of the restricted model must lie in (0, 1)");
    }
}

double logistic(double t) noexcept {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double pretest_statistic(double beta_u, double sigma_beta, const PretestConfig& config, std::size_t n) {
    if (!(sigma_beta > 0.0)) throw InvalidArgument("sigma_beta must be positive");
    double t = std::abs(beta_u / sigma_beta);
    if (config.statistic == PretestStatistic::ScaledByRootN) {
        if (n == 0) throw InvalidArgument("scaled pretest statistic needs n");
        t /= std::sqrt(static_cast<double>(n));
    }
    return t;
}

ModelChoice pretest_select(double beta_u, double sigma_beta, const PretestConfig& config, std::size_t n) {
    config.validate();
    return pretest_statistic(beta_u, sigma_beta, config, n) > config.c ? ModelChoice::Unrestricted
                                                                       : ModelChoice::Restricted;
}

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// Shared pieces of log N(Y; 0, sigma^2 I + v G) with G = X X' of rank <= 2:
// log det = n log sigma^2 + log det(I + (v/sigma^2) X'X) and
// Y' S^{-1} Y = (Y'Y - b' (sigma^2/v I + X'X)^{-1} b) / sigma^2 with b = X'Y.
double gaussian_log_density(std::size_t n, double sigma2, double yy, double log_det_small, double reduction) {
    const double dn = static_cast<double>(n);
    const double quad = (yy - reduction) / sigma2;
    return -0.5 * (dn * kLog2Pi + dn * std::log(sigma2) + log_det_small + std::max(quad, 0.0));
}

} // namespace

double log_marginal_restricted(const Dataset& data, double sigma, double prior_variance) {
    const auto x1 = data.design().x1();
    const auto y = data.y();
    const double sigma2 = sigma * sigma;
    const double s11 = compensated_dot(x1, x1);
    const double b1 = compensated_dot(x1, y);
    const double yy = compensated_dot(y, y);
    const double ridge = sigma2 / prior_variance;
    const double log_det_small = std::log1p(s11 / ridge);
    return gaussian_log_density(data.size(), sigma2, yy, log_det_small, b1 * b1 / (ridge + s11));
}

double log_marginal_unrestricted(const Dataset& data, double sigma, double prior_variance) {
    const auto x1 = data.design().x1();
    const auto x2 = data.design().x2();
    const auto y = data.y();
    const double sigma2 = sigma * sigma;
    const double s11 = compensated_dot(x1, x1);
    const double s22 = compensated_dot(x2, x2);
    const double s12 = compensated_dot(x1, x2);
    const double b1 = compensated_dot(x1, y);
    const double b2 = compensated_dot(x2, y);
    const double yy = compensated_dot(y, y);
    const double ridge = sigma2 / prior_variance;
    // M = ridge I + X'X is positive definite even for a collinear design.
    const double m11 = ridge + s11;
    const double m22 = ridge + s22;
    const double det_m = m11 * m22 - s12 * s12;
    const double log_det_small = std::log(det_m) - 2.0 * std::log(ridge);
    const double reduction = (m22 * b1 * b1 - 2.0 * s12 * b1 * b2 + m11 * b2 * b2) / det_m;
    return gaussian_log_density(data.size(), sigma2, yy, log_det_small, reduction);
}

ModelWeights exact_posterior_weights(const Dataset& data, double sigma, const PosteriorPrior& prior) {
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    prior.validate();
    const double log_r = log_marginal_restricted(data, sigma, prior.variance) + std::log(prior.p_restricted);
    const double log_u = log_marginal_unrestricted(data, sigma, prior.variance) + std::log1p(-prior.p_restricted);
    return ModelWeights(logistic(log_r - log_u));
}

BicValues bic_values(const Dataset& data, const DesignStats& stats) {
    const auto fit = fit_unrestricted(data, stats);
    const double alpha_r = fit_restricted(data, stats);
    const auto x1 = data.design().x1();
    const auto x2 = data.design().x2();
    const auto y = data.y();
    std::vector<double> res_r(y.size());
    std::vector<double> res_u(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        res_r[i] = y[i] - alpha_r * x1[i];
        res_u[i] = y[i] - fit.alpha_u * x1[i] - fit.beta_u * x2[i];
    }
    const double log_n = std::log(static_cast<double>(y.size()));
    BicValues out;
    out.rss_r = compensated_dot(res_r, res_r);
    out.rss_u = compensated_dot(res_u, res_u);
    out.bic_r = out.rss_r + log_n;
    out.bic_u = out.rss_u + 2.0 * log_n;
    return out;
}

ModelWeights bic_weights(const BicValues& bic) {
    // exp(-B_R/2) / (exp(-B_R/2) + exp(-B_U/2)) after subtracting the larger exponent
    return ModelWeights(logistic(0.5 * (bic.bic_u - bic.bic_r)));
}

ModelWeights bic_weights(const Dataset& data, const DesignStats& stats) {
    return bic_weights(bic_values(data, stats));
}

AdaptiveTerms adaptive_terms(double beta_u, const AdaptiveConfig& config) {
    const double gamma1 = config.a_n * beta_u;
    const double gamma2 = -config.a_n * beta_u;
    return {logistic(-gamma1 * (beta_u - config.k_n)), logistic(gamma2 * (beta_u + config.k_n))};
}

ModelWeights adaptive_weights(double beta_u, const AdaptiveConfig& config) {
    config.validate();
    const auto xi = adaptive_terms(beta_u, config);
    // xi1 + xi2 <= 1 holds exactly; rounding can push the sum one ulp above it.
    return ModelWeights(std::min(0.5 * xi.xi1 + 0.5 * xi.xi2, 0.5));
}

AdaptiveConfig default_tuning(std::size_t n) {
    if (n < 2) throw InvalidArgument("default tuning needs n >= 2");
    const double log_n = std::log(static_cast<double>(n));
    return {log_n * log_n, std::sqrt(log_n / static_cast<double>(n))};
}

} // namespace modelavg
