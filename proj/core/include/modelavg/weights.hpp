#pragma once

#include <cstddef>

#include "modelavg/design.hpp"

namespace modelavg {

/// Weights (p_R, p_U) on the restricted and unrestricted models.
/// p_U is always stored as 1 - p_R.
class ModelWeights {
public:
    ModelWeights() = default;
    /// Throws InvalidArgument unless 0 <= p_r <= 1.
    explicit ModelWeights(double p_r);

    double p_r() const noexcept { return p_r_; }
    double p_u() const noexcept { return 1.0 - p_r_; }

private:
    double p_r_ = 0.5;
};

enum class ModelChoice { Restricted, Unrestricted };

/// How the pretest statistic is formed from beta_u and sigma_beta.
enum class PretestStatistic {
    TRatio,        ///< |beta_u / sigma_beta|
    ScaledByRootN  ///< |n^{-1/2} beta_u / sigma_beta| (literal printed form)
};

struct PretestConfig {
    double c = 1.4142135623730951;
    PretestStatistic statistic = PretestStatistic::TRatio;

    static PretestConfig aic();
    static PretestConfig bic(std::size_t n);
    void validate() const;
};

struct AdaptiveConfig {
    double a_n = 1.0;  ///< tuning sequence; gamma_1n = a_n beta_u, gamma_2n = -a_n beta_u
    double k_n = 1.0;  ///< half-width of the window around zero

    void validate() const;
};

/// Conjugate prior used by the exact posterior weights: independent
/// N(0, variance) on each coefficient and prior probability `p_restricted`
/// on model R.
struct PosteriorPrior {
    double variance = 1.0;
    double p_restricted = 0.5;

    void validate() const;
};

double logistic(double t) noexcept;

double pretest_statistic(double beta_u, double sigma_beta, const PretestConfig& config, std::size_t n);

/// U when the statistic exceeds c, R otherwise (ties go to R).
ModelChoice pretest_select(double beta_u, double sigma_beta, const PretestConfig& config, std::size_t n = 1);

/// log N(Y; 0, sigma^2 I + v X1 X1') without forming the n x n covariance.
double log_marginal_restricted(const Dataset& data, double sigma, double prior_variance = 1.0);
/// log N(Y; 0, sigma^2 I + v X X') without forming the n x n covariance.
double log_marginal_unrestricted(const Dataset& data, double sigma, double prior_variance = 1.0);

/// Posterior model probabilities under the conjugate normal priors.
/// Defined for collinear designs as well.
ModelWeights exact_posterior_weights(const Dataset& data, double sigma, const PosteriorPrior& prior = {});

struct BicValues {
    double bic_r = 0.0;
    double bic_u = 0.0;
    double rss_r = 0.0;
    double rss_u = 0.0;
};

/// BIC_R = RSS_R + log n, BIC_U = RSS_U + 2 log n.
BicValues bic_values(const Dataset& data, const DesignStats& stats);
/// q_R = exp(-BIC_R/2) / (exp(-BIC_R/2) + exp(-BIC_U/2)).
ModelWeights bic_weights(const Dataset& data, const DesignStats& stats);
ModelWeights bic_weights(const BicValues& bic);

/// Smooth approximations to the indicators of {beta_u - k_n <= 0} and {beta_u + k_n >= 0}.
struct AdaptiveTerms {
    double xi1 = 0.5;
    double xi2 = 0.5;
};

AdaptiveTerms adaptive_terms(double beta_u, const AdaptiveConfig& config);
/// p_R = (xi1 + xi2) / 2. Never exceeds 1/2.
ModelWeights adaptive_weights(double beta_u, const AdaptiveConfig& config);

/// a_n = (log n)^2, k_n = sqrt(log(n) / n).
AdaptiveConfig default_tuning(std::size_t n);

} // namespace modelavg
