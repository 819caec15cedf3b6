#include "modelavg/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "modelavg/errors.hpp"

namespace modelavg {

std::string_view estimator_name(Estimator e) noexcept {
    switch (e) {
    case Estimator::Restricted: return "r";
    case Estimator::Unrestricted: return "u";
    case Estimator::ModelSelection: return "ms";
    case Estimator::BmaExact: return "bma_exact";
    case Estimator::BmaBic: return "bma_bic";
    case Estimator::Ama: return "ama";
    }
    return "?";
}

Estimator parse_estimator(std::string_view name) {
    for (auto e : kAllEstimators) {
        if (estimator_name(e) == name) return e;
    }
    throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

double EstimateBundle::value(Estimator e) const noexcept {
    switch (e) {
    case Estimator::Restricted: return alpha_r;
    case Estimator::Unrestricted: return alpha_u;
    case Estimator::ModelSelection: return ms;
    case Estimator::BmaExact: return bma_exact;
    case Estimator::BmaBic: return bma_bic;
    case Estimator::Ama: return ama;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double model_average(double alpha_r, double alpha_u, const ModelWeights& weights) noexcept {
    const double p = weights.p_r();
    if (p == 0.0) return alpha_u;
    if (p == 1.0) return alpha_r;
    const double v = alpha_u + p * (alpha_r - alpha_u);
    return std::clamp(v, std::min(alpha_r, alpha_u), std::max(alpha_r, alpha_u));
}

double post_model_selection(const Dataset& data, const DesignStats& stats, const PretestConfig& pretest) {
    const auto fit = fit_unrestricted(data, stats);
    if (pretest_select(fit.beta_u, stats.sigma_beta, pretest, data.size()) == ModelChoice::Unrestricted) {
        return fit.alpha_u;
    }
    return fit_restricted(data, stats);
}

namespace {

EstimateBundle estimate_impl(const Dataset& data, const DesignStats& stats, const PretestConfig& pretest,
                             const AdaptiveConfig& adaptive, double sigma, const PosteriorPrior& prior,
                             bool with_exact) {
    EstimateBundle b;
    const auto fit = fit_unrestricted(data, stats);
    b.alpha_u = fit.alpha_u;
    b.beta_u = fit.beta_u;
    b.alpha_r = fit_restricted(data, stats);

    b.selected = pretest_select(fit.beta_u, stats.sigma_beta, pretest, data.size());
    b.ms = b.selected == ModelChoice::Unrestricted ? b.alpha_u : b.alpha_r;

    b.bic_weights = bic_weights(data, stats);
    b.bma_bic = model_average(b.alpha_r, b.alpha_u, b.bic_weights);

    b.adaptive_weights = adaptive_weights(fit.beta_u, adaptive);
    b.ama = model_average(b.alpha_r, b.alpha_u, b.adaptive_weights);

    if (with_exact) {
        b.exact_weights = exact_posterior_weights(data, sigma, prior);
        b.bma_exact = model_average(b.alpha_r, b.alpha_u, b.exact_weights);
    } else {
        b.bma_exact = std::numeric_limits<double>::quiet_NaN();
    }
    return b;
}

} // namespace

EstimateBundle estimate_all(const Dataset& data, const DesignStats& stats, const PretestConfig& pretest,
                            const AdaptiveConfig& adaptive, double sigma, const PosteriorPrior& prior) {
    return estimate_impl(data, stats, pretest, adaptive, sigma, prior, true);
}

PretestConfig EstimatorSettings::pretest_for(std::size_t n) const {
    PretestConfig cfg = pretest_c ? PretestConfig{*pretest_c, pretest_statistic} : PretestConfig::bic(n);
    cfg.statistic = pretest_statistic;
    cfg.validate();
    return cfg;
}

AdaptiveConfig EstimatorSettings::adaptive_for(std::size_t n) const {
    AdaptiveConfig cfg = default_tuning(n);
    if (a_n) cfg.a_n = *a_n;
    if (k_n) cfg.k_n = *k_n;
    cfg.validate();
    return cfg;
}

EstimateBundle EstimatorSettings::estimate(const Dataset& data) const {
    return estimate(data, compute_design_stats(data.design(), sigma));
}

EstimateBundle EstimatorSettings::estimate(const Dataset& data, const DesignStats& stats) const {
    const auto n = data.size();
    return estimate_impl(data, stats, pretest_for(n), adaptive_for(n), sigma, prior, with_exact_posterior);
}

MeanModelSample::MeanModelSample(std::vector<double> y) : y_(std::move(y)) {
    if (y_.empty()) throw InvalidArgument("mean-model sample needs at least one observation");
    const std::vector<double> ones(y_.size(), 1.0);
    mean_ = compensated_dot(ones, y_) / static_cast<double>(y_.size());
}

double mean_model_estimate(const MeanModelSample& sample, const WeightFunction& weight) {
    const double ybar = sample.mean();
    const double w = weight(std::sqrt(static_cast<double>(sample.size())) * ybar);
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("weight function must return a value in [0, 1]");
    return w * ybar;
}

} // namespace modelavg
