#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "modelavg/design.hpp"
#include "modelavg/weights.hpp"

namespace modelavg {

/// The competing estimators of alpha.
enum class Estimator { Restricted, Unrestricted, ModelSelection, BmaExact, BmaBic, Ama };

inline constexpr std::array<Estimator, 6> kAllEstimators = {
    Estimator::Restricted, Estimator::Unrestricted, Estimator::ModelSelection,
    Estimator::BmaExact,   Estimator::BmaBic,       Estimator::Ama};

std::string_view estimator_name(Estimator e) noexcept;
/// Inverse of estimator_name; throws InvalidArgument on unknown names.
Estimator parse_estimator(std::string_view name);

/// All estimates of alpha from one dataset, sharing a single unrestricted fit.
struct EstimateBundle {
    double alpha_r = 0.0;
    double alpha_u = 0.0;
    double beta_u = 0.0;
    double ms = 0.0;
    double bma_exact = 0.0;
    double bma_bic = 0.0;
    double ama = 0.0;
    ModelChoice selected = ModelChoice::Restricted;
    ModelWeights exact_weights;
    ModelWeights bic_weights;
    ModelWeights adaptive_weights;

    double value(Estimator e) const noexcept;
};

/// p_R alpha_R + p_U alpha_U, kept inside [min, max] of the two constituents.
double model_average(double alpha_r, double alpha_u, const ModelWeights& weights) noexcept;

double post_model_selection(const Dataset& data, const DesignStats& stats, const PretestConfig& pretest);

EstimateBundle estimate_all(const Dataset& data, const DesignStats& stats, const PretestConfig& pretest,
                            const AdaptiveConfig& adaptive, double sigma, const PosteriorPrior& prior = {});

/// Recipe for running the full estimation pipeline on a dataset of any size.
///
/// Unset knobs follow the sample size of the dataset they are applied to:
/// c = sqrt(log n) and (a_n, k_n) from default_tuning(n). A resample of the
/// same size therefore reuses the original tuning values.
struct EstimatorSettings {
    std::optional<double> pretest_c;
    PretestStatistic pretest_statistic = PretestStatistic::TRatio;
    std::optional<double> a_n;
    std::optional<double> k_n;
    PosteriorPrior prior;
    double sigma = 1.0;
    /// The exact posterior weights are skipped (bma_exact = NaN) when false.
    bool with_exact_posterior = true;

    PretestConfig pretest_for(std::size_t n) const;
    AdaptiveConfig adaptive_for(std::size_t n) const;
    EstimateBundle estimate(const Dataset& data) const;
    EstimateBundle estimate(const Dataset& data, const DesignStats& stats) const;
};

/// Observations for the N(mu, 1) mean-model example.
class MeanModelSample {
public:
    explicit MeanModelSample(std::vector<double> y);

    std::span<const double> y() const noexcept { return y_; }
    std::size_t size() const noexcept { return y_.size(); }
    double mean() const noexcept { return mean_; }

private:
    std::vector<double> y_;
    double mean_ = 0.0;
};

/// Weight W(.) with values in [0, 1].
using WeightFunction = std::function<double(double)>;

/// mu_hat = W(sqrt(n) ybar) ybar.
double mean_model_estimate(const MeanModelSample& sample, const WeightFunction& weight);

} // namespace modelavg
