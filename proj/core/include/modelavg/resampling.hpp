#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "modelavg/design.hpp"
#include "modelavg/empirical.hpp"
#include "modelavg/estimators.hpp"
#include "modelavg/random.hpp"

namespace modelavg {

/// Maps a dataset to a scalar estimate; throws a DesignError when the
/// dataset cannot be fitted.
using EstimatorProcedure = std::function<double(const Dataset&)>;
/// Same, for several estimates computed from one fit.
using MultiEstimatorProcedure = std::function<std::vector<double>(const Dataset&)>;

struct ResamplePlan {
    enum class Scheme { PairedBootstrap, Subsample };

    Scheme scheme = Scheme::PairedBootstrap;
    std::size_t b = 500;            ///< number of resamples
    std::size_t m = 0;              ///< subsample size (Subsample only)
    std::size_t max_redraws = 0;    ///< 0 means 100 * b

    static ResamplePlan bootstrap(std::size_t b);
    static ResamplePlan subsample(std::size_t m, std::size_t k);

    std::size_t redraw_cap() const noexcept { return max_redraws == 0 ? 100 * b : max_redraws; }
    /// Throws InvalidArgument for b = 0 or a subsample size outside [1, n].
    void validate(std::size_t n) const;
};

/// n indices drawn uniformly with replacement.
std::vector<std::size_t> draw_bootstrap_indices(std::size_t n, RandomStream& rng);
/// m distinct indices drawn uniformly without replacement.
std::vector<std::size_t> draw_subsample_indices(std::size_t n, std::size_t m, RandomStream& rng);

struct ResampleResult {
    std::vector<EmpiricalSample> samples;  ///< one per procedure output
    std::size_t redraws = 0;               ///< singular resamples that were rejected
};

/// Runs `procedure` on `plan.b` resamples. Output j holds
/// sqrt(size) * (theta*_j - theta_j) where size is n for the bootstrap and m
/// for subsampling, and theta_j is the estimate on the full data. Replicate i
/// draws from rng.split(i), so results do not depend on `workers`.
/// Singular resamples are redrawn; TooManySingularResamples once more than
/// plan.redraw_cap() redraws are needed.
ResampleResult resample_distribution(const Dataset& data, const MultiEstimatorProcedure& procedure,
                                     const ResamplePlan& plan, const RandomStream& rng, unsigned workers = 1);

EmpiricalSample paired_bootstrap(const Dataset& data, const EstimatorProcedure& procedure,
                                 const ResamplePlan& plan, const RandomStream& rng, unsigned workers = 1);

EmpiricalSample subsample_distribution(const Dataset& data, const EstimatorProcedure& procedure,
                                       const ResamplePlan& plan, const RandomStream& rng, unsigned workers = 1);

/// mu_hat* = W(sqrt(n) (ybar* - ybar)) ybar* for the resample given by `rows`.
double mean_model_resample_estimate(const MeanModelSample& sample, std::span<const std::size_t> rows,
                                    const WeightFunction& weight);

/// b draws of sqrt(n) (mu_hat* - mu_hat), with the weight argument centred at
/// the sample mean so that resampling mirrors the null.
EmpiricalSample mean_model_bootstrap(const MeanModelSample& sample, const WeightFunction& weight, std::size_t b,
                                     const RandomStream& rng, unsigned workers = 1);

} // namespace modelavg
