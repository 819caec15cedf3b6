#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "modelavg/design.hpp"
#include "modelavg/empirical.hpp"
#include "modelavg/estimators.hpp"
#include "modelavg/resampling.hpp"

namespace modelavg {

/// A frozen design, true parameters and estimator recipe, replicated `reps`
/// times. Replicate r of stream s draws its noise from
/// RandomStream::derive(seed, {kResponseDomain, s, r}).
struct Scenario {
    DesignMatrix design;
    TrueParams params;
    EstimatorSettings settings;
    std::size_t reps = 5000;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    unsigned workers = 1;

    void validate() const;
};

inline constexpr std::uint64_t kResponseDomain = 1;
inline constexpr std::uint64_t kDatasetDomain = 2;
inline constexpr std::uint64_t kBootstrapDomain = 3;
inline constexpr std::uint64_t kSubsampleDomain = 4;
inline constexpr std::uint64_t kDesignDomain = 5;

/// Estimators compared against the restricted/unrestricted references in the figures.
inline constexpr std::array<Estimator, 3> kComparedEstimators = {Estimator::ModelSelection, Estimator::BmaBic,
                                                                  Estimator::Ama};

/// The uniform design used by every experiment for sample size n:
/// make_uniform_design(n, RandomStream::derive(seed, {kDesignDomain, n})).
DesignMatrix frozen_design(std::uint64_t seed, std::size_t n);

/// `points` equispaced values on [lo, hi] (a single point yields lo).
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// One EstimateBundle per replicate, in replicate order.
std::vector<EstimateBundle> simulate_bundles(const Scenario& scenario);

/// reps draws of sqrt(n) (alpha_hat - alpha) for one estimator.
EmpiricalSample mc_sampling_distribution(const Scenario& scenario, Estimator estimator);

struct MseRow {
    double beta = 0.0;
    std::array<double, kAllEstimators.size()> mse{};  ///< indexed by Estimator
    std::array<double, kAllEstimators.size()> se{};   ///< Monte Carlo standard errors of `mse`
    std::size_t reps = 0;
    std::uint64_t seed = 0;

    double mse_of(Estimator e) const noexcept { return mse[static_cast<std::size_t>(e)]; }
    double se_of(Estimator e) const noexcept { return se[static_cast<std::size_t>(e)]; }
};

/// Grid point g uses stream g of the template's seed (common random numbers
/// across estimators).
std::vector<MseRow> mse_curve(std::span<const double> beta_grid, const Scenario& scenario_template);

struct KsRatioRow {
    double beta = 0.0;
    std::array<double, 3> ratio{};  ///< indexed like kComparedEstimators
    std::array<double, 3> ks_r{};
    std::array<double, 3> ks_u{};
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

/// 100 KS_R / (KS_R + KS_U); 50 when both distances are zero.
double ks_ratio(double ks_r, double ks_u) noexcept;

std::vector<KsRatioRow> ks_ratio_curve(std::span<const double> beta_grid, const Scenario& scenario_template);

enum class ResamplingMethod { Bootstrap, Subsample };

/// How per-dataset resampling distributions are compared with the truth.
enum class ErrorAggregation {
    MeanOfDatasets,  ///< 100 x mean over datasets of KS(truth, resample)
    Pooled           ///< 100 x KS(truth, all resample draws pooled)
};

struct ResamplingErrorConfig {
    ResamplingMethod method = ResamplingMethod::Bootstrap;
    std::size_t m = 20;  ///< subsample size
    std::size_t datasets_per_beta = 100;
    std::size_t b = 500;
    ErrorAggregation aggregation = ErrorAggregation::MeanOfDatasets;
};

struct ResamplingErrorRow {
    double beta = 0.0;
    std::array<double, 3> err{};  ///< indexed like kComparedEstimators
    std::size_t datasets = 0;
    std::size_t b = 0;
    std::size_t excluded = 0;  ///< datasets dropped for too many singular resamples
    std::uint64_t seed = 0;
};

std::vector<ResamplingErrorRow> resampling_error_curve(std::span<const double> beta_grid,
                                                       const Scenario& scenario_template,
                                                       const ResamplingErrorConfig& config);

struct RiskRow {
    std::size_t n = 0;
    double n_risk = 0.0;  ///< n x MSE of the exact-posterior BMA estimator
    double mc_se = 0.0;
    double n_var_u = 0.0;  ///< closed form n Var(alpha_hat(U)) on the same design
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

/// Each n gets its own design from make_uniform_design seeded by (seed, kDesignDomain, n).
std::vector<RiskRow> risk_bound_sweep(const TrueParams& params, std::span<const std::size_t> n_grid, std::size_t reps,
                                      std::uint64_t seed, const EstimatorSettings& settings = {},
                                      unsigned workers = 1);

struct DecayRow {
    std::size_t n = 0;
    double mean_p_r = 0.0;
    double mean_sqrtn_p_r = 0.0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

/// Adaptive weights with the tuning of `settings` evaluated at each n.
std::vector<DecayRow> weight_decay_sweep(const TrueParams& params, std::span<const std::size_t> n_grid,
                                         std::size_t reps, std::uint64_t seed,
                                         const EstimatorSettings& settings = {}, unsigned workers = 1);

void write_mse_csv(std::ostream& out, std::span<const MseRow> rows);
void write_ks_ratio_csv(std::ostream& out, std::span<const KsRatioRow> rows);
void write_resampling_error_csv(std::ostream& out, std::span<const ResamplingErrorRow> rows);
void write_risk_bound_csv(std::ostream& out, std::span<const RiskRow> rows);
void write_weight_decay_csv(std::ostream& out, std::span<const DecayRow> rows);

} // namespace modelavg
