#include "modelavg/resampling.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <string>

#include "modelavg/errors.hpp"
#include "modelavg/parallel.hpp"

namespace modelavg {

ResamplePlan ResamplePlan::bootstrap(std::size_t b) { return {Scheme::PairedBootstrap, b, 0, 0}; }

ResamplePlan ResamplePlan::subsample(std::size_t m, std::size_t k) { return {Scheme::Subsample, k, m, 0}; }

void ResamplePlan::validate(std::size_t n) const {
    if (b == 0) throw InvalidArgument("number of resamples must be positive");
    if (scheme == Scheme::Subsample && (m < 1 || m > n)) {
        throw InvalidArgument("subsample size m = " + std::to_string(m) + " must lie in [1, n = " +
                              std::to_string(n) + "]");
    }
}

std::vector<std::size_t> draw_bootstrap_indices(std::size_t n, RandomStream& rng) {
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = rng.index(n);
    return rows;
}

std::vector<std::size_t> draw_subsample_indices(std::size_t n, std::size_t m, RandomStream& rng) {
    if (m > n) throw InvalidArgument("subsample larger than the data");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // partial Fisher-Yates
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.index(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return pool;
}

ResampleResult resample_distribution(const Dataset& data, const MultiEstimatorProcedure& procedure,
                                     const ResamplePlan& plan, const RandomStream& rng, unsigned workers) {
    const std::size_t n = data.size();
    plan.validate(n);
    const bool bootstrap = plan.scheme == ResamplePlan::Scheme::PairedBootstrap;
    const std::size_t size = bootstrap ? n : plan.m;
    const double scale = std::sqrt(static_cast<double>(size));
    const std::size_t cap = plan.redraw_cap();

    const std::vector<double> theta = procedure(data);
    const std::size_t k = theta.size();
    if (k == 0) throw InvalidArgument("estimator procedure returned no values");

    std::vector<double> draws(plan.b * k);
    std::vector<std::size_t> redraws(plan.b, 0);
    std::atomic<std::size_t> total_redraws{0};

    parallel_for(plan.b, workers, [&](std::size_t i) {
        RandomStream stream = rng.split(i);
        for (;;) {
            const auto rows = bootstrap ? draw_bootstrap_indices(n, stream) : draw_subsample_indices(n, plan.m, stream);
            std::vector<double> est;
            try {
                est = procedure(data.select(rows));
            } catch (const DesignError&) {
                ++redraws[i];
                if (total_redraws.fetch_add(1) + 1 > cap) {
                    throw TooManySingularResamples("more than " + std::to_string(cap) +
                                                   " singular resampled designs; the design looks degenerate");
                }
                continue;
            }
            if (est.size() != k) throw InvalidArgument("estimator procedure changed its output size");
            for (std::size_t j = 0; j < k; ++j) draws[i * k + j] = scale * (est[j] - theta[j]);
            return;
        }
    });

    ResampleResult out;
    out.redraws = std::accumulate(redraws.begin(), redraws.end(), std::size_t{0});
    out.samples.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> col(plan.b);
        for (std::size_t i = 0; i < plan.b; ++i) col[i] = draws[i * k + j];
        out.samples.emplace_back(std::move(col));
    }
    return out;
}

namespace {

MultiEstimatorProcedure wrap(const EstimatorProcedure& procedure) {
    return [&procedure](const Dataset& d) { return std::vector<double>{procedure(d)}; };
}

} // namespace

EmpiricalSample paired_bootstrap(const Dataset& data, const EstimatorProcedure& procedure,
                                 const ResamplePlan& plan, const RandomStream& rng, unsigned workers) {
    ResamplePlan p = plan;
    p.scheme = ResamplePlan::Scheme::PairedBootstrap;
    return std::move(resample_distribution(data, wrap(procedure), p, rng, workers).samples.front());
}

EmpiricalSample subsample_distribution(const Dataset& data, const EstimatorProcedure& procedure,
                                       const ResamplePlan& plan, const RandomStream& rng, unsigned workers) {
    ResamplePlan p = plan;
    p.scheme = ResamplePlan::Scheme::Subsample;
    return std::move(resample_distribution(data, wrap(procedure), p, rng, workers).samples.front());
}

double mean_model_resample_estimate(const MeanModelSample& sample, std::span<const std::size_t> rows,
                                    const WeightFunction& weight) {
    const auto y = sample.y();
    if (rows.size() != y.size()) throw InvalidArgument("bootstrap resample must have n rows");
    double sum = 0.0;
    for (auto r : rows) sum += y[r];
    const double n = static_cast<double>(y.size());
    const double mean_star = sum / n;
    const double w = weight(std::sqrt(n) * (mean_star - sample.mean()));
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("weight function must return a value in [0, 1]");
    return w * mean_star;
}

EmpiricalSample mean_model_bootstrap(const MeanModelSample& sample, const WeightFunction& weight, std::size_t b,
                                     const RandomStream& rng, unsigned workers) {
    if (b == 0) throw InvalidArgument("number of resamples must be positive");
    const std::size_t n = sample.size();
    const double root_n = std::sqrt(static_cast<double>(n));
    const double mu_hat = mean_model_estimate(sample, weight);
    std::vector<double> out(b);
    parallel_for(b, workers, [&](std::size_t i) {
        RandomStream stream = rng.split(i);
        const auto rows = draw_bootstrap_indices(n, stream);
        out[i] = root_n * (mean_model_resample_estimate(sample, rows, weight) - mu_hat);
    });
    return EmpiricalSample(std::move(out));
}

} // namespace modelavg
