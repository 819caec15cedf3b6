#include "modelavg/experiments.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "modelavg/errors.hpp"
#include "modelavg/format.hpp"
#include "modelavg/parallel.hpp"

namespace modelavg {

void Scenario::validate() const {
    params.validate();
    if (reps == 0) throw InvalidArgument("reps must be positive");
}

DesignMatrix frozen_design(std::uint64_t seed, std::size_t n) {
    auto rng = RandomStream::derive(seed, {kDesignDomain, n});
    return make_uniform_design(n, rng);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points == 0) throw InvalidArgument("grid must have at least one point");
    if (!(hi >= lo)) throw InvalidArgument("grid upper end must not be below the lower end");
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = lo;
        return grid;
    }
    const double span = hi - lo;
    const double last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = lo + span * (static_cast<double>(i) / last);
    }
    grid.back() = hi;
    return grid;
}

std::vector<EstimateBundle> simulate_bundles(const Scenario& scenario) {
    scenario.validate();
    const DesignStats stats = compute_design_stats(scenario.design, scenario.settings.sigma);
    std::vector<EstimateBundle> out(scenario.reps);
    parallel_for(scenario.reps, scenario.workers, [&](std::size_t r) {
        auto rng = RandomStream::derive(scenario.seed, {kResponseDomain, scenario.stream, r});
        const Dataset data = generate_response(scenario.design, scenario.params, rng);
        out[r] = scenario.settings.estimate(data, stats);
    });
    return out;
}

namespace {

double root_n(const DesignMatrix& design) { return std::sqrt(static_cast<double>(design.size())); }

EmpiricalSample scaled_errors(std::span<const EstimateBundle> bundles, Estimator e, double scale, double alpha) {
    std::vector<double> v(bundles.size());
    for (std::size_t r = 0; r < bundles.size(); ++r) v[r] = scale * (bundles[r].value(e) - alpha);
    return EmpiricalSample(std::move(v));
}

Scenario at_grid_point(const Scenario& tmpl, double beta, std::size_t index) {
    Scenario s = tmpl;
    s.params.beta = beta;
    s.stream = index;
    return s;
}

void require_grid(std::span<const double> grid) {
    if (grid.empty()) throw InvalidArgument("beta grid must be nonempty");
}

} // namespace

EmpiricalSample mc_sampling_distribution(const Scenario& scenario, Estimator estimator) {
    Scenario s = scenario;
    s.settings.with_exact_posterior = estimator == Estimator::BmaExact;
    const auto bundles = simulate_bundles(s);
    return scaled_errors(bundles, estimator, root_n(s.design), s.params.alpha);
}

std::vector<MseRow> mse_curve(std::span<const double> beta_grid, const Scenario& scenario_template) {
    require_grid(beta_grid);
    std::vector<MseRow> rows;
    rows.reserve(beta_grid.size());
    for (std::size_t g = 0; g < beta_grid.size(); ++g) {
        const Scenario s = at_grid_point(scenario_template, beta_grid[g], g);
        const auto bundles = simulate_bundles(s);
        MseRow row;
        row.beta = beta_grid[g];
        row.reps = s.reps;
        row.seed = s.seed;
        const double reps = static_cast<double>(s.reps);
        for (auto e : kAllEstimators) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (const auto& b : bundles) {
                const double d = b.value(e) - s.params.alpha;
                sum += d * d;
                sum_sq += d * d * d * d;
            }
            const double mean = sum / reps;
            const double var = s.reps > 1 ? std::max(0.0, (sum_sq - reps * mean * mean) / (reps - 1.0)) : 0.0;
            row.mse[static_cast<std::size_t>(e)] = mean;
            row.se[static_cast<std::size_t>(e)] = std::sqrt(var / reps);
        }
        rows.push_back(row);
    }
    return rows;
}

double ks_ratio(double ks_r, double ks_u) noexcept {
    const double total = ks_r + ks_u;
    if (total == 0.0) return 50.0;
    return 100.0 * ks_r / total;
}

std::vector<KsRatioRow> ks_ratio_curve(std::span<const double> beta_grid, const Scenario& scenario_template) {
    require_grid(beta_grid);
    std::vector<KsRatioRow> rows;
    rows.reserve(beta_grid.size());
    for (std::size_t g = 0; g < beta_grid.size(); ++g) {
        Scenario s = at_grid_point(scenario_template, beta_grid[g], g);
        s.settings.with_exact_posterior = false;
        const auto bundles = simulate_bundles(s);
        const double scale = root_n(s.design);
        const auto ref_r = scaled_errors(bundles, Estimator::Restricted, scale, s.params.alpha);
        const auto ref_u = scaled_errors(bundles, Estimator::Unrestricted, scale, s.params.alpha);
        KsRatioRow row;
        row.beta = beta_grid[g];
        row.reps = s.reps;
        row.seed = s.seed;
        for (std::size_t j = 0; j < kComparedEstimators.size(); ++j) {
            const auto sample = scaled_errors(bundles, kComparedEstimators[j], scale, s.params.alpha);
            row.ks_r[j] = ks_two_sample(sample, ref_r);
            row.ks_u[j] = ks_two_sample(sample, ref_u);
            row.ratio[j] = ks_ratio(row.ks_r[j], row.ks_u[j]);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ResamplingErrorRow> resampling_error_curve(std::span<const double> beta_grid,
                                                       const Scenario& scenario_template,
                                                       const ResamplingErrorConfig& config) {
    require_grid(beta_grid);
    if (config.datasets_per_beta == 0) throw InvalidArgument("datasets_per_beta must be positive");
    const bool bootstrap = config.method == ResamplingMethod::Bootstrap;
    const std::size_t n = scenario_template.design.size();
    const ResamplePlan plan = bootstrap ? ResamplePlan::bootstrap(config.b) : ResamplePlan::subsample(config.m, config.b);
    plan.validate(n);
    const std::uint64_t domain = bootstrap ? kBootstrapDomain : kSubsampleDomain;

    std::vector<ResamplingErrorRow> rows;
    rows.reserve(beta_grid.size());
    for (std::size_t g = 0; g < beta_grid.size(); ++g) {
        Scenario s = at_grid_point(scenario_template, beta_grid[g], g);
        s.settings.with_exact_posterior = false;
        const auto bundles = simulate_bundles(s);
        const double scale = root_n(s.design);
        std::vector<EmpiricalSample> truth;
        for (auto e : kComparedEstimators) truth.push_back(scaled_errors(bundles, e, scale, s.params.alpha));

        const EstimatorSettings settings = s.settings;
        const MultiEstimatorProcedure procedure = [&settings](const Dataset& d) {
            const auto b = settings.estimate(d);
            std::vector<double> out;
            out.reserve(kComparedEstimators.size());
            for (auto e : kComparedEstimators) out.push_back(b.value(e));
            return out;
        };

        struct PerDataset {
            bool excluded = false;
            std::vector<EmpiricalSample> samples;
        };
        std::vector<PerDataset> results(config.datasets_per_beta);
        parallel_for(config.datasets_per_beta, s.workers, [&](std::size_t d) {
            auto data_rng = RandomStream::derive(s.seed, {kDatasetDomain, g, d});
            const Dataset data = generate_response(s.design, s.params, data_rng);
            const auto resample_rng = RandomStream::derive(s.seed, {domain, g, d});
            try {
                results[d].samples = resample_distribution(data, procedure, plan, resample_rng, 1).samples;
            } catch (const TooManySingularResamples&) {
                results[d].excluded = true;
            }
        });

        ResamplingErrorRow row;
        row.beta = beta_grid[g];
        row.datasets = config.datasets_per_beta;
        row.b = config.b;
        row.seed = s.seed;
        for (const auto& r : results) row.excluded += r.excluded ? 1 : 0;
        const std::size_t kept = row.datasets - row.excluded;
        for (std::size_t j = 0; j < kComparedEstimators.size(); ++j) {
            if (kept == 0) {
                row.err[j] = std::nan("");
                continue;
            }
            if (config.aggregation == ErrorAggregation::MeanOfDatasets) {
                double sum = 0.0;
                for (const auto& r : results) {
                    if (!r.excluded) sum += ks_two_sample(truth[j], r.samples[j]);
                }
                row.err[j] = 100.0 * sum / static_cast<double>(kept);
            } else {
                std::vector<double> pooled;
                pooled.reserve(kept * config.b);
                for (const auto& r : results) {
                    if (r.excluded) continue;
                    const auto v = r.samples[j].values();
                    pooled.insert(pooled.end(), v.begin(), v.end());
                }
                row.err[j] = 100.0 * ks_two_sample(truth[j], EmpiricalSample(std::move(pooled)));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

EstimatorSettings with_sigma(EstimatorSettings settings, const TrueParams& params) {
    if (params.sigma > 0.0) settings.sigma = params.sigma;
    return settings;
}

} // namespace

std::vector<RiskRow> risk_bound_sweep(const TrueParams& params, std::span<const std::size_t> n_grid, std::size_t reps,
                                      std::uint64_t seed, const EstimatorSettings& settings, unsigned workers) {
    if (n_grid.empty()) throw InvalidArgument("n grid must be nonempty");
    std::vector<RiskRow> rows;
    for (const std::size_t n : n_grid) {
        Scenario s{frozen_design(seed, n), params, with_sigma(settings, params), reps, seed, n, workers};
        s.settings.with_exact_posterior = true;
        const auto bundles = simulate_bundles(s);
        const double dn = static_cast<double>(n);
        const double dr = static_cast<double>(reps);
        double sum = 0.0;
        double sum_sq = 0.0;
        for (const auto& b : bundles) {
            const double d = b.bma_exact - params.alpha;
            sum += d * d;
            sum_sq += d * d * d * d;
        }
        const double mean = sum / dr;
        const double var = reps > 1 ? std::max(0.0, (sum_sq - dr * mean * mean) / (dr - 1.0)) : 0.0;
        const DesignStats st = compute_design_stats(s.design, s.settings.sigma);
        RiskRow row;
        row.n = n;
        row.n_risk = dn * mean;
        row.mc_se = dn * std::sqrt(var / dr);
        row.n_var_u = dn * st.sigma * st.sigma * st.s22 / st.det;
        row.reps = reps;
        row.seed = seed;
        rows.push_back(row);
    }
    return rows;
}

std::vector<DecayRow> weight_decay_sweep(const TrueParams& params, std::span<const std::size_t> n_grid,
                                         std::size_t reps, std::uint64_t seed, const EstimatorSettings& settings,
                                         unsigned workers) {
    if (n_grid.empty()) throw InvalidArgument("n grid must be nonempty");
    if (reps == 0) throw InvalidArgument("reps must be positive");
    params.validate();
    std::vector<DecayRow> rows;
    for (const std::size_t n : n_grid) {
        const DesignMatrix design = frozen_design(seed, n);
        const EstimatorSettings est = with_sigma(settings, params);
        const DesignStats stats = compute_design_stats(design, est.sigma);
        const AdaptiveConfig tuning = est.adaptive_for(n);
        std::vector<double> p_r(reps);
        parallel_for(reps, workers, [&](std::size_t r) {
            auto rng = RandomStream::derive(seed, {kResponseDomain, n, r});
            const Dataset data = generate_response(design, params, rng);
            p_r[r] = adaptive_weights(fit_unrestricted(data, stats).beta_u, tuning).p_r();
        });
        double sum = 0.0;
        for (double p : p_r) sum += p;
        DecayRow row;
        row.n = n;
        row.mean_p_r = sum / static_cast<double>(reps);
        row.mean_sqrtn_p_r = std::sqrt(static_cast<double>(n)) * row.mean_p_r;
        row.reps = reps;
        row.seed = seed;
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string f(double x) { return format_double(x); }

} // namespace

void write_mse_csv(std::ostream& out, std::span<const MseRow> rows) {
    out << "beta,mse_ms,mse_bma_bic,mse_ama,mse_u,reps,seed\n";
    for (const auto& r : rows) {
        out << f(r.beta) << ',' << f(r.mse_of(Estimator::ModelSelection)) << ',' << f(r.mse_of(Estimator::BmaBic))
            << ',' << f(r.mse_of(Estimator::Ama)) << ',' << f(r.mse_of(Estimator::Unrestricted)) << ',' << r.reps
            << ',' << r.seed << '\n';
    }
}

void write_ks_ratio_csv(std::ostream& out, std::span<const KsRatioRow> rows) {
    out << "beta,ratio_ms,ratio_bma_bic,ratio_ama,ks_ms_r,ks_ms_u,ks_bma_r,ks_bma_u,ks_ama_r,ks_ama_u,reps,seed\n";
    for (const auto& r : rows) {
        out << f(r.beta);
        for (double v : r.ratio) out << ',' << f(v);
        for (std::size_t j = 0; j < 3; ++j) out << ',' << f(r.ks_r[j]) << ',' << f(r.ks_u[j]);
        out << ',' << r.reps << ',' << r.seed << '\n';
    }
}

void write_resampling_error_csv(std::ostream& out, std::span<const ResamplingErrorRow> rows) {
    out << "beta,err_ms,err_bma_bic,err_ama,datasets,b,excluded,seed\n";
    for (const auto& r : rows) {
        out << f(r.beta);
        for (double v : r.err) out << ',' << f(v);
        out << ',' << r.datasets << ',' << r.b << ',' << r.excluded << ',' << r.seed << '\n';
    }
}

void write_risk_bound_csv(std::ostream& out, std::span<const RiskRow> rows) {
    out << "n,n_risk,mc_se,reps,seed\n";
    for (const auto& r : rows) {
        out << r.n << ',' << f(r.n_risk) << ',' << f(r.mc_se) << ',' << r.reps << ',' << r.seed << '\n';
    }
}

void write_weight_decay_csv(std::ostream& out, std::span<const DecayRow> rows) {
    out << "n,mean_p_r,mean_sqrtn_p_r,reps,seed\n";
    for (const auto& r : rows) {
        out << r.n << ',' << f(r.mean_p_r) << ',' << f(r.mean_sqrtn_p_r) << ',' << r.reps << ',' << r.seed << '\n';
    }
}

} // namespace modelavg
