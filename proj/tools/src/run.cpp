#include "modelavg_cli/run.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "modelavg/format.hpp"
#include "modelavg/parallel.hpp"
#include "modelavg_cli/svg.hpp"

namespace modelavg::cli {

namespace {

namespace fs = std::filesystem;

/// Files written by one run; removed again unless the run completes.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
    Outputs(const Outputs&) = delete;
    Outputs& operator=(const Outputs&) = delete;
    ~Outputs() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body, std::ostream& log) {
        const auto path = dir_ / name;
        written_.push_back(path);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot create " + path.string());
        body(out);
        out.flush();
        if (!out) throw Error("failed writing " + path.string());
        log << "wrote " << path.string() << '\n';
    }

    void commit() noexcept { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

template <class Row, class F>
std::vector<double> column(const std::vector<Row>& rows, F f) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(f(r));
    return out;
}

std::size_t slot(Estimator e) {
    for (std::size_t j = 0; j < kComparedEstimators.size(); ++j)
        if (kComparedEstimators[j] == e) return j;
    return 0;
}

template <class Row, class F>
std::vector<Series> compared_series(const std::vector<Row>& rows, F value) {
    std::vector<double> x = column(rows, [](const Row& r) { return r.beta; });
    return {
        {"BMA (BIC)", x, column(rows, [&](const Row& r) { return value(r, Estimator::BmaBic); }), LineStyle::Solid},
        {"MS", x, column(rows, [&](const Row& r) { return value(r, Estimator::ModelSelection); }), LineStyle::Dashed},
        {"AMA", x, column(rows, [&](const Row& r) { return value(r, Estimator::Ama); }), LineStyle::Dotted},
    };
}

void write_plot(Outputs& outputs, const std::string& name, const PlotSpec& plot, std::ostream& log) {
    outputs.write(name, [&](std::ostream& o) { write_svg(o, plot); }, log);
}

void run_experiment(const RunConfig& cfg, Outputs& outputs, std::ostream& log) {
    const unsigned workers = resolve_workers(cfg.workers);
    auto settings = cfg.estimator_settings();
    settings.sigma = cfg.sigma > 0.0 ? cfg.sigma : 1.0;
    const TrueParams params{cfg.alpha, cfg.beta, cfg.sigma};

    if (cfg.experiment == Experiment::RiskBound || cfg.experiment == Experiment::Decay) {
        if (cfg.design_file) throw ConfigError("design_file cannot be used with the n_grid sweeps");
        if (cfg.experiment == Experiment::RiskBound) {
            const auto rows = risk_bound_sweep(params, cfg.n_grid, cfg.reps, cfg.seed, settings, workers);
            outputs.write("risk_bound.csv", [&](std::ostream& o) { write_risk_bound_csv(o, rows); }, log);
            const auto ns = column(rows, [](const RiskRow& r) { return static_cast<double>(r.n); });
            write_plot(outputs, "risk_bound.svg",
                       {"Normalized risk of exact-posterior BMA", "n", "n x MSE", true,
                        {{"BMA (exact)", ns, column(rows, [](const RiskRow& r) { return r.n_risk; }), LineStyle::Solid},
                         {"U", ns, column(rows, [](const RiskRow& r) { return r.n_var_u; }), LineStyle::DotDash}}},
                       log);
        } else {
            const auto rows = weight_decay_sweep(params, cfg.n_grid, cfg.reps, cfg.seed, settings, workers);
            outputs.write("weight_decay.csv", [&](std::ostream& o) { write_weight_decay_csv(o, rows); }, log);
            const auto ns = column(rows, [](const DecayRow& r) { return static_cast<double>(r.n); });
            write_plot(outputs, "weight_decay.svg",
                       {"Adaptive weight on the restricted model", "n", "mean", true,
                        {{"sqrt(n) p_R", ns, column(rows, [](const DecayRow& r) { return r.mean_sqrtn_p_r; }), LineStyle::Solid},
                         {"p_R", ns, column(rows, [](const DecayRow& r) { return r.mean_p_r; }), LineStyle::Dashed}}},
                       log);
        }
        return;
    }

    DesignMatrix design = [&] {
        if (!cfg.design_file) return frozen_design(cfg.seed, cfg.n);
        std::ifstream in(*cfg.design_file);
        if (!in) throw Error("cannot open design file " + cfg.design_file->string());
        return read_design_csv(in);
    }();
    outputs.write("design_n" + std::to_string(design.size()) + ".csv",
                  [&](std::ostream& o) { write_design_csv(o, design); }, log);

    if (cfg.experiment == Experiment::Single) {
        auto rng = RandomStream::derive(cfg.seed, {kResponseDomain, 0, 0});
        const auto data = generate_response(design, params, rng);
        const auto bundle = settings.estimate(data);
        outputs.write("single.csv",
                      [&](std::ostream& o) {
                          o << "estimator,value\n";
                          for (auto e : kAllEstimators) o << estimator_name(e) << ',' << format_double(bundle.value(e)) << '\n';
                      },
                      log);
        return;
    }

    Scenario scenario{std::move(design), params, settings, cfg.reps, cfg.seed, 0, workers};
    const auto grid = cfg.beta_grid();

    if (cfg.experiment == Experiment::Figure1a) {
        const auto rows = mse_curve(grid, scenario);
        outputs.write("mse_curve.csv", [&](std::ostream& o) { write_mse_csv(o, rows); }, log);
        auto series = compared_series(rows, [](const MseRow& r, Estimator e) { return r.mse_of(e); });
        series.push_back({"U", series.front().x, column(rows, [](const MseRow& r) { return r.mse_of(Estimator::Unrestricted); }),
                          LineStyle::DotDash});
        write_plot(outputs, "mse_curve.svg", {"Mean squared error", "beta", "MSE", false, std::move(series)}, log);
    } else if (cfg.experiment == Experiment::Figure1b) {
        const auto rows = ks_ratio_curve(grid, scenario);
        outputs.write("ks_ratio.csv", [&](std::ostream& o) { write_ks_ratio_csv(o, rows); }, log);
        write_plot(outputs, "ks_ratio.svg",
                   {"KS ratio", "beta", "100 KS_R / (KS_R + KS_U)", false,
                    compared_series(rows, [](const KsRatioRow& r, Estimator e) { return r.ratio[slot(e)]; })},
                   log);
    } else {
        std::vector<std::pair<ResamplingMethod, std::string>> methods;
        if (cfg.method != Figure2Methods::Subsample) methods.emplace_back(ResamplingMethod::Bootstrap, "bootstrap");
        if (cfg.method != Figure2Methods::Bootstrap) methods.emplace_back(ResamplingMethod::Subsample, "subsample");
        for (const auto& [method, name] : methods) {
            ResamplingErrorConfig rc{method, cfg.m, cfg.datasets_per_beta, cfg.b, cfg.aggregation};
            const auto rows = resampling_error_curve(grid, scenario, rc);
            outputs.write("resamp_error_" + name + ".csv", [&](std::ostream& o) { write_resampling_error_csv(o, rows); }, log);
            write_plot(outputs, "resamp_error_" + name + ".svg",
                       {"Resampling error (" + name + ")", "beta", "100 x KS distance", false,
                        compared_series(rows, [](const ResamplingErrorRow& r, Estimator e) { return r.err[slot(e)]; })},
                       log);
        }
    }
}

} // namespace

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
    std::error_code ec;
    fs::create_directories(config.output, ec);
    if (ec) {
        err << "error: cannot create output directory " << config.output.string() << ": " << ec.message() << '\n';
        return 1;
    }
    Outputs outputs(config.output);
    try {
        outputs.write("resolved_config.txt", [&](std::ostream& o) { o << config.echo(); }, log);
        run_experiment(config, outputs, log);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    outputs.commit();
    return 0;
}

int main_entry(int argc, const char* const* argv) {
    CLI::App app{"Model selection and model averaging simulation laboratory", "modelavg"};
    app.require_subcommand(1);
    std::string config_file;
    std::map<std::string, std::string> values;
    std::vector<CLI::App*> subs;
    const std::map<std::string, std::string> about = {
        {"figure1a", "MSE curves of MS, BMA (BIC), AMA and U over a beta grid"},
        {"figure1b", "KS ratio curves locating MS, BMA and AMA between R and U"},
        {"figure2", "bootstrap and subsampling KS error curves"},
        {"riskbound", "normalized risk of exact-posterior BMA over n_grid"},
        {"decay", "adaptive weight decay over n_grid"},
        {"single", "all six estimates on one simulated dataset"},
    };
    for (const auto& [name, help] : about) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_file, "config file of key = value lines")->check(CLI::ExistingFile);
        for (const auto& key : config_keys())
            sub->add_option("--" + std::string(key.name), values[std::string(key.name)], std::string(key.help));
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (auto* sub : subs) {
        if (!sub->parsed()) continue;
        try {
            std::vector<Assignment> flags;
            for (const auto& key : config_keys()) {
                const std::string name(key.name);
                if (sub->count("--" + name) > 0) flags.push_back({name, values[name], "--" + name});
            }
            const auto file = config_file.empty() ? std::vector<Assignment>{} : read_config_file(config_file);
            const auto cfg = resolve_config(*parse_experiment(sub->get_name()), file, flags, std::getenv("MODELAVG_SEED"));
            return run(cfg, std::cerr, std::cerr);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
    }
    return 2;
}

} // namespace modelavg::cli
