#include "modelavg_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "modelavg/format.hpp"

namespace modelavg::cli {

namespace {

constexpr std::pair<Experiment, std::string_view> kExperimentNames[] = {
    {Experiment::Figure1a, "figure1a"}, {Experiment::Figure1b, "figure1b"}, {Experiment::Figure2, "figure2"},
    {Experiment::RiskBound, "riskbound"}, {Experiment::Decay, "decay"},     {Experiment::Single, "single"},
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(const Assignment& a, const std::string& what) {
    throw ConfigError(a.origin + ": key '" + a.key + "': " + what + ", got '" + a.value + "'");
}

std::uint64_t to_u64(const Assignment& a) {
    std::uint64_t v = 0;
    const auto* end = a.value.data() + a.value.size();
    const auto [ptr, ec] = std::from_chars(a.value.data(), end, v);
    if (a.value.empty() || ec != std::errc{} || ptr != end) fail(a, "expected a non-negative integer");
    return v;
}

std::size_t to_count(const Assignment& a) {
    const auto v = to_u64(a);
    if (v == 0) fail(a, "expected a positive integer");
    return static_cast<std::size_t>(v);
}

double to_real(const Assignment& a) {
    double v = 0.0;
    if (!parse_double(a.value, v) || !std::isfinite(v)) fail(a, "expected a finite number");
    return v;
}

double to_positive(const Assignment& a) {
    const double v = to_real(a);
    if (!(v > 0.0)) fail(a, "expected a positive number");
    return v;
}

std::optional<double> to_auto_positive(const Assignment& a) {
    if (a.value == "auto") return std::nullopt;
    return to_positive(a);
}

std::vector<std::size_t> to_count_list(const Assignment& a) {
    std::vector<std::size_t> out;
    std::stringstream ss(a.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Assignment part{a.key, trim(item), a.origin};
        const auto v = to_count(part);
        if (v < 2) fail(a, "every sample size must be at least 2");
        out.push_back(v);
    }
    if (out.empty()) fail(a, "expected a comma-separated list of sample sizes");
    return out;
}

template <class T>
T to_choice(const Assignment& a, std::initializer_list<std::pair<std::string_view, T>> choices) {
    std::string names;
    for (const auto& [name, value] : choices) {
        if (a.value == name) return value;
        names += names.empty() ? "" : "|";
        names += name;
    }
    fail(a, "expected one of " + names);
}

void apply(RunConfig& cfg, const Assignment& a) {
    const auto& k = a.key;
    if (k == "n") {
        cfg.n = to_count(a);
        if (cfg.n < 2) fail(a, "expected at least 2");
    } else if (k == "reps") {
        cfg.reps = to_count(a);
    } else if (k == "seed") {
        cfg.seed = to_u64(a);
    } else if (k == "workers") {
        const auto v = to_u64(a);
        if (v > 4096) fail(a, "expected at most 4096 workers");
        cfg.workers = static_cast<unsigned>(v);
    } else if (k == "output") {
        if (a.value.empty()) fail(a, "expected a directory");
        cfg.output = a.value;
    } else if (k == "design_file") {
        if (a.value.empty() || a.value == "none") cfg.design_file.reset();
        else cfg.design_file = a.value;
    } else if (k == "alpha") {
        cfg.alpha = to_real(a);
    } else if (k == "sigma") {
        cfg.sigma = to_real(a);
        if (cfg.sigma < 0.0) fail(a, "expected a non-negative number");
    } else if (k == "beta") {
        cfg.beta = to_real(a);
    } else if (k == "beta_min") {
        cfg.beta_min = to_real(a);
    } else if (k == "beta_max") {
        cfg.beta_max = to_real(a);
    } else if (k == "beta_points") {
        cfg.beta_points = to_count(a);
    } else if (k == "n_grid") {
        cfg.n_grid = to_count_list(a);
    } else if (k == "c") {
        if (a.value != "aic" && a.value != "bic") to_positive(a);
        cfg.c = a.value;
    } else if (k == "pretest_form") {
        cfg.pretest_form =
            to_choice<PretestStatistic>(a, {{"t", PretestStatistic::TRatio}, {"sqrtn", PretestStatistic::ScaledByRootN}});
    } else if (k == "a_n") {
        cfg.a_n = to_auto_positive(a);
    } else if (k == "k_n") {
        cfg.k_n = to_auto_positive(a);
    } else if (k == "prior_var") {
        cfg.prior_var = to_positive(a);
    } else if (k == "prior_r") {
        cfg.prior_r = to_real(a);
        if (!(cfg.prior_r > 0.0 && cfg.prior_r < 1.0)) fail(a, "expected a probability strictly between 0 and 1");
    } else if (k == "method") {
        cfg.method = to_choice<Figure2Methods>(
            a, {{"bootstrap", Figure2Methods::Bootstrap}, {"subsample", Figure2Methods::Subsample}, {"both", Figure2Methods::Both}});
    } else if (k == "b") {
        cfg.b = to_count(a);
    } else if (k == "m") {
        cfg.m = to_count(a);
        if (cfg.m < 2) fail(a, "expected at least 2");
    } else if (k == "datasets_per_beta") {
        cfg.datasets_per_beta = to_count(a);
    } else if (k == "aggregation") {
        cfg.aggregation =
            to_choice<ErrorAggregation>(a, {{"mean", ErrorAggregation::MeanOfDatasets}, {"pooled", ErrorAggregation::Pooled}});
    } else {
        throw ConfigError(a.origin + ": unknown key '" + k + "'");
    }
}

std::string join(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

} // namespace

std::string_view experiment_name(Experiment e) noexcept {
    for (const auto& [value, name] : kExperimentNames)
        if (value == e) return name;
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) noexcept {
    for (const auto& [value, n] : kExperimentNames)
        if (n == name) return value;
    return std::nullopt;
}

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = {
        {"n", "sample size of the frozen design"},
        {"reps", "Monte Carlo replications per grid point"},
        {"seed", "master seed (also read from MODELAVG_SEED)"},
        {"workers", "worker threads, 0 for all hardware threads"},
        {"output", "output directory"},
        {"design_file", "design CSV (i,x1,x2) used instead of the generated design"},
        {"alpha", "true alpha"},
        {"sigma", "noise standard deviation"},
        {"beta", "true beta for single, riskbound and decay"},
        {"beta_min", "lowest beta of the grid"},
        {"beta_max", "highest beta of the grid"},
        {"beta_points", "number of equispaced grid points"},
        {"n_grid", "comma-separated sample sizes for riskbound and decay"},
        {"c", "pretest threshold: aic, bic or a positive number"},
        {"pretest_form", "pretest statistic: t or sqrtn"},
        {"a_n", "adaptive slope, auto for (log n)^2"},
        {"k_n", "adaptive window, auto for sqrt(log n / n)"},
        {"prior_var", "prior variance of the exact posterior weights"},
        {"prior_r", "prior probability of the restricted model"},
        {"method", "figure2 resampler: bootstrap, subsample or both"},
        {"b", "resamples per dataset"},
        {"m", "subsample size"},
        {"datasets_per_beta", "datasets per grid point in figure2"},
        {"aggregation", "figure2 error aggregation: mean or pooled"},
    };
    return keys;
}

std::vector<Assignment> read_config_text(std::istream& in, const std::string& source) {
    std::vector<Assignment> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto origin = source + ":" + std::to_string(number);
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value', got '" + body + "'");
        Assignment a{trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)), origin};
        if (a.key.empty()) throw ConfigError(origin + ": missing key before '='");
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<Assignment> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return read_config_text(in, path.string());
}

std::vector<double> RunConfig::beta_grid() const { return linear_grid(beta_min, beta_max, beta_points); }

EstimatorSettings RunConfig::estimator_settings() const {
    EstimatorSettings s;
    if (c == "aic") s.pretest_c = PretestConfig::aic().c;
    else if (c != "bic") parse_double(c, s.pretest_c.emplace());
    s.pretest_statistic = pretest_form;
    s.a_n = a_n;
    s.k_n = k_n;
    s.prior = PosteriorPrior{prior_var, prior_r};
    s.with_exact_posterior = experiment == Experiment::RiskBound || experiment == Experiment::Single;
    return s;
}

std::string RunConfig::echo() const {
    std::ostringstream out;
    auto line = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    out << "# experiment: " << experiment_name(experiment) << '\n';
    line("n", std::to_string(n));
    line("reps", std::to_string(reps));
    line("seed", std::to_string(seed));
    line("workers", std::to_string(workers));
    line("output", output.string());
    line("design_file", design_file ? design_file->string() : "none");
    line("alpha", format_double(alpha));
    line("sigma", format_double(sigma));
    line("beta", format_double(beta));
    line("beta_min", format_double(beta_min));
    line("beta_max", format_double(beta_max));
    line("beta_points", std::to_string(beta_points));
    line("n_grid", join(n_grid));
    line("c", c);
    line("pretest_form", pretest_form == PretestStatistic::TRatio ? "t" : "sqrtn");
    line("a_n", a_n ? format_double(*a_n) : "auto");
    line("k_n", k_n ? format_double(*k_n) : "auto");
    line("prior_var", format_double(prior_var));
    line("prior_r", format_double(prior_r));
    line("method", method == Figure2Methods::Bootstrap ? "bootstrap" : method == Figure2Methods::Subsample ? "subsample" : "both");
    line("b", std::to_string(b));
    line("m", std::to_string(m));
    line("datasets_per_beta", std::to_string(datasets_per_beta));
    line("aggregation", aggregation == ErrorAggregation::Pooled ? "pooled" : "mean");
    return out.str();
}

RunConfig resolve_config(Experiment experiment, const std::vector<Assignment>& file_values,
                         const std::vector<Assignment>& flag_values, const char* env_seed) {
    RunConfig cfg;
    cfg.experiment = experiment;
    if (experiment == Experiment::Figure2) {
        cfg.beta_min = -0.4;
        cfg.beta_max = 0.4;
        cfg.beta_points = 17;
    }
    if (env_seed != nullptr && *env_seed != '\0') apply(cfg, Assignment{"seed", trim(env_seed), "MODELAVG_SEED"});

    // keep the origin of the last assignment of n and m for cross-key messages
    std::map<std::string, std::string> origin_of;
    for (const auto* source : {&file_values, &flag_values}) {
        for (const auto& a : *source) {
            apply(cfg, a);
            origin_of[a.key] = a.origin;
        }
    }
    auto where = [&](const std::string& key) {
        const auto it = origin_of.find(key);
        return it == origin_of.end() ? std::string("default") : it->second;
    };

    if (cfg.design_file) {
        std::ifstream in(*cfg.design_file);
        if (!in) throw ConfigError(where("design_file") + ": cannot open design file " + cfg.design_file->string());
        const auto size = read_design_csv(in).size();
        if (origin_of.count("n") && size != cfg.n)
            throw ConfigError("n = " + std::to_string(cfg.n) + " (" + where("n") + ") disagrees with design_file, which has " +
                              std::to_string(size) + " rows");
        cfg.n = size;
    }
    const bool uses_m = origin_of.count("m") || (experiment == Experiment::Figure2 && cfg.method != Figure2Methods::Bootstrap);
    if (uses_m && cfg.m > cfg.n)
        throw ConfigError("m = " + std::to_string(cfg.m) + " (" + where("m") + ") exceeds n = " + std::to_string(cfg.n) +
                          " (" + where("n") + "); the subsample size m must not exceed n");
    if (cfg.beta_points == 0) throw ConfigError("the beta grid is empty");
    if (cfg.beta_points > 1 && !(cfg.beta_min < cfg.beta_max))
        throw ConfigError("beta_min (" + where("beta_min") + ") must be below beta_max (" + where("beta_max") + ")");
    return cfg;
}

} // namespace modelavg::cli
