#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modelavg/errors.hpp"
#include "modelavg/estimators.hpp"
#include "modelavg/experiments.hpp"

namespace modelavg::cli {

enum class Experiment { Figure1a, Figure1b, Figure2, RiskBound, Decay, Single };
enum class Figure2Methods { Bootstrap, Subsample, Both };

std::string_view experiment_name(Experiment e) noexcept;
std::optional<Experiment> parse_experiment(std::string_view name) noexcept;

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

struct ConfigKey {
    std::string_view name;
    std::string_view help;
};

/// Every key accepted in config files and as --flags.
const std::vector<ConfigKey>& config_keys();

/// One `key = value` assignment and where it came from.
struct Assignment {
    std::string key;
    std::string value;
    std::string origin;  ///< e.g. "run.cfg:4" or "--n"
};

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
std::vector<Assignment> read_config_text(std::istream& in, const std::string& source);
std::vector<Assignment> read_config_file(const std::filesystem::path& path);

struct RunConfig {
    Experiment experiment = Experiment::Figure1a;

    std::size_t n = 50;
    std::size_t reps = 5000;
    std::uint64_t seed = 20090101;
    unsigned workers = 0;  ///< 0 uses every hardware thread
    std::filesystem::path output = "modelavg_out";
    std::optional<std::filesystem::path> design_file;

    double alpha = 1.0;
    double sigma = 1.0;
    double beta = 0.5;  ///< single, riskbound and decay
    double beta_min = -1.0;
    double beta_max = 1.0;
    std::size_t beta_points = 41;
    std::vector<std::size_t> n_grid = {25, 50, 100, 200, 400, 800};

    std::string c = "bic";  ///< "aic", "bic" or a positive number
    PretestStatistic pretest_form = PretestStatistic::TRatio;
    std::optional<double> a_n;
    std::optional<double> k_n;
    double prior_var = 1.0;
    double prior_r = 0.5;

    Figure2Methods method = Figure2Methods::Both;
    std::size_t b = 500;
    std::size_t m = 20;
    std::size_t datasets_per_beta = 100;
    ErrorAggregation aggregation = ErrorAggregation::MeanOfDatasets;

    std::vector<double> beta_grid() const;
    EstimatorSettings estimator_settings() const;
    /// Fully resolved `key = value` lines, readable back by read_config_text.
    std::string echo() const;
};

/// Later sources win: defaults, MODELAVG_SEED, the config file, then flags.
RunConfig resolve_config(Experiment experiment, const std::vector<Assignment>& file_values,
                         const std::vector<Assignment>& flag_values, const char* env_seed);

} // namespace modelavg::cli
