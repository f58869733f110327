#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "arffklms/error.hpp"
#include "arffklms/metrics.hpp"
#include "arffklms/systems.hpp"

namespace arffklms {

enum class FilterKind { arff_gklms, rff_gklms, gklms_cs };

const char* to_string(FilterKind kind) noexcept;
std::optional<FilterKind> parse_filter_kind(std::string_view name) noexcept;

/// Parameters of one filter. Which fields apply depends on `kind`:
/// ARFF uses eta_alpha/eta_omega/eta_b/features/xi, RFF eta_alpha/features/xi,
/// GKLMS-CS eta_alpha/xi/delta_kappa/capacity.
struct FilterConfig {
    FilterKind kind = FilterKind::arff_gklms;
    std::string label;
    double eta_alpha = 0.0;
    double eta_omega = 0.0;
    double eta_b = 0.0;
    std::size_t features = 0;
    double xi = 0.0;
    double delta_kappa = 0.0;
    std::optional<std::size_t> capacity;
};

struct StationaryPlantConfig {
    KernelPlantSpec plant = reference_kernel_plant();
    Ar1InputSpec input;
    NoiseSpec noise{15.0};
};

/// The horizon comes from ExperimentConfig::horizon.
struct NonstationaryPlantConfig {
    std::size_t change_step = 5000;
    double d_init_1 = 0.1;
    double d_init_2 = 0.1;
    NoiseSpec noise{25.0};
};

using PlantConfig = std::variant<StationaryPlantConfig, NonstationaryPlantConfig>;

struct ExperimentConfig {
    std::string name = "custom";
    PlantConfig plant;
    std::vector<FilterConfig> filters;
    std::size_t horizon = 20000;
    std::size_t runs = 200;
    std::uint64_t seed = 1;
    std::size_t steady_window = default_steady_state_window;
    double max_divergent_fraction = 0.01;
    bool snapshots = true;
    std::string output_dir;
};

/// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& cfg);

std::size_t input_dim(const ExperimentConfig& cfg);

/// Change point for nonstationary plants.
std::optional<std::size_t> change_step(const ExperimentConfig& cfg);

/// The stream run `run` sees, derived from the root seed.
SampleStream make_stream(const ExperimentConfig& cfg, std::size_t run);

/// Frequency vectors of one RFF-family filter at one stage of a run.
struct OmegaSnapshot {
    std::string stage;  // "initial", "change" or "final"
    std::size_t features = 0;
    std::size_t input_dim = 0;
    std::vector<double> omegas;  // row-major features x input_dim
};

struct FilterArtifacts {
    std::string label;
    FilterKind kind = FilterKind::arff_gklms;
    McAggregate emse;
    McAggregate model_size;
    double steady_state_emse = 0.0;
    double final_model_size = 0.0;
    std::vector<OmegaSnapshot> snapshots;  // from the first included run
};

struct RunStatus {
    std::size_t run = 0;
    bool diverged = false;
    std::string message;
};

struct RunArtifacts {
    ExperimentConfig config;
    std::vector<FilterArtifacts> filters;
    std::vector<RunStatus> runs;
    std::size_t included_runs = 0;
    std::size_t snapshot_run = 0;
};

/// Every run's EMSE curve, model-size curve and snapshots for all filters.
struct RunResult {
    std::size_t run = 0;
    bool diverged = false;
    std::string message;
    std::vector<std::vector<double>> emse;
    std::vector<std::vector<double>> model_size;
    std::vector<std::vector<OmegaSnapshot>> snapshots;
};

/// Runs every configured filter over the stream of one run.
RunResult run_single(const ExperimentConfig& cfg, std::size_t run);

class ExperimentError : public Error {
public:
    using Error::Error;
};

struct RunOptions {
    unsigned workers = 1;  // 0 selects the hardware concurrency
    bool keep_runs = false;
};

/// Monte Carlo benchmark. Runs are scheduled over `workers` threads and reduced
/// in run-index order, so the result does not depend on the worker count.
/// Diverged runs are excluded from the aggregates; throws ExperimentError when
/// their fraction exceeds cfg.max_divergent_fraction.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Copy of cfg with every filter bandwidth replaced.
ExperimentConfig with_xi(ExperimentConfig cfg, double xi);

}  // namespace arffklms
