#include "arffklms/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "arffklms/filters.hpp"
#include "arffklms/seeding.hpp"

namespace arffklms {

const char* to_string(FilterKind kind) noexcept {
    switch (kind) {
        case FilterKind::arff_gklms: return "arff-gklms";
        case FilterKind::rff_gklms: return "rff-gklms";
        case FilterKind::gklms_cs: return "gklms-cs";
    }
    return "unknown";
}

std::optional<FilterKind> parse_filter_kind(std::string_view name) noexcept {
    if (name == "arff-gklms") return FilterKind::arff_gklms;
    if (name == "rff-gklms") return FilterKind::rff_gklms;
    if (name == "gklms-cs") return FilterKind::gklms_cs;
    return std::nullopt;
}

namespace {

bool valid_label(const std::string& label) {
    if (label.empty()) return false;
    return std::all_of(label.begin(), label.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '-' || c == '_' || c == '.';
    });
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }
bool nonnegative_finite(double v) { return v >= 0.0 && std::isfinite(v); }

void validate_filter(const FilterConfig& f, const std::string& at) {
    if (!valid_label(f.label)) {
        throw ConfigError(at + ".label must be non-empty and use only [A-Za-z0-9._-]");
    }
    if (!nonnegative_finite(f.eta_alpha)) throw ConfigError(at + ".eta_alpha must be >= 0");
    if (!positive_finite(f.xi)) throw ConfigError(at + ".xi must be positive");
    switch (f.kind) {
        case FilterKind::arff_gklms:
            if (!nonnegative_finite(f.eta_omega)) throw ConfigError(at + ".eta_omega must be >= 0");
            if (!nonnegative_finite(f.eta_b)) throw ConfigError(at + ".eta_b must be >= 0");
            [[fallthrough]];
        case FilterKind::rff_gklms:
            if (f.features == 0) throw ConfigError(at + ".features must be at least 1");
            break;
        case FilterKind::gklms_cs:
            if (!(f.delta_kappa > 0.0 && f.delta_kappa < 1.0)) {
                throw ConfigError(at + ".delta_kappa must lie in (0, 1)");
            }
            if (f.capacity && *f.capacity == 0) throw ConfigError(at + ".capacity must be positive");
            break;
    }
}

bool is_rff_family(FilterKind kind) { return kind != FilterKind::gklms_cs; }

OmegaSnapshot snapshot_of(const FeatureBank& bank, const char* stage) {
    return {stage, bank.features(), bank.input_dim(),
            std::vector<double>(bank.omegas().begin(), bank.omegas().end())};
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
    if (cfg.runs == 0) throw ConfigError("runs must be at least 1");
    if (cfg.horizon == 0) throw ConfigError("horizon must be at least 1");
    if (cfg.steady_window == 0) throw ConfigError("steady_window must be at least 1");
    if (cfg.steady_window > cfg.horizon) throw ConfigError("steady_window must not exceed horizon");
    if (!(cfg.max_divergent_fraction >= 0.0 && cfg.max_divergent_fraction <= 1.0)) {
        throw ConfigError("max_divergent_fraction must lie in [0, 1]");
    }
    if (cfg.filters.empty()) throw ConfigError("filters must list at least one filter");
    for (std::size_t i = 0; i < cfg.filters.size(); ++i) {
        const std::string at = "filters[" + std::to_string(i) + "]";
        validate_filter(cfg.filters[i], at);
        for (std::size_t j = 0; j < i; ++j) {
            if (cfg.filters[j].label == cfg.filters[i].label) {
                throw ConfigError(at + ".label duplicates \"" + cfg.filters[i].label + "\"");
            }
        }
    }
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            try {
                validate(p.noise);
                if constexpr (std::is_same_v<T, StationaryPlantConfig>) {
                    validate(p.plant);
                    if (!(std::abs(p.input.rho) < 1.0)) throw ConfigError("rho must satisfy |rho| < 1");
                } else {
                    validate(PiecewisePlantSpec{p.change_step, p.d_init_1, p.d_init_2, cfg.horizon});
                }
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("plant: ") + e.what());
            }
        },
        cfg.plant);
}

std::size_t input_dim(const ExperimentConfig& cfg) {
    if (const auto* s = std::get_if<StationaryPlantConfig>(&cfg.plant)) {
        return s->plant.centers.empty() ? 0 : s->plant.centers.front().size();
    }
    return 2;
}

std::optional<std::size_t> change_step(const ExperimentConfig& cfg) {
    if (const auto* p = std::get_if<NonstationaryPlantConfig>(&cfg.plant)) return p->change_step;
    return std::nullopt;
}

SampleStream make_stream(const ExperimentConfig& cfg, std::size_t run) {
    const std::uint64_t seed = derive_seed(cfg.seed, run, streams::stream);
    if (const auto* s = std::get_if<StationaryPlantConfig>(&cfg.plant)) {
        return gen_stationary_stream(s->plant, s->input, s->noise, cfg.horizon, seed);
    }
    const auto& p = std::get<NonstationaryPlantConfig>(cfg.plant);
    return gen_nonstationary_stream({p.change_step, p.d_init_1, p.d_init_2, cfg.horizon}, p.noise,
                                    seed);
}

RunResult run_single(const ExperimentConfig& cfg, std::size_t run) {
    const SampleStream stream = make_stream(cfg, run);
    const std::uint64_t feature_seed = derive_seed(cfg.seed, run, streams::features);
    const auto change = change_step(cfg);

    RunResult result;
    result.run = run;
    result.emse.resize(cfg.filters.size());
    result.model_size.resize(cfg.filters.size());
    result.snapshots.resize(cfg.filters.size());

    for (std::size_t i = 0; i < cfg.filters.size(); ++i) {
        const FilterConfig& fc = cfg.filters[i];
        auto& emse = result.emse[i];
        auto& sizes = result.model_size[i];
        auto& snaps = result.snapshots[i];
        emse.resize(stream.size());
        sizes.resize(stream.size());

        auto drive = [&](auto& filter) {
            for (std::size_t n = 0; n < stream.size(); ++n) {
                const StepOutcome out = filter.step(stream.input(n), stream.observed[n]);
                emse[n] = emse_sample(stream.clean[n], out.prediction);
                sizes[n] = static_cast<double>(out.model_size);
                if constexpr (!std::is_same_v<std::decay_t<decltype(filter)>, GklmsCs>) {
                    if (cfg.snapshots && change && n == *change) {
                        snaps.push_back(snapshot_of(filter.bank(), "change"));
                    }
                }
            }
            if constexpr (!std::is_same_v<std::decay_t<decltype(filter)>, GklmsCs>) {
                if (cfg.snapshots) snaps.push_back(snapshot_of(filter.bank(), "final"));
            }
        };

        try {
            if (is_rff_family(fc.kind)) {
                // identical (xi, D) across RFF-family filters gives identical banks
                FeatureBank bank = sample_feature_bank(
                    {fc.xi, fc.features, stream.input_dim, feature_seed, AmplitudeConvention::unit});
                if (cfg.snapshots) snaps.push_back(snapshot_of(bank, "initial"));
                if (fc.kind == FilterKind::arff_gklms) {
                    ArffGklms filter(std::move(bank), {fc.eta_alpha, fc.eta_omega, fc.eta_b});
                    drive(filter);
                } else {
                    RffGklms filter(std::move(bank), fc.eta_alpha);
                    drive(filter);
                }
            } else {
                GklmsCs filter(GaussianKernel(fc.xi), stream.input_dim, fc.eta_alpha, fc.delta_kappa,
                               fc.capacity);
                drive(filter);
            }
        } catch (const DivergenceError& e) {
            result.diverged = true;
            result.message = fc.label + ": " + e.what();
            return result;
        }
    }
    return result;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
    validate(cfg);
    unsigned workers = options.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.runs));

    const std::size_t n_filters = cfg.filters.size();
    std::vector<CurveAccumulator> emse_acc(n_filters, CurveAccumulator(cfg.horizon, options.keep_runs));
    std::vector<CurveAccumulator> size_acc(n_filters, CurveAccumulator(cfg.horizon, options.keep_runs));

    RunArtifacts art;
    art.config = cfg;
    art.runs.resize(cfg.runs);
    art.filters.resize(n_filters);
    bool have_snapshots = false;

    std::vector<std::optional<RunResult>> pending(cfg.runs);
    std::size_t next_to_reduce = 0;
    std::mutex mutex;

    auto reduce = [&](RunResult& res) {
        art.runs[res.run] = {res.run, res.diverged, res.message};
        if (res.diverged) return;
        for (std::size_t i = 0; i < n_filters; ++i) {
            emse_acc[i].add(res.emse[i]);
            size_acc[i].add(res.model_size[i]);
        }
        if (!have_snapshots) {
            for (std::size_t i = 0; i < n_filters; ++i) {
                art.filters[i].snapshots = std::move(res.snapshots[i]);
            }
            art.snapshot_run = res.run;
            have_snapshots = true;
        }
    };

    std::atomic<std::size_t> next_run{0};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t r = next_run.fetch_add(1);
            if (r >= cfg.runs) return;
            try {
                RunResult res = run_single(cfg, r);
                std::lock_guard lock(mutex);
                pending[r] = std::move(res);
                while (next_to_reduce < cfg.runs && pending[next_to_reduce]) {
                    reduce(*pending[next_to_reduce]);
                    pending[next_to_reduce].reset();
                    ++next_to_reduce;
                }
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                failed = true;
                return;
            }
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    const auto diverged = static_cast<std::size_t>(
        std::count_if(art.runs.begin(), art.runs.end(), [](const RunStatus& s) { return s.diverged; }));
    art.included_runs = cfg.runs - diverged;
    if (art.included_runs == 0) throw ExperimentError("every run diverged");
    const double fraction = static_cast<double>(diverged) / static_cast<double>(cfg.runs);
    if (fraction > cfg.max_divergent_fraction) {
        std::string first;
        for (const auto& s : art.runs) {
            if (s.diverged) {
                first = "run " + std::to_string(s.run) + ": " + s.message;
                break;
            }
        }
        throw ExperimentError(std::to_string(diverged) + " of " + std::to_string(cfg.runs) +
                              " runs diverged (first: " + first + ")");
    }

    for (std::size_t i = 0; i < n_filters; ++i) {
        FilterArtifacts& fa = art.filters[i];
        fa.label = cfg.filters[i].label;
        fa.kind = cfg.filters[i].kind;
        fa.emse = emse_acc[i].finish();
        fa.model_size = size_acc[i].finish();
        fa.steady_state_emse = steady_state_emse(fa.emse, cfg.steady_window);
        fa.final_model_size = fa.model_size.mean.back();
    }
    return art;
}

ExperimentConfig with_xi(ExperimentConfig cfg, double xi) {
    for (auto& f : cfg.filters) f.xi = xi;
    return cfg;
}

}  // namespace arffklms
