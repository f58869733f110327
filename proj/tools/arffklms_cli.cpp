// arffklms: Monte Carlo benchmarks of kernel LMS filters with (adaptive)
// random Fourier features.
//
//   arffklms list-presets
//   arffklms validate --config cfg.json
//   arffklms run stationary-paper --runs 50 --out out/stat --workers 4
//   arffklms run --config cfg.json --sweep xi=0.5:2:0.25
//   arffklms stream nonstationary-paper --run 3 --out stream.csv

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "arffklms/config.hpp"
#include "arffklms/experiment.hpp"
#include "arffklms/export.hpp"
#include "arffklms/metrics.hpp"

namespace {

using namespace arffklms;

struct Overrides {
    std::string target;
    std::string config_path;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    std::optional<std::string> out;
};

ExperimentConfig resolve(const Overrides& o) {
    if (!o.target.empty() && !o.config_path.empty()) {
        throw ConfigError("give either a preset name or --config, not both");
    }
    if (o.target.empty() && o.config_path.empty()) {
        throw ConfigError("a preset name or --config PATH is required");
    }
    ExperimentConfig cfg = o.config_path.empty() ? preset(o.target) : load_config(o.config_path);
    if (o.runs) cfg.runs = *o.runs;
    if (o.seed) cfg.seed = *o.seed;
    if (o.horizon) {
        cfg.horizon = *o.horizon;
        if (cfg.steady_window > cfg.horizon) cfg.steady_window = cfg.horizon;
    }
    if (o.out) cfg.output_dir = *o.out;
    if (cfg.output_dir.empty()) cfg.output_dir = "out/" + cfg.name;
    validate(cfg);
    return cfg;
}

void add_target_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("preset", o.target, "Built-in preset name (see list-presets)");
    cmd->add_option("--config", o.config_path, "JSON experiment description");
    cmd->add_option("--seed", o.seed, "Root seed");
    cmd->add_option("--horizon", o.horizon, "Number of samples per run");
}

void print_summary(const RunArtifacts& art) {
    std::printf("%-16s %14s %14s %12s\n", "filter", "steady EMSE", "steady dB", "model size");
    for (const auto& f : art.filters) {
        const double db = f.steady_state_emse > 0 ? to_db(f.steady_state_emse) : -std::numeric_limits<double>::infinity();
        std::printf("%-16s %14.6g %14.3f %12.2f\n", f.label.c_str(), f.steady_state_emse, db,
                    f.final_model_size);
    }
    const std::size_t diverged = art.config.runs - art.included_runs;
    if (diverged > 0) std::printf("%zu of %zu runs diverged and were excluded\n", diverged, art.config.runs);
}

std::string format_xi(double xi) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", xi);
    return buf;
}

int cmd_run(const Overrides& o, unsigned workers, const std::string& sweep) {
    const ExperimentConfig base = resolve(o);
    if (sweep.empty()) {
        const RunArtifacts art = run_experiment(base, {workers});
        const auto files = export_artifacts(art, base.output_dir);
        print_summary(art);
        for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
        return 0;
    }

    const auto values = parse_xi_sweep(sweep);
    const std::filesystem::path root = base.output_dir;
    std::ostringstream table;
    table << "xi,filter,steady_state_emse,final_model_size\n";
    for (double xi : values) {
        ExperimentConfig cfg = with_xi(base, xi);
        cfg.output_dir = (root / ("xi_" + format_xi(xi))).string();
        const RunArtifacts art = run_experiment(cfg, {workers});
        export_artifacts(art, cfg.output_dir);
        std::printf("xi = %s\n", format_xi(xi).c_str());
        print_summary(art);
        for (const auto& f : art.filters) {
            table << format_xi(xi) << ',' << f.label << ',' << f.steady_state_emse << ','
                  << f.final_model_size << '\n';
        }
    }
    std::filesystem::create_directories(root);
    std::ofstream out(root / "sweep_summary.csv");
    if (!out) throw IoError("cannot write " + (root / "sweep_summary.csv").string());
    out << table.str();
    std::printf("wrote %s\n", (root / "sweep_summary.csv").string().c_str());
    return 0;
}

int cmd_stream(const Overrides& o, std::size_t run) {
    const ExperimentConfig cfg = resolve(o);
    const SampleStream stream = make_stream(cfg, run);
    if (!o.out || *o.out == "-") {
        write_stream_csv(stream, std::cout);
        return 0;
    }
    std::ofstream out(*o.out);
    if (!out) throw IoError("cannot write " + *o.out);
    write_stream_csv(stream, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel LMS benchmarks with adaptive random Fourier features"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list-presets", "List built-in experiments");

    std::string validate_path;
    auto* check = app.add_subcommand("validate", "Validate an experiment config file");
    check->add_option("--config", validate_path, "JSON experiment description")->required();

    Overrides run_opts;
    unsigned workers = 0;
    std::string sweep;
    auto* run = app.add_subcommand("run", "Run a Monte Carlo benchmark and export curves");
    add_target_options(run, run_opts);
    run->add_option("--runs", run_opts.runs, "Monte Carlo run count");
    run->add_option("--out", run_opts.out, "Output directory");
    run->add_option("--workers", workers, "Worker threads (0 = all cores)");
    run->add_option("--sweep", sweep, "Bandwidth sweep, e.g. xi=0.5:2:0.25");

    Overrides stream_opts;
    std::size_t stream_run = 0;
    auto* stream = app.add_subcommand("stream", "Dump one run's sample stream as CSV");
    add_target_options(stream, stream_opts);
    stream->add_option("--run", stream_run, "Run index");
    stream->add_option("--out", stream_opts.out, "Output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& name : preset_names()) {
                const ExperimentConfig cfg = preset(name);
                std::printf("%-22s horizon=%zu runs=%zu filters=", name.c_str(), cfg.horizon, cfg.runs);
                for (std::size_t i = 0; i < cfg.filters.size(); ++i) {
                    std::printf("%s%s", i ? "," : "", cfg.filters[i].label.c_str());
                }
                std::printf("\n");
            }
            return 0;
        }
        if (*check) {
            const ExperimentConfig cfg = load_config(validate_path);
            std::printf("%s: ok (%zu filters, horizon %zu, %zu runs)\n", validate_path.c_str(),
                        cfg.filters.size(), cfg.horizon, cfg.runs);
            return 0;
        }
        if (*run) return cmd_run(run_opts, workers, sweep);
        if (*stream) return cmd_stream(stream_opts, stream_run);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
