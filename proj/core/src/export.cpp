#include "arffklms/export.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "arffklms/config.hpp"
#include "number_format.hpp"

namespace arffklms {

namespace {

namespace fs = std::filesystem;
using detail::format_double;

// dB with -inf for an exactly zero mean
std::string db_cell(double linear) { return linear > 0.0 ? format_double(to_db(linear)) : "-inf"; }

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string emse_csv(const RunArtifacts& art) {
    std::ostringstream out;
    out << "n";
    for (const auto& f : art.filters) out << ',' << f.label << "_emse_db";
    for (const auto& f : art.filters) out << ',' << f.label << "_model_size";
    out << '\n';
    const std::size_t steps = art.filters.empty() ? 0 : art.filters.front().emse.mean.size();
    for (std::size_t n = 0; n < steps; ++n) {
        out << n;
        for (const auto& f : art.filters) out << ',' << db_cell(f.emse.mean[n]);
        for (const auto& f : art.filters) out << ',' << format_double(f.model_size.mean[n]);
        out << '\n';
    }
    return out.str();
}

std::string summary_csv(const RunArtifacts& art) {
    std::ostringstream out;
    out << "filter,steady_state_emse,steady_state_emse_db,final_model_size\n";
    for (const auto& f : art.filters) {
        out << f.label << ',' << format_double(f.steady_state_emse) << ','
            << db_cell(f.steady_state_emse) << ',' << format_double(f.final_model_size) << '\n';
    }
    return out.str();
}

std::string snapshots_csv(const RunArtifacts& art) {
    std::ostringstream out;
    const std::size_t dim = input_dim(art.config);
    out << "filter,stage,feature";
    for (std::size_t l = 0; l < dim; ++l) out << ",omega_" << (l + 1);
    out << '\n';
    for (const auto& f : art.filters) {
        for (const auto& s : f.snapshots) {
            for (std::size_t m = 0; m < s.features; ++m) {
                out << f.label << ',' << s.stage << ',' << m;
                for (std::size_t l = 0; l < s.input_dim; ++l) {
                    out << ',' << format_double(s.omegas[m * s.input_dim + l]);
                }
                out << '\n';
            }
        }
    }
    return out.str();
}

std::string manifest_json(const RunArtifacts& art, const std::vector<std::string>& files) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config_to_json(art.config));
    j["seed"] = art.config.seed;
    j["runs"] = art.config.runs;
    j["included_runs"] = art.included_runs;
    j["snapshot_run"] = art.snapshot_run;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : art.runs) {
        nlohmann::json jr = {{"run", r.run}, {"diverged", r.diverged}};
        if (r.diverged) jr["message"] = r.message;
        runs.push_back(std::move(jr));
    }
    j["run_status"] = std::move(runs);
    j["files"] = files;
    return j.dump(2) + "\n";
}

}  // namespace

std::vector<fs::path> export_artifacts(const RunArtifacts& art, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    const std::vector<std::string> names = {"emse.csv", "summary.csv", "omega_snapshots.csv",
                                            "manifest.json"};
    write_file(out_dir / names[0], emse_csv(art));
    write_file(out_dir / names[1], summary_csv(art));
    write_file(out_dir / names[2], snapshots_csv(art));
    write_file(out_dir / names[3], manifest_json(art, names));

    std::vector<fs::path> paths;
    for (const auto& n : names) paths.push_back(out_dir / n);
    return paths;
}

}  // namespace arffklms
