#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"

#include "arffklms/config.hpp"
#include "arffklms/experiment.hpp"
#include "arffklms/export.hpp"
#include "arffklms/seeding.hpp"

using namespace arffklms;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small(const std::string& name, std::size_t runs, std::size_t horizon) {
    ExperimentConfig cfg = preset(name);
    cfg.runs = runs;
    cfg.horizon = horizon;
    cfg.steady_window = std::min(cfg.steady_window, horizon);
    if (auto* p = std::get_if<NonstationaryPlantConfig>(&cfg.plant)) p->change_step = horizon / 2;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("arffklms_test_" + name);
    fs::remove_all(dir);
    return dir;
}

const FilterConfig& by_kind(const ExperimentConfig& cfg, FilterKind kind) {
    for (const auto& f : cfg.filters)
        if (f.kind == kind) return f;
    throw std::logic_error("missing filter");
}

}  // namespace

TEST_CASE("stationary preset carries the published settings") {
    const auto cfg = preset("stationary-paper");
    const auto& cs = by_kind(cfg, FilterKind::gklms_cs);
    const auto& rff = by_kind(cfg, FilterKind::rff_gklms);
    const auto& arff = by_kind(cfg, FilterKind::arff_gklms);
    CHECK(cs.eta_alpha == 0.2);
    CHECK(cs.xi == 0.95);
    CHECK(cs.delta_kappa == 0.7);
    CHECK(rff.eta_alpha == 0.01);
    CHECK(rff.features == 48);
    CHECK(arff.eta_alpha == 0.005);
    CHECK(arff.eta_omega == 1.0);
    CHECK(arff.eta_b == 1.0);
    CHECK(arff.features == 48);
    CHECK(arff.xi == 0.95);
    CHECK(cfg.runs == 200);
    CHECK(cfg.horizon == 20000);
    CHECK(cfg.steady_window == 5000);
    const auto& plant = std::get<StationaryPlantConfig>(cfg.plant);
    CHECK(plant.input.rho == 0.5);
    CHECK(plant.noise.snr_db == 15.0);
    CHECK(plant.plant.xi_star == 0.95);
    CHECK(plant.plant.weights == std::vector<double>{0.756, -1.384, -0.101, 0.445, -0.565, 0.134});
    CHECK(plant.plant.centers[3] == std::vector<double>{2.90, 1.92});
}

TEST_CASE("nonstationary preset carries the published settings") {
    const auto cfg = preset("nonstationary-paper");
    const auto& cs = by_kind(cfg, FilterKind::gklms_cs);
    const auto& rff = by_kind(cfg, FilterKind::rff_gklms);
    const auto& arff = by_kind(cfg, FilterKind::arff_gklms);
    CHECK(cs.eta_alpha == 0.05);
    CHECK(cs.delta_kappa == 0.9);
    CHECK(rff.eta_alpha == 0.005);
    CHECK(arff.eta_alpha == 0.005);
    CHECK(arff.eta_omega == 0.05);
    CHECK(arff.eta_b == 0.05);
    for (const auto& f : cfg.filters) CHECK(f.xi == 0.3661);
    CHECK(rff.features == 96);
    CHECK(arff.features == 96);
    CHECK(cfg.horizon == 10000);
    const auto& plant = std::get<NonstationaryPlantConfig>(cfg.plant);
    CHECK(plant.change_step == 5000);
    CHECK(plant.noise.snr_db == 25.0);
    CHECK(plant.d_init_1 == 0.1);
    CHECK(plant.d_init_2 == 0.1);
    CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("config JSON round trip") {
    for (const auto& name : preset_names()) {
        const auto cfg = preset(name);
        const auto back = parse_config(config_to_json(cfg));
        CHECK(config_to_json(back) == config_to_json(cfg));
        CHECK(back.filters.size() == cfg.filters.size());
    }
}

TEST_CASE("config validation names the offending field") {
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("accepted");
    };
    const std::string filters =
        R"("filters": [{"kind": "rff-gklms", "eta_alpha": 0.01, "features": 8, "xi": 1.0}])";
    const std::string plant = R"("plant": {"kind": "nonstationary", "change_step": 50})";

    CHECK(message("{" + plant + "," + filters + R"(, "horizon": 100, "runs": 2, "steady_window": 50})") == "accepted");
    CHECK(message("{" + plant + "," + filters + R"(, "horizon": 100, "runs": 0, "steady_window": 50})")
              .find("runs") != std::string::npos);
    CHECK(message("{" + plant + "," + filters + R"(, "horizon": 100, "runs": 2, "steady_window": 500})")
              .find("steady_window") != std::string::npos);
    CHECK(message("{" + plant + "," + filters + R"(, "horizon": 100, "runs": 2, "steady_window": 50, "bogus": 1})")
              .find("bogus") != std::string::npos);
    CHECK(message("{" + plant + R"(, "filters": [], "horizon": 100, "runs": 2, "steady_window": 50})")
              .find("filters") != std::string::npos);
    CHECK(message("{" + plant +
                  R"(, "filters": [{"kind": "arff-gklms", "eta_alpha": 0.01, "features": 8, "xi": 1.0}], "horizon": 100, "runs": 2, "steady_window": 50})")
              .find("filters[0].eta_omega") != std::string::npos);
    CHECK(message("{" + plant +
                  R"(, "filters": [{"kind": "rff-gklms", "eta_alpha": 0.01, "features": 8, "xi": 1.0, "delta_kappa": 0.5}], "horizon": 100, "runs": 2, "steady_window": 50})")
              .find("filters[0].delta_kappa") != std::string::npos);
    CHECK(message("{" + plant + "," + filters + R"(, "horizon": -5, "runs": 2})").find("horizon") !=
          std::string::npos);
    CHECK(message(R"({"plant": {"kind": "stationary", "rho": 1.5}, )" + filters +
                  R"(, "horizon": 100, "runs": 2, "steady_window": 50})")
              .find("rho") != std::string::npos);
    CHECK(message("not json").find("JSON") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("xi sweep parsing") {
    const auto v = parse_xi_sweep("xi=0.5:2:0.5");
    REQUIRE(v.size() == 4);
    CHECK(v[0] == 0.5);
    CHECK(v[3] == 2.0);
    CHECK(parse_xi_sweep("xi=1:1:0.1").size() == 1);
    CHECK_THROWS_AS(parse_xi_sweep("xi=2:1:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_xi_sweep("eta=1:2:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_xi_sweep("xi=1:2"), ConfigError);
    CHECK_THROWS_AS(parse_xi_sweep("xi=0:2:1"), ConfigError);
}

TEST_CASE("derived seeds differ across runs and labels") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t run = 0; run < 100; ++run) {
        for (auto label : {streams::stream, streams::input, streams::noise, streams::features}) {
            seen.insert(derive_seed(7, run, label));
        }
    }
    CHECK(seen.size() == 400);
    CHECK(derive_seed(7, 3, streams::noise) == derive_seed(7, 3, streams::noise));
    CHECK(derive_seed(7, 3, streams::noise) != derive_seed(8, 3, streams::noise));
}

TEST_CASE("short experiment is reproducible bit for bit") {
    for (const auto& name : preset_names()) {
        const auto cfg = small(name, 1, 10);
        const auto a = run_experiment(cfg);
        const auto b = run_experiment(cfg);
        REQUIRE(a.filters.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a.filters[i].emse.mean.size() == 10);
            CHECK(a.filters[i].emse.mean == b.filters[i].emse.mean);
            CHECK(a.filters[i].model_size.mean == b.filters[i].model_size.mean);
        }
    }
}

TEST_CASE("worker count does not change the result") {
    const auto cfg = small("nonstationary-paper", 6, 400);
    const auto a = run_experiment(cfg, {1});
    const auto b = run_experiment(cfg, {3});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.filters[i].emse.mean == b.filters[i].emse.mean);
        CHECK(a.filters[i].steady_state_emse == b.filters[i].steady_state_emse);
    }
}

TEST_CASE("frozen features with equal step size reproduce the rff curve") {
    auto cfg = small("stationary-paper", 3, 500);
    cfg.filters = {
        {FilterKind::rff_gklms, "RFF", 0.01, 0.0, 0.0, 16, 0.95, 0.0, std::nullopt},
        {FilterKind::arff_gklms, "ARFF0", 0.01, 0.0, 0.0, 16, 0.95, 0.0, std::nullopt},
        {FilterKind::arff_gklms, "ARFF", 0.01, 0.5, 0.5, 16, 0.95, 0.0, std::nullopt},
    };
    const auto art = run_experiment(cfg);
    CHECK(art.filters[0].emse.mean == art.filters[1].emse.mean);
    CHECK(art.filters[0].emse.mean != art.filters[2].emse.mean);
    // paired banks: same initial frequencies for every RFF-family filter
    CHECK(art.filters[0].snapshots.front().omegas == art.filters[2].snapshots.front().omegas);
}

TEST_CASE("a filter with frozen zero weights has EMSE equal to clean^2") {
    auto cfg = small("stationary-paper", 1, 300);
    cfg.filters = {{FilterKind::rff_gklms, "ZERO", 0.0, 0.0, 0.0, 8, 0.95, 0.0, std::nullopt}};
    const auto res = run_single(cfg, 0);
    const auto stream = make_stream(cfg, 0);
    for (std::size_t n = 0; n < 300; ++n) CHECK(res.emse[0][n] == stream.clean[n] * stream.clean[n]);
}

TEST_CASE("divergent runs are flagged and excluded") {
    auto cfg = small("stationary-paper", 4, 200);
    cfg.filters = {{FilterKind::rff_gklms, "WILD", 1e200, 0.0, 0.0, 8, 0.95, 0.0, std::nullopt}};
    CHECK_THROWS_AS(run_experiment(cfg), ExperimentError);

    cfg.filters.push_back({FilterKind::rff_gklms, "CALM", 0.01, 0.0, 0.0, 8, 0.95, 0.0, std::nullopt});
    cfg.max_divergent_fraction = 1.0;
    CHECK_THROWS_AS(run_experiment(cfg), ExperimentError);  // every run diverged

    auto calm = small("stationary-paper", 4, 200);
    calm.max_divergent_fraction = 0.0;
    const auto art = run_experiment(calm);
    CHECK(art.included_runs == 4);
    for (const auto& r : art.runs) CHECK_FALSE(r.diverged);
}

TEST_CASE("export writes the documented files deterministically") {
    const auto cfg = small("nonstationary-paper", 2, 400);
    const auto art = run_experiment(cfg);
    const fs::path dir = scratch_dir("export");
    const auto files = export_artifacts(art, dir);
    REQUIRE(files.size() == 4);
    for (const auto& f : files) CHECK(fs::exists(f));

    const std::string emse = slurp(dir / "emse.csv");
    CHECK(emse.rfind("n,GKLMS-CS_emse_db,RFF-GKLMS_emse_db,ARFF-GKLMS_emse_db,GKLMS-CS_model_size", 0) == 0);
    CHECK(std::count(emse.begin(), emse.end(), '\n') == 401);

    const std::string summary = slurp(dir / "summary.csv");
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);

    // D rows per stage per RFF-family filter; stages initial/change/final
    const std::string snaps = slurp(dir / "omega_snapshots.csv");
    CHECK(std::count(snaps.begin(), snaps.end(), '\n') == 1 + 2 * 3 * 96);
    CHECK(snaps.find("ARFF-GKLMS,change,95,") != std::string::npos);

    const std::string manifest = slurp(dir / "manifest.json");
    CHECK(manifest.find("\"run_status\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": 20220101") != std::string::npos);

    const fs::path again = scratch_dir("export_again");
    export_artifacts(art, again);
    for (const char* name : {"emse.csv", "summary.csv", "omega_snapshots.csv", "manifest.json"}) {
        CHECK(slurp(dir / name) == slurp(again / name));
    }
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST_CASE("export reports unwritable paths") {
    const auto art = run_experiment(small("stationary-paper", 1, 10));
    CHECK_THROWS_AS(export_artifacts(art, "/proc/arffklms/nope"), IoError);
}

TEST_CASE("stream CSV dump") {
    const auto cfg = small("stationary-paper", 1, 5);
    std::ostringstream out;
    write_stream_csv(make_stream(cfg, 0), out);
    const std::string text = out.str();
    CHECK(text.rfind("n,x1,x2,clean,y\n0,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}
