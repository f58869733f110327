#include "arffklms/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace arffklms {

using nlohmann::json;

std::vector<std::string> preset_names() { return {"stationary-paper", "nonstationary-paper"}; }

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig cfg;
    cfg.name = std::string(name);
    if (name == "stationary-paper") {
        cfg.plant = StationaryPlantConfig{reference_kernel_plant(), Ar1InputSpec{0.5}, NoiseSpec{15.0}};
        cfg.filters = {
            {FilterKind::gklms_cs, "GKLMS-CS", 0.2, 0.0, 0.0, 0, 0.95, 0.7, std::nullopt},
            {FilterKind::rff_gklms, "RFF-GKLMS", 0.01, 0.0, 0.0, 48, 0.95, 0.0, std::nullopt},
            {FilterKind::arff_gklms, "ARFF-GKLMS", 0.005, 1.0, 1.0, 48, 0.95, 0.0, std::nullopt},
        };
        cfg.horizon = 20000;
        cfg.steady_window = 5000;
    } else if (name == "nonstationary-paper") {
        cfg.plant = NonstationaryPlantConfig{5000, 0.1, 0.1, NoiseSpec{25.0}};
        cfg.filters = {
            {FilterKind::gklms_cs, "GKLMS-CS", 0.05, 0.0, 0.0, 0, 0.3661, 0.9, std::nullopt},
            {FilterKind::rff_gklms, "RFF-GKLMS", 0.005, 0.0, 0.0, 96, 0.3661, 0.0, std::nullopt},
            {FilterKind::arff_gklms, "ARFF-GKLMS", 0.005, 0.05, 0.05, 96, 0.3661, 0.0, std::nullopt},
        };
        cfg.horizon = 10000;
        cfg.steady_window = 2000;
    } else {
        throw ConfigError("unknown preset \"" + std::string(name) + "\"");
    }
    cfg.runs = 200;
    cfg.seed = 20220101;
    cfg.output_dir = "out/" + std::string(name);
    return cfg;
}

namespace {

// Reads fields from one JSON object and rejects any key that was never read.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + " must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(at(key) + " is required");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key) + " must be a number");
        return v.get<double>();
    }
    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : (seen_.insert(key), fallback);
    }

    std::uint64_t unsigned_int(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_unsigned()) {
            throw ConfigError(at(key) + " must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }
    std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) {
        return has(key) ? unsigned_int(key) : (seen_.insert(key), fallback);
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key) + " must be a string");
        return v.get<std::string>();
    }

    bool boolean_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(at(key) + " must be true or false");
        return v.get<bool>();
    }

    // null means +inf (noise disabled)
    double snr_or(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (v.is_null()) return std::numeric_limits<double>::infinity();
        if (!v.is_number()) throw ConfigError(at(key) + " must be a number or null");
        return v.get<double>();
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    const std::string& where() const { return path_; }

    void finish() const {
        for (const auto& [key, _] : j_.items()) {
            if (!seen_.count(key)) throw ConfigError(at(key) + " is not a recognized field");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path + " must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "] must be a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

PlantConfig parse_plant(const json& j) {
    Fields f(j, "plant");
    const std::string kind = f.string("kind");
    if (kind == "stationary") {
        StationaryPlantConfig p;
        p.input.rho = f.number_or("rho", p.input.rho);
        p.noise.snr_db = f.snr_or("snr_db", p.noise.snr_db);
        p.plant.xi_star = f.number_or("xi_star", p.plant.xi_star);
        if (f.has("weights")) p.plant.weights = number_array(f.raw("weights"), "plant.weights");
        if (f.has("centers")) {
            const json& c = f.raw("centers");
            if (!c.is_array()) throw ConfigError("plant.centers must be an array of arrays");
            p.plant.centers.clear();
            for (std::size_t i = 0; i < c.size(); ++i) {
                p.plant.centers.push_back(
                    number_array(c[i], "plant.centers[" + std::to_string(i) + "]"));
            }
        }
        f.finish();
        return p;
    }
    if (kind == "nonstationary") {
        NonstationaryPlantConfig p;
        p.change_step = f.unsigned_or("change_step", p.change_step);
        p.noise.snr_db = f.snr_or("snr_db", p.noise.snr_db);
        if (f.has("d_init")) {
            const auto d = number_array(f.raw("d_init"), "plant.d_init");
            if (d.size() != 2) throw ConfigError("plant.d_init must hold exactly two numbers");
            p.d_init_1 = d[0];
            p.d_init_2 = d[1];
        }
        f.finish();
        return p;
    }
    throw ConfigError("plant.kind must be \"stationary\" or \"nonstationary\"");
}

FilterConfig parse_filter(const json& j, const std::string& path) {
    Fields f(j, path);
    const std::string kind_name = f.string("kind");
    const auto kind = parse_filter_kind(kind_name);
    if (!kind) {
        throw ConfigError(f.at("kind") + " must be one of arff-gklms, rff-gklms, gklms-cs");
    }
    FilterConfig fc;
    fc.kind = *kind;
    fc.label = f.has("label") ? f.string("label") : kind_name;
    fc.eta_alpha = f.number("eta_alpha");
    fc.xi = f.number("xi");
    switch (fc.kind) {
        case FilterKind::arff_gklms:
            fc.eta_omega = f.number("eta_omega");
            fc.eta_b = f.number("eta_b");
            [[fallthrough]];
        case FilterKind::rff_gklms:
            fc.features = f.unsigned_int("features");
            break;
        case FilterKind::gklms_cs:
            fc.delta_kappa = f.number("delta_kappa");
            if (f.has("capacity") && !f.raw("capacity").is_null()) fc.capacity = f.unsigned_int("capacity");
            break;
    }
    f.finish();
    return fc;
}

ExperimentConfig parse_json(const json& j) {
    Fields f(j, "");
    ExperimentConfig cfg;
    if (f.has("name")) cfg.name = f.string("name");
    cfg.plant = parse_plant(f.raw("plant"));
    const json& filters = f.raw("filters");
    if (!filters.is_array()) throw ConfigError("filters must be an array");
    for (std::size_t i = 0; i < filters.size(); ++i) {
        cfg.filters.push_back(parse_filter(filters[i], "filters[" + std::to_string(i) + "]"));
    }
    cfg.horizon = f.unsigned_int("horizon");
    cfg.runs = f.unsigned_int("runs");
    cfg.seed = f.unsigned_or("seed", cfg.seed);
    cfg.steady_window = f.unsigned_or("steady_window", cfg.steady_window);
    cfg.max_divergent_fraction = f.number_or("max_divergent_fraction", cfg.max_divergent_fraction);
    cfg.snapshots = f.boolean_or("snapshots", cfg.snapshots);
    if (f.has("output_dir")) cfg.output_dir = f.string("output_dir");
    f.finish();
    validate(cfg);
    return cfg;
}

json snr_json(double snr) { return std::isinf(snr) ? json(nullptr) : json(snr); }

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string config_to_json(const ExperimentConfig& cfg, bool include_output_dir) {
    json j;
    j["name"] = cfg.name;
    if (const auto* s = std::get_if<StationaryPlantConfig>(&cfg.plant)) {
        j["plant"] = {{"kind", "stationary"},
                      {"rho", s->input.rho},
                      {"snr_db", snr_json(s->noise.snr_db)},
                      {"xi_star", s->plant.xi_star},
                      {"weights", s->plant.weights},
                      {"centers", s->plant.centers}};
    } else {
        const auto& p = std::get<NonstationaryPlantConfig>(cfg.plant);
        j["plant"] = {{"kind", "nonstationary"},
                      {"change_step", p.change_step},
                      {"d_init", {p.d_init_1, p.d_init_2}},
                      {"snr_db", snr_json(p.noise.snr_db)}};
    }
    json filters = json::array();
    for (const auto& f : cfg.filters) {
        json jf = {{"kind", to_string(f.kind)}, {"label", f.label}, {"eta_alpha", f.eta_alpha}, {"xi", f.xi}};
        switch (f.kind) {
            case FilterKind::arff_gklms:
                jf["eta_omega"] = f.eta_omega;
                jf["eta_b"] = f.eta_b;
                [[fallthrough]];
            case FilterKind::rff_gklms:
                jf["features"] = f.features;
                break;
            case FilterKind::gklms_cs:
                jf["delta_kappa"] = f.delta_kappa;
                if (f.capacity) jf["capacity"] = *f.capacity;
                break;
        }
        filters.push_back(std::move(jf));
    }
    j["filters"] = std::move(filters);
    j["horizon"] = cfg.horizon;
    j["runs"] = cfg.runs;
    j["seed"] = cfg.seed;
    j["steady_window"] = cfg.steady_window;
    j["max_divergent_fraction"] = cfg.max_divergent_fraction;
    j["snapshots"] = cfg.snapshots;
    if (include_output_dir) j["output_dir"] = cfg.output_dir;
    return j.dump(2);
}

std::vector<double> parse_xi_sweep(std::string_view text) {
    auto fail = [&] {
        return ConfigError("sweep must look like xi=a:b:step with 0 < a <= b and step > 0, got \"" +
                           std::string(text) + "\"");
    };
    if (text.substr(0, 3) != "xi=") throw fail();
    std::string_view rest = text.substr(3);
    double parts[3];
    for (int i = 0; i < 3; ++i) {
        const auto colon = rest.find(':');
        const std::string_view token = i < 2 ? rest.substr(0, colon) : rest;
        if ((i < 2 && colon == std::string_view::npos) || token.empty()) throw fail();
        const auto res = std::from_chars(token.data(), token.data() + token.size(), parts[i]);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) throw fail();
        if (i < 2) rest = rest.substr(colon + 1);
    }
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0) || !std::isfinite(hi)) throw fail();
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 10000) throw fail();
    std::vector<double> values;
    for (std::size_t i = 0; i < count; ++i) values.push_back(lo + static_cast<double>(i) * step);
    return values;
}

}  // namespace arffklms
