#include "arffklms/systems.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "arffklms/error.hpp"
#include "arffklms/kernels.hpp"
#include "arffklms/seeding.hpp"
#include "number_format.hpp"

namespace arffklms {

KernelPlantSpec reference_kernel_plant() {
    return {
        {0.756, -1.384, -0.101, 0.445, -0.565, 0.134},
        {{0.17, -1.92}, {-1.62, -0.18}, {0.52, 1.55}, {2.90, 1.92}, {-2.01, -2.47}, {2.66, -0.82}},
        0.95,
    };
}

void validate(const KernelPlantSpec& plant) {
    if (plant.weights.empty()) throw ConfigError("plant.weights must not be empty");
    if (plant.weights.size() != plant.centers.size()) {
        throw ConfigError("plant.weights and plant.centers must have the same length");
    }
    const std::size_t dim = plant.centers.front().size();
    if (dim == 0) throw ConfigError("plant.centers must have positive dimension");
    for (const auto& c : plant.centers) {
        if (c.size() != dim) throw ConfigError("plant.centers must share one dimension");
        for (double v : c)
            if (!std::isfinite(v)) throw ConfigError("plant.centers contains a non-finite entry");
    }
    for (double w : plant.weights)
        if (!std::isfinite(w)) throw ConfigError("plant.weights contains a non-finite entry");
    if (!(plant.xi_star > 0.0) || !std::isfinite(plant.xi_star)) {
        throw ConfigError("plant.xi_star must be positive and finite");
    }
}

void validate(const PiecewisePlantSpec& plant) {
    if (!(plant.change_step > 0 && plant.change_step < plant.horizon)) {
        throw ConfigError("plant.change_step must satisfy 0 < change_step < horizon");
    }
    if (!std::isfinite(plant.d_init_1) || !std::isfinite(plant.d_init_2)) {
        throw ConfigError("plant.d_init must be finite");
    }
}

void validate(const NoiseSpec& noise) {
    if (std::isnan(noise.snr_db) || noise.snr_db == -std::numeric_limits<double>::infinity()) {
        throw ConfigError("noise.snr_db must be a number (or +inf to disable noise)");
    }
}

std::vector<double> gen_ar1(const Ar1InputSpec& spec, std::size_t n_steps, std::uint64_t seed) {
    if (!(std::abs(spec.rho) < 1.0)) throw ConfigError("rho must satisfy |rho| < 1");
    if (n_steps == 0) throw ConfigError("n_steps must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double innovation = std::sqrt(1.0 - spec.rho * spec.rho);
    std::vector<double> x(n_steps);
    double prev = 0.0;
    for (auto& v : x) {
        v = spec.rho * prev + innovation * unit(rng);
        prev = v;
    }
    return x;
}

double noise_variance(double clean_power, const NoiseSpec& noise) {
    validate(noise);
    if (std::isinf(noise.snr_db)) return 0.0;
    return clean_power * std::pow(10.0, -noise.snr_db / 10.0);
}

std::vector<double> calibrate_noise(std::span<const double> clean, const NoiseSpec& noise,
                                    std::uint64_t seed) {
    validate(noise);
    std::vector<double> z(clean.size(), 0.0);
    if (std::isinf(noise.snr_db)) return z;
    double power = 0.0;
    for (double c : clean) power += c * c;
    if (clean.empty() || power == 0.0) {
        throw CalibrationError("calibrate_noise: clean signal is identically zero");
    }
    power /= static_cast<double>(clean.size());
    const double sigma = std::sqrt(noise_variance(power, noise));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& v : z) v = gauss(rng);
    return z;
}

namespace {

void add_noise(SampleStream& s, const NoiseSpec& noise, std::uint64_t seed) {
    s.noise = calibrate_noise(s.clean, noise, derive_seed(seed, 0, streams::noise));
    s.observed.resize(s.clean.size());
    for (std::size_t n = 0; n < s.clean.size(); ++n) s.observed[n] = s.clean[n] + s.noise[n];
}

}  // namespace

SampleStream gen_stationary_stream(const KernelPlantSpec& plant, const Ar1InputSpec& input,
                                   const NoiseSpec& noise, std::size_t n_steps, std::uint64_t seed) {
    validate(plant);
    validate(noise);
    const auto x = gen_ar1(input, n_steps, derive_seed(seed, 0, streams::input));
    const std::size_t dim = plant.centers.front().size();
    const GaussianKernel kernel(plant.xi_star);

    SampleStream s;
    s.input_dim = dim;
    s.inputs.resize(n_steps * dim);
    s.clean.resize(n_steps);
    for (std::size_t n = 0; n < n_steps; ++n) {
        double* row = s.inputs.data() + n * dim;
        // tap l holds x_{n-l}; samples before the start are zero
        for (std::size_t l = 0; l < dim; ++l) row[l] = n >= l ? x[n - l] : 0.0;
        double acc = 0.0;
        for (std::size_t j = 0; j < plant.centers.size(); ++j) {
            acc += plant.weights[j] * kernel(s.input(n), plant.centers[j]);
        }
        s.clean[n] = acc;
    }
    add_noise(s, noise, seed);
    return s;
}

double piecewise_recurrence(double d1, double d2, bool second_regime) noexcept {
    const double g = std::exp(-d1 * d1);
    if (!second_regime) {
        return (0.8 - 0.5 * g) * d1 + 0.1 * std::sin(d1 * std::numbers::pi) - (0.3 + 0.9 * g) * d2;
    }
    return (0.2 - 0.7 * g) * d1 + 0.2 * std::sin(d1 * std::numbers::pi) - (0.8 + 0.8 * g) * d2;
}

SampleStream gen_nonstationary_stream(const PiecewisePlantSpec& plant, const NoiseSpec& noise,
                                      std::uint64_t seed) {
    validate(plant);
    validate(noise);
    SampleStream s;
    s.input_dim = 2;
    s.inputs.resize(plant.horizon * 2);
    s.clean.resize(plant.horizon);
    double d1 = plant.d_init_1;
    double d2 = plant.d_init_2;
    for (std::size_t n = 0; n < plant.horizon; ++n) {
        s.inputs[2 * n] = d1;
        s.inputs[2 * n + 1] = d2;
        const double d = piecewise_recurrence(d1, d2, n > plant.change_step);
        s.clean[n] = d;
        d2 = d1;
        d1 = d;
    }
    add_noise(s, noise, seed);
    return s;
}

void write_stream_csv(const SampleStream& stream, std::ostream& out) {
    out << "n";
    for (std::size_t l = 0; l < stream.input_dim; ++l) out << ",x" << (l + 1);
    out << ",clean,y\n";
    for (std::size_t n = 0; n < stream.size(); ++n) {
        out << n;
        for (double v : stream.input(n)) out << ',' << detail::format_double(v);
        out << ',' << detail::format_double(stream.clean[n]) << ','
            << detail::format_double(stream.observed[n]) << '\n';
    }
}

}  // namespace arffklms
