#include "arffklms/rff.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "arffklms/error.hpp"

namespace arffklms {

namespace {

void require_dim(const FeatureBank& bank, std::span<const double> x, const char* what) {
    if (x.size() != bank.input_dim()) {
        throw UsageError(std::string(what) + ": input has dimension " + std::to_string(x.size()) +
                         ", bank expects " + std::to_string(bank.input_dim()));
    }
}

}  // namespace

double amplitude_for(AmplitudeConvention convention, std::size_t features) noexcept {
    if (convention == AmplitudeConvention::unit || features == 0) return 1.0;
    return std::sqrt(2.0 / static_cast<double>(features));
}

FeatureBank::FeatureBank(std::size_t features, std::size_t input_dim, AmplitudeConvention convention)
    : omegas_(features * input_dim, 0.0),
      phases_(features, 0.0),
      input_dim_(input_dim),
      convention_(convention),
      amplitude_(amplitude_for(convention, features)) {}

FeatureBank::FeatureBank(std::vector<double> omegas, std::vector<double> phases,
                         std::size_t input_dim, AmplitudeConvention convention)
    : omegas_(std::move(omegas)),
      phases_(std::move(phases)),
      input_dim_(input_dim),
      convention_(convention),
      amplitude_(amplitude_for(convention, phases_.size())) {
    if (input_dim_ == 0 || phases_.empty()) {
        throw UsageError("FeatureBank: feature count and input dimension must be positive");
    }
    if (omegas_.size() != phases_.size() * input_dim_) {
        throw UsageError("FeatureBank: expected " + std::to_string(phases_.size() * input_dim_) +
                         " frequency entries, got " + std::to_string(omegas_.size()));
    }
    if (!all_finite()) throw UsageError("FeatureBank: non-finite entry");
}

void FeatureBank::set_convention(AmplitudeConvention convention) noexcept {
    convention_ = convention;
    amplitude_ = amplitude_for(convention, features());
}

double FeatureBank::argument(std::size_t m, std::span<const double> x) const noexcept {
    const double* w = omegas_.data() + m * input_dim_;
    double acc = phases_[m];
    for (std::size_t l = 0; l < input_dim_; ++l) acc += w[l] * x[l];
    return acc;
}

bool FeatureBank::all_finite() const noexcept {
    for (double v : omegas_)
        if (!std::isfinite(v)) return false;
    for (double v : phases_)
        if (!std::isfinite(v)) return false;
    return true;
}

FeatureBank sample_feature_bank(const RffSamplingSpec& spec) {
    if (!(spec.xi > 0.0) || !std::isfinite(spec.xi)) {
        throw ConfigError("RffSamplingSpec.xi must be positive and finite");
    }
    if (spec.features == 0) throw ConfigError("RffSamplingSpec.features must be at least 1");
    if (spec.input_dim == 0) throw ConfigError("RffSamplingSpec.input_dim must be at least 1");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> frequency(0.0, 1.0 / spec.xi);
    std::uniform_real_distribution<double> phase(0.0, two_pi);

    FeatureBank bank(spec.features, spec.input_dim, spec.convention);
    for (std::size_t m = 0; m < spec.features; ++m) {
        for (double& w : bank.omega(m)) w = frequency(rng);
        double b = phase(rng);
        // uniform_real_distribution may round up to its upper bound
        if (b >= two_pi) b = 0.0;
        bank.phase(m) = b;
    }
    return bank;
}

void feature_map_into(const FeatureBank& bank, std::span<const double> x, std::span<double> out) {
    require_dim(bank, x, "feature_map");
    if (out.size() != bank.features()) throw UsageError("feature_map: output span has wrong size");
    const double a = bank.amplitude();
    for (std::size_t m = 0; m < bank.features(); ++m) out[m] = a * std::cos(bank.argument(m, x));
}

std::vector<double> feature_map(const FeatureBank& bank, std::span<const double> x) {
    std::vector<double> z(bank.features());
    feature_map_into(bank, x, z);
    return z;
}

double kernel_estimate(const FeatureBank& bank, std::span<const double> x,
                       std::span<const double> x_prime) {
    if (bank.convention() != AmplitudeConvention::estimator) {
        throw UsageError("kernel_estimate: bank must use the sqrt(2/D) estimator amplitude");
    }
    require_dim(bank, x, "kernel_estimate");
    require_dim(bank, x_prime, "kernel_estimate");
    double acc = 0.0;
    for (std::size_t m = 0; m < bank.features(); ++m) {
        acc += std::cos(bank.argument(m, x)) * std::cos(bank.argument(m, x_prime));
    }
    return bank.amplitude() * bank.amplitude() * acc;
}

FeaturePartials feature_partials(const FeatureBank& bank, std::span<const double> x, std::size_t m) {
    require_dim(bank, x, "feature_partials");
    if (m >= bank.features()) {
        throw UsageError("feature_partials: feature index " + std::to_string(m) + " out of range");
    }
    const double d_phase = -bank.amplitude() * std::sin(bank.argument(m, x));
    FeaturePartials p;
    p.d_phase = d_phase;
    p.d_omega.resize(x.size());
    for (std::size_t l = 0; l < x.size(); ++l) p.d_omega[l] = d_phase * x[l];
    return p;
}

}  // namespace arffklms
