#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace arffklms {

/// Gain applied to every cosine feature.
///
/// `unit` gives `cos(w'x + b)` and is what the filters adapt. `estimator` gives
/// `sqrt(2/D) cos(w'x + b)`, whose inner products estimate the Gaussian kernel.
enum class AmplitudeConvention { unit, estimator };

double amplitude_for(AmplitudeConvention convention, std::size_t features) noexcept;

/// D frequency vectors in R^L plus D phases.
///
/// Frequencies are stored row-major, one row of length L per feature.
class FeatureBank {
public:
    FeatureBank() = default;

    /// All-zero frequencies and phases.
    FeatureBank(std::size_t features, std::size_t input_dim,
                AmplitudeConvention convention = AmplitudeConvention::unit);

    /// Throws UsageError when the sizes disagree or an entry is not finite.
    FeatureBank(std::vector<double> omegas, std::vector<double> phases, std::size_t input_dim,
                AmplitudeConvention convention = AmplitudeConvention::unit);

    std::size_t features() const noexcept { return phases_.size(); }
    std::size_t input_dim() const noexcept { return input_dim_; }
    AmplitudeConvention convention() const noexcept { return convention_; }
    double amplitude() const noexcept { return amplitude_; }
    void set_convention(AmplitudeConvention convention) noexcept;

    std::span<const double> omega(std::size_t m) const noexcept {
        return {omegas_.data() + m * input_dim_, input_dim_};
    }
    std::span<double> omega(std::size_t m) noexcept {
        return {omegas_.data() + m * input_dim_, input_dim_};
    }
    double phase(std::size_t m) const noexcept { return phases_[m]; }
    double& phase(std::size_t m) noexcept { return phases_[m]; }

    std::span<const double> omegas() const noexcept { return omegas_; }
    std::span<const double> phases() const noexcept { return phases_; }

    /// w_m'x + b_m. No dimension check.
    double argument(std::size_t m, std::span<const double> x) const noexcept;

    bool all_finite() const noexcept;

    friend bool operator==(const FeatureBank&, const FeatureBank&) = default;

private:
    std::vector<double> omegas_;
    std::vector<double> phases_;
    std::size_t input_dim_ = 0;
    AmplitudeConvention convention_ = AmplitudeConvention::unit;
    double amplitude_ = 1.0;
};

struct RffSamplingSpec {
    double xi = 1.0;
    std::size_t features = 1;
    std::size_t input_dim = 1;
    std::uint64_t seed = 0;
    AmplitudeConvention convention = AmplitudeConvention::unit;
};

/// Draws every frequency coordinate from N(0, 1/xi^2) and every phase from U[0, 2pi).
/// Throws ConfigError for xi <= 0 (or non-finite), zero features, or zero input_dim.
FeatureBank sample_feature_bank(const RffSamplingSpec& spec);

/// Component m is amplitude * cos(w_m'x + b_m).
std::vector<double> feature_map(const FeatureBank& bank, std::span<const double> x);
void feature_map_into(const FeatureBank& bank, std::span<const double> x, std::span<double> out);

/// z(x)'z(x') for a bank with the estimator convention.
double kernel_estimate(const FeatureBank& bank, std::span<const double> x,
                       std::span<const double> x_prime);

struct FeaturePartials {
    std::vector<double> d_omega;  // dz_m / dw_m, length L
    double d_phase = 0.0;         // dz_m / db_m
};

/// Exact partials of component m (zero-based) of feature_map.
FeaturePartials feature_partials(const FeatureBank& bank, std::span<const double> x, std::size_t m);

}  // namespace arffklms
