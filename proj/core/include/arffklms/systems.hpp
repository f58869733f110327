#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace arffklms {

/// x_n = rho x_{n-1} + sqrt(1 - rho^2) u_n with u_n ~ N(0, 1) and x_{-1} = 0.
struct Ar1InputSpec {
    double rho = 0.5;
};

/// Noiseless output sum_j w_j exp(-||x - c_j||^2 / (2 xi^2)).
/// The center dimension L fixes the input regressor (x_n, ..., x_{n-L+1}).
struct KernelPlantSpec {
    std::vector<double> weights;
    std::vector<std::vector<double>> centers;
    double xi_star = 1.0;
};

/// Six-center expansion with bandwidth 0.95 used for the stationary benchmark.
KernelPlantSpec reference_kernel_plant();

/// Second-order recurrence with an abrupt switch of coefficients after change_step.
struct PiecewisePlantSpec {
    std::size_t change_step = 5000;
    double d_init_1 = 0.1;  // d_{-1}
    double d_init_2 = 0.1;  // d_{-2}
    std::size_t horizon = 10000;
};

/// Observation noise level; +infinity disables the noise.
struct NoiseSpec {
    double snr_db = std::numeric_limits<double>::infinity();
};

struct SampleStream {
    std::size_t input_dim = 0;
    std::vector<double> inputs;  // row-major, size() x input_dim
    std::vector<double> observed;
    std::vector<double> clean;
    std::vector<double> noise;

    std::size_t size() const noexcept { return observed.size(); }
    std::span<const double> input(std::size_t n) const noexcept {
        return {inputs.data() + n * input_dim, input_dim};
    }
};

/// Throws ConfigError for |rho| >= 1 or n_steps == 0.
std::vector<double> gen_ar1(const Ar1InputSpec& spec, std::size_t n_steps, std::uint64_t seed);

/// Input and observation noise use separate generators derived from `seed`.
SampleStream gen_stationary_stream(const KernelPlantSpec& plant, const Ar1InputSpec& input,
                                   const NoiseSpec& noise, std::size_t n_steps, std::uint64_t seed);

/// Inputs are (d_{n-1}, d_{n-2}); the clean output is d_n.
SampleStream gen_nonstationary_stream(const PiecewisePlantSpec& plant, const NoiseSpec& noise,
                                      std::uint64_t seed);

/// One step of the piecewise recurrence; `second_regime` selects the post-change coefficients.
double piecewise_recurrence(double d_prev1, double d_prev2, bool second_regime) noexcept;

/// P 10^(-snr/10); zero when the noise is disabled.
double noise_variance(double clean_power, const NoiseSpec& noise);

/// i.i.d. N(0, P 10^(-snr/10)) noise, P the mean square of `clean`.
/// Throws CalibrationError when `clean` is identically zero (finite snr only).
std::vector<double> calibrate_noise(std::span<const double> clean, const NoiseSpec& noise,
                                    std::uint64_t seed);

/// Columns: n, x_1..x_L, clean, y.
void write_stream_csv(const SampleStream& stream, std::ostream& out);

void validate(const KernelPlantSpec& plant);
void validate(const PiecewisePlantSpec& plant);
void validate(const NoiseSpec& noise);

}  // namespace arffklms
