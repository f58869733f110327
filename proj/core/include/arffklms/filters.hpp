#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "arffklms/kernels.hpp"
#include "arffklms/rff.hpp"

namespace arffklms {

struct StepOutcome {
    double prediction = 0.0;
    double error = 0.0;  // observed - prediction
    std::size_t model_size = 0;
};

struct ArffStepSizes {
    double alpha = 0.0;
    double omega = 0.0;
    double phase = 0.0;
};

/// Negative half-gradients of (y - alpha'z(x))^2 at the current state.
/// A step with unit step sizes adds exactly these to (alpha, omegas, phases).
struct ArffDirections {
    std::vector<double> alpha;
    std::vector<double> omegas;  // row-major D x L
    std::vector<double> phases;
};

/// Kernel LMS on random Fourier features whose frequencies and phases are
/// adapted by stochastic gradient descent alongside the weights.
///
/// Each step evaluates z = cos(w_m'x + b_m) with the current bank, forms
/// e = y - alpha'z and then applies
///
///     alpha   += eta_alpha * e * z
///     w_m     -= eta_omega * e * alpha_m * sin(w_m'x + b_m) * x
///     b_m     -= eta_b     * e * alpha_m * sin(w_m'x + b_m)
///
/// where every right-hand side uses the values from before the step.
/// Weights start at zero.
class ArffGklms {
public:
    /// Throws ConfigError for negative or non-finite step sizes.
    ArffGklms(FeatureBank bank, ArffStepSizes eta);
    ArffGklms(FeatureBank bank, std::vector<double> alpha, ArffStepSizes eta);

    double predict(std::span<const double> x) const;

    /// Throws StreamError on non-finite input and DivergenceError when the
    /// updated state is not finite.
    StepOutcome step(std::span<const double> x, double y);

    /// (y - alpha'z(x))^2, no mutation.
    double instantaneous_loss(std::span<const double> x, double y) const;

    ArffDirections descent_directions(std::span<const double> x, double y) const;

    const FeatureBank& bank() const noexcept { return bank_; }
    std::span<const double> alpha() const noexcept { return alpha_; }
    const ArffStepSizes& step_sizes() const noexcept { return eta_; }
    std::size_t steps_taken() const noexcept { return steps_; }

private:
    FeatureBank bank_;
    std::vector<double> alpha_;
    ArffStepSizes eta_;
    std::size_t steps_ = 0;
    std::vector<double> args_;
    std::vector<double> z_;
};

/// Kernel LMS on a frozen random Fourier feature bank.
class RffGklms {
public:
    RffGklms(FeatureBank bank, double eta_alpha);
    RffGklms(FeatureBank bank, std::vector<double> alpha, double eta_alpha);

    double predict(std::span<const double> x) const;
    StepOutcome step(std::span<const double> x, double y);

    const FeatureBank& bank() const noexcept { return bank_; }
    std::span<const double> alpha() const noexcept { return alpha_; }
    double eta_alpha() const noexcept { return eta_alpha_; }
    std::size_t steps_taken() const noexcept { return steps_; }

private:
    FeatureBank bank_;
    std::vector<double> alpha_;
    double eta_alpha_;
    std::size_t steps_ = 0;
    std::vector<double> z_;
};

/// Gaussian kernel LMS on a dictionary grown by the coherence criterion.
///
/// Per step: admit x when its coherence with every center is at most
/// delta_kappa (new weight 0), then run LMS on all expansion weights.
class GklmsCs {
public:
    GklmsCs(GaussianKernel kernel, std::size_t input_dim, double eta_alpha, double delta_kappa,
            std::optional<std::size_t> capacity = std::nullopt);

    /// Zero while the dictionary is empty.
    double predict(std::span<const double> x) const;
    StepOutcome step(std::span<const double> x, double y);

    const GaussianKernel& kernel() const noexcept { return kernel_; }
    const Dictionary& dictionary() const noexcept { return dict_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double eta_alpha() const noexcept { return eta_alpha_; }
    double delta_kappa() const noexcept { return delta_kappa_; }
    std::size_t steps_taken() const noexcept { return steps_; }

private:
    GaussianKernel kernel_;
    Dictionary dict_;
    std::vector<double> weights_;
    double eta_alpha_;
    double delta_kappa_;
    std::size_t steps_ = 0;
    std::vector<double> k_;
};

}  // namespace arffklms
