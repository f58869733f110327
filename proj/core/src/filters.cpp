#include "arffklms/filters.hpp"

#include <cmath>
#include <string>

#include "arffklms/error.hpp"

namespace arffklms {

namespace {

void check_step_size(double eta, const char* name) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw ConfigError(std::string(name) + " must be finite and non-negative");
    }
}

void check_sample(std::size_t expected_dim, std::span<const double> x, double y, const char* who) {
    if (x.size() != expected_dim) {
        throw UsageError(std::string(who) + ": input has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(expected_dim));
    }
    for (double v : x)
        if (!std::isfinite(v)) throw StreamError(std::string(who) + ": non-finite input");
    if (!std::isfinite(y)) throw StreamError(std::string(who) + ": non-finite observation");
}

void check_dim(std::size_t expected_dim, std::span<const double> x, const char* who) {
    if (x.size() != expected_dim) {
        throw UsageError(std::string(who) + ": input has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(expected_dim));
    }
}

std::vector<double> checked_alpha(std::vector<double> alpha, const FeatureBank& bank) {
    if (alpha.size() != bank.features()) {
        throw UsageError("weight vector has " + std::to_string(alpha.size()) + " entries, bank has " +
                         std::to_string(bank.features()) + " features");
    }
    return alpha;
}

// Shared by both RFF filters so that their predictions agree bit for bit.
// Fills args (optional) and z, returns alpha'z.
double evaluate_features(const FeatureBank& bank, std::span<const double> alpha,
                         std::span<const double> x, double* args, double* z) {
    const double a = bank.amplitude();
    double prediction = 0.0;
    for (std::size_t m = 0; m < bank.features(); ++m) {
        const double arg = bank.argument(m, x);
        if (args != nullptr) args[m] = arg;
        z[m] = a * std::cos(arg);
        prediction += alpha[m] * z[m];
    }
    return prediction;
}

double predict_with(const FeatureBank& bank, std::span<const double> alpha,
                    std::span<const double> x) {
    const double a = bank.amplitude();
    double prediction = 0.0;
    for (std::size_t m = 0; m < bank.features(); ++m) {
        const double zm = a * std::cos(bank.argument(m, x));
        prediction += alpha[m] * zm;
    }
    return prediction;
}

}  // namespace

// ArffGklms

ArffGklms::ArffGklms(FeatureBank bank, ArffStepSizes eta)
    : ArffGklms(std::move(bank), std::vector<double>{}, eta) {}

ArffGklms::ArffGklms(FeatureBank bank, std::vector<double> alpha, ArffStepSizes eta)
    : bank_(std::move(bank)), eta_(eta) {
    if (bank_.features() == 0 || bank_.input_dim() == 0) throw UsageError("ArffGklms: empty bank");
    alpha_ = alpha.empty() ? std::vector<double>(bank_.features(), 0.0)
                           : checked_alpha(std::move(alpha), bank_);
    check_step_size(eta_.alpha, "eta_alpha");
    check_step_size(eta_.omega, "eta_omega");
    check_step_size(eta_.phase, "eta_b");
    args_.resize(bank_.features());
    z_.resize(bank_.features());
}

double ArffGklms::predict(std::span<const double> x) const {
    check_dim(bank_.input_dim(), x, "ArffGklms::predict");
    return predict_with(bank_, alpha_, x);
}

double ArffGklms::instantaneous_loss(std::span<const double> x, double y) const {
    const double e = y - predict(x);
    return e * e;
}

ArffDirections ArffGklms::descent_directions(std::span<const double> x, double y) const {
    check_dim(bank_.input_dim(), x, "ArffGklms::descent_directions");
    const std::size_t dim = bank_.input_dim();
    const double a = bank_.amplitude();
    const double e = y - predict_with(bank_, alpha_, x);

    ArffDirections d;
    d.alpha.resize(bank_.features());
    d.omegas.resize(bank_.features() * dim);
    d.phases.resize(bank_.features());
    for (std::size_t m = 0; m < bank_.features(); ++m) {
        const double arg = bank_.argument(m, x);
        d.alpha[m] = e * a * std::cos(arg);
        const double g = e * alpha_[m] * a * std::sin(arg);
        for (std::size_t l = 0; l < dim; ++l) d.omegas[m * dim + l] = -g * x[l];
        d.phases[m] = -g;
    }
    return d;
}

StepOutcome ArffGklms::step(std::span<const double> x, double y) {
    check_sample(bank_.input_dim(), x, y, "ArffGklms::step");
    const std::size_t n = steps_++;
    const double a = bank_.amplitude();
    const double prediction = evaluate_features(bank_, alpha_, x, args_.data(), z_.data());
    const double e = y - prediction;

    bool finite = true;
    for (std::size_t m = 0; m < bank_.features(); ++m) {
        // pre-update alpha_m
        const double g = e * alpha_[m] * a * std::sin(args_[m]);
        alpha_[m] += eta_.alpha * e * z_[m];
        const std::span<double> w = bank_.omega(m);
        for (std::size_t l = 0; l < w.size(); ++l) {
            w[l] -= eta_.omega * g * x[l];
            finite = finite && std::isfinite(w[l]);
        }
        bank_.phase(m) -= eta_.phase * g;
        finite = finite && std::isfinite(alpha_[m]) && std::isfinite(bank_.phase(m));
    }
    if (!finite) throw DivergenceError("ARFF-GKLMS", n);
    return {prediction, e, bank_.features()};
}

// RffGklms

RffGklms::RffGklms(FeatureBank bank, double eta_alpha)
    : RffGklms(std::move(bank), std::vector<double>{}, eta_alpha) {}

RffGklms::RffGklms(FeatureBank bank, std::vector<double> alpha, double eta_alpha)
    : bank_(std::move(bank)), eta_alpha_(eta_alpha) {
    if (bank_.features() == 0 || bank_.input_dim() == 0) throw UsageError("RffGklms: empty bank");
    alpha_ = alpha.empty() ? std::vector<double>(bank_.features(), 0.0)
                           : checked_alpha(std::move(alpha), bank_);
    check_step_size(eta_alpha_, "eta_alpha");
    z_.resize(bank_.features());
}

double RffGklms::predict(std::span<const double> x) const {
    check_dim(bank_.input_dim(), x, "RffGklms::predict");
    return predict_with(bank_, alpha_, x);
}

StepOutcome RffGklms::step(std::span<const double> x, double y) {
    check_sample(bank_.input_dim(), x, y, "RffGklms::step");
    const std::size_t n = steps_++;
    const double prediction = evaluate_features(bank_, alpha_, x, nullptr, z_.data());
    const double e = y - prediction;
    bool finite = true;
    for (std::size_t m = 0; m < bank_.features(); ++m) {
        alpha_[m] += eta_alpha_ * e * z_[m];
        finite = finite && std::isfinite(alpha_[m]);
    }
    if (!finite) throw DivergenceError("RFF-GKLMS", n);
    return {prediction, e, bank_.features()};
}

// GklmsCs

GklmsCs::GklmsCs(GaussianKernel kernel, std::size_t input_dim, double eta_alpha,
                 double delta_kappa, std::optional<std::size_t> capacity)
    : kernel_(kernel),
      dict_(input_dim, capacity),
      eta_alpha_(eta_alpha),
      delta_kappa_(delta_kappa) {
    check_step_size(eta_alpha_, "eta_alpha");
    if (!(delta_kappa > 0.0 && delta_kappa < 1.0)) {
        throw ConfigError("delta_kappa must lie in (0, 1)");
    }
    if (capacity && *capacity == 0) throw ConfigError("dictionary capacity must be positive");
}

double GklmsCs::predict(std::span<const double> x) const {
    check_dim(dict_.input_dim(), x, "GklmsCs::predict");
    double prediction = 0.0;
    for (std::size_t j = 0; j < dict_.size(); ++j) {
        prediction += weights_[j] * kernel_(x, dict_.center(j));
    }
    return prediction;
}

StepOutcome GklmsCs::step(std::span<const double> x, double y) {
    check_sample(dict_.input_dim(), x, y, "GklmsCs::step");
    const std::size_t n = steps_++;
    if (coherence_admit(kernel_, dict_, x, delta_kappa_) == Admission::admit) {
        weights_.push_back(0.0);
    }
    k_.resize(dict_.size());
    kernelized_input_into(kernel_, dict_, x, k_);
    double prediction = 0.0;
    for (std::size_t j = 0; j < k_.size(); ++j) prediction += weights_[j] * k_[j];
    const double e = y - prediction;
    bool finite = true;
    for (std::size_t j = 0; j < k_.size(); ++j) {
        weights_[j] += eta_alpha_ * e * k_[j];
        finite = finite && std::isfinite(weights_[j]);
    }
    if (!finite) throw DivergenceError("GKLMS-CS", n);
    return {prediction, e, dict_.size()};
}

}  // namespace arffklms
