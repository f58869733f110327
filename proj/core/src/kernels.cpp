#include "arffklms/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arffklms/error.hpp"

namespace arffklms {

GaussianKernel::GaussianKernel(double xi) : xi_(xi), inv_two_xi_sq_(0.0) {
    if (!(xi > 0.0) || !std::isfinite(xi)) {
        throw ConfigError("GaussianKernel: bandwidth must be positive and finite");
    }
    inv_two_xi_sq_ = 1.0 / (2.0 * xi * xi);
}

double GaussianKernel::operator()(std::span<const double> x, std::span<const double> x_prime) const {
    if (x.size() != x_prime.size()) {
        throw UsageError("kernel_eval: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(x_prime.size()) + ")");
    }
    double sq = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) {
        const double d = x[l] - x_prime[l];
        sq += d * d;
    }
    return std::exp(-sq * inv_two_xi_sq_);
}

double kernel_eval(const GaussianKernel& k, std::span<const double> x,
                   std::span<const double> x_prime) {
    return k(x, x_prime);
}

Dictionary::Dictionary(std::size_t input_dim, std::optional<std::size_t> capacity)
    : input_dim_(input_dim), capacity_(capacity) {
    if (input_dim == 0) throw UsageError("Dictionary: input dimension must be positive");
}

void Dictionary::append(std::span<const double> x) {
    if (x.size() != input_dim_) {
        throw UsageError("Dictionary: center has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(input_dim_));
    }
    if (full()) throw UsageError("Dictionary: capacity reached");
    flat_.insert(flat_.end(), x.begin(), x.end());
}

void kernelized_input_into(const GaussianKernel& k, const Dictionary& dict,
                           std::span<const double> x, std::span<double> out) {
    if (dict.empty()) throw UsageError("kernelized_input: empty dictionary");
    if (out.size() != dict.size()) throw UsageError("kernelized_input: output span has wrong size");
    for (std::size_t j = 0; j < dict.size(); ++j) out[j] = k(x, dict.center(j));
}

std::vector<double> kernelized_input(const GaussianKernel& k, const Dictionary& dict,
                                     std::span<const double> x) {
    std::vector<double> out(dict.size());
    kernelized_input_into(k, dict, x, out);
    return out;
}

Admission coherence_admit(const GaussianKernel& k, Dictionary& dict, std::span<const double> x,
                          double delta_kappa) {
    if (!(delta_kappa > 0.0 && delta_kappa < 1.0)) {
        throw UsageError("coherence_admit: delta_kappa must lie in (0, 1)");
    }
    if (x.size() != dict.input_dim()) throw UsageError("coherence_admit: dimension mismatch");
    if (dict.full()) return Admission::reject;
    for (std::size_t j = 0; j < dict.size(); ++j) {
        if (std::abs(k(x, dict.center(j))) > delta_kappa) return Admission::reject;
    }
    dict.append(x);
    return Admission::admit;
}

}  // namespace arffklms
