#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace arffklms {

/// exp(-||x - x'||^2 / (2 xi^2)).
class GaussianKernel {
public:
    /// Throws ConfigError unless xi is positive and finite.
    explicit GaussianKernel(double xi);

    double xi() const noexcept { return xi_; }

    /// Throws UsageError on dimension mismatch.
    double operator()(std::span<const double> x, std::span<const double> x_prime) const;

private:
    double xi_;
    double inv_two_xi_sq_;
};

double kernel_eval(const GaussianKernel& k, std::span<const double> x,
                   std::span<const double> x_prime);

/// Ordered set of centers sharing one input dimension. Centers are never removed.
class Dictionary {
public:
    explicit Dictionary(std::size_t input_dim, std::optional<std::size_t> capacity = std::nullopt);

    std::size_t size() const noexcept { return input_dim_ == 0 ? 0 : flat_.size() / input_dim_; }
    bool empty() const noexcept { return flat_.empty(); }
    std::size_t input_dim() const noexcept { return input_dim_; }
    std::optional<std::size_t> capacity() const noexcept { return capacity_; }
    bool full() const noexcept { return capacity_ && size() >= *capacity_; }

    std::span<const double> center(std::size_t j) const noexcept {
        return {flat_.data() + j * input_dim_, input_dim_};
    }

    /// Throws UsageError on dimension mismatch or when at capacity.
    void append(std::span<const double> x);

private:
    std::vector<double> flat_;
    std::size_t input_dim_;
    std::optional<std::size_t> capacity_;
};

/// Component j is k(x, center_j). Throws UsageError for an empty dictionary.
std::vector<double> kernelized_input(const GaussianKernel& k, const Dictionary& dict,
                                     std::span<const double> x);
void kernelized_input_into(const GaussianKernel& k, const Dictionary& dict,
                           std::span<const double> x, std::span<double> out);

enum class Admission { admit, reject };

/// Coherence criterion: admit x when the dictionary is empty or
/// max_j |k(x, center_j)| <= delta_kappa. Admitted inputs are appended.
/// A full dictionary rejects everything.
Admission coherence_admit(const GaussianKernel& k, Dictionary& dict, std::span<const double> x,
                          double delta_kappa);

}  // namespace arffklms
