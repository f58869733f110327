#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace arffklms {

/// Per-iteration values in linear scale.
struct LearningCurve {
    std::string label;
    std::vector<double> values;

    std::size_t n_steps() const noexcept { return values.size(); }
};

struct McAggregate {
    std::vector<double> mean;
    std::size_t runs = 0;
    std::vector<std::vector<double>> per_run;  // empty unless requested
};

/// Squared a-priori error with the observation noise excluded.
inline double emse_sample(double clean, double prediction) noexcept {
    const double d = clean - prediction;
    return d * d;
}

/// Pointwise mean that adds curves in the order they are supplied.
class CurveAccumulator {
public:
    explicit CurveAccumulator(std::size_t length, bool keep_runs = false);

    /// Throws UsageError if the curve length differs.
    void add(std::span<const double> values);

    std::size_t runs() const noexcept { return runs_; }
    McAggregate finish() const;

private:
    std::vector<double> sum_;
    std::size_t runs_ = 0;
    bool keep_runs_;
    std::vector<std::vector<double>> per_run_;
};

/// Throws UsageError for an empty list or ragged lengths.
McAggregate aggregate_runs(std::span<const LearningCurve> curves, bool keep_runs = false);

inline constexpr std::size_t default_steady_state_window = 5000;

/// Mean of the last `window` entries of the mean curve.
/// Throws UsageError when window is zero or longer than the curve.
double steady_state_emse(const McAggregate& agg, std::size_t window = default_steady_state_window);
double tail_mean(std::span<const double> values, std::size_t window);

/// 10 log10(x). Throws DomainError for x <= 0.
double to_db(double x);

struct DisplacementStats {
    double max = 0.0;
    double mean = 0.0;
};

/// Euclidean displacement of each row between two row-major D x dim snapshots.
DisplacementStats displacement(std::span<const double> from, std::span<const double> to,
                               std::size_t dim);

}  // namespace arffklms
