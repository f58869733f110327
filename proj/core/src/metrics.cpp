#include "arffklms/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arffklms/error.hpp"

namespace arffklms {

CurveAccumulator::CurveAccumulator(std::size_t length, bool keep_runs)
    : sum_(length, 0.0), keep_runs_(keep_runs) {}

void CurveAccumulator::add(std::span<const double> values) {
    if (values.size() != sum_.size()) {
        throw UsageError("aggregate_runs: curve of length " + std::to_string(values.size()) +
                         " does not match length " + std::to_string(sum_.size()));
    }
    for (std::size_t n = 0; n < values.size(); ++n) sum_[n] += values[n];
    if (keep_runs_) per_run_.emplace_back(values.begin(), values.end());
    ++runs_;
}

McAggregate CurveAccumulator::finish() const {
    McAggregate agg;
    agg.runs = runs_;
    agg.mean = sum_;
    if (runs_ > 0) {
        const double count = static_cast<double>(runs_);
        for (auto& v : agg.mean) v /= count;
    }
    agg.per_run = per_run_;
    return agg;
}

McAggregate aggregate_runs(std::span<const LearningCurve> curves, bool keep_runs) {
    if (curves.empty()) throw UsageError("aggregate_runs: no curves");
    CurveAccumulator acc(curves.front().n_steps(), keep_runs);
    for (const auto& c : curves) acc.add(c.values);
    return acc.finish();
}

double tail_mean(std::span<const double> values, std::size_t window) {
    if (window == 0 || window > values.size()) {
        throw UsageError("steady-state window " + std::to_string(window) +
                         " must lie in [1, " + std::to_string(values.size()) + "]");
    }
    double acc = 0.0;
    for (double v : values.subspan(values.size() - window)) acc += v;
    return acc / static_cast<double>(window);
}

double steady_state_emse(const McAggregate& agg, std::size_t window) {
    return tail_mean(agg.mean, window);
}

double to_db(double x) {
    if (!(x > 0.0)) throw DomainError("to_db: argument must be positive");
    return 10.0 * std::log10(x);
}

DisplacementStats displacement(std::span<const double> from, std::span<const double> to,
                               std::size_t dim) {
    if (dim == 0 || from.size() != to.size() || from.size() % dim != 0) {
        throw UsageError("displacement: snapshots must have matching D x L shapes");
    }
    DisplacementStats s;
    const std::size_t rows = from.size() / dim;
    if (rows == 0) return s;
    for (std::size_t m = 0; m < rows; ++m) {
        double sq = 0.0;
        for (std::size_t l = 0; l < dim; ++l) {
            const double d = to[m * dim + l] - from[m * dim + l];
            sq += d * d;
        }
        const double r = std::sqrt(sq);
        s.max = std::max(s.max, r);
        s.mean += r;
    }
    s.mean /= static_cast<double>(rows);
    return s;
}

}  // namespace arffklms
