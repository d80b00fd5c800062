#include "morpho/analysis/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace morpho {

double dtw(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("dtw of an empty signal");
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Two rolling rows of the cumulative cost matrix.
    std::vector<double> prev(b.size(), kInf);
    std::vector<double> curr(b.size(), kInf);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double cost = std::abs(a[i] - b[j]);
            double reach;
            if (i == 0 && j == 0) {
                reach = 0.0;
            } else {
                reach = kInf;
                if (i > 0) reach = std::min(reach, prev[j]);
                if (j > 0) reach = std::min(reach, curr[j - 1]);
                if (i > 0 && j > 0) reach = std::min(reach, prev[j - 1]);
            }
            curr[j] = reach + cost;
        }
        std::swap(prev, curr);
    }
    return prev.back();
}

std::vector<double> downsample(std::span<const double> signal, std::size_t max_points) {
    if (max_points == 0) throw std::invalid_argument("max_points must be positive");
    if (signal.size() <= max_points) return {signal.begin(), signal.end()};
    const std::size_t stride = (signal.size() + max_points - 1) / max_points;
    std::vector<double> out;
    out.reserve(max_points);
    for (std::size_t i = 0; i < signal.size(); i += stride) out.push_back(signal[i]);
    return out;
}

double aggregate_dtw(std::span<const TrialResult> trials, std::size_t max_points) {
    if (trials.size() < 2) throw std::invalid_argument("aggregate dtw needs at least two environments");
    std::vector<std::vector<double>> s1, s2;
    for (const auto& t : trials) {
        s1.push_back(downsample(t.sensor_trace_1, max_points));
        s2.push_back(downsample(t.sensor_trace_2, max_points));
    }
    double sum1 = 0.0;
    double sum2 = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        for (std::size_t j = i + 1; j < trials.size(); ++j) {
            sum1 += dtw(s1[i], s1[j]);
            sum2 += dtw(s2[i], s2[j]);
            ++pairs;
        }
    }
    return 0.5 * (sum1 / static_cast<double>(pairs) + sum2 / static_cast<double>(pairs));
}

double aggregate_dtw(const BodyDesign& design, const Policy& policy, const EnvironmentSet& envset,
                     const SimProfile& profile, std::size_t max_points) {
    const auto trials = evaluate_all(design, policy, envset, profile);
    return aggregate_dtw(trials, max_points);
}

}  // namespace morpho
