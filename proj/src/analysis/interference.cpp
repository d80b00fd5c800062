#include "morpho/analysis/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace morpho {

double angle_to_ones(std::span<const double> delta) {
    if (delta.empty()) throw std::invalid_argument("angle of a zero vector is undefined");
    const double n = static_cast<double>(delta.size());
    double dot = 0.0;
    for (double d : delta) dot += d;
    const double mean = dot / n;
    // |delta|^2 n - dot^2 = n * sum (d_i - mean)^2; this form is exact for
    // vectors parallel to the ones vector, where acos of the cosine is not.
    double spread = 0.0;
    for (double d : delta) spread += (d - mean) * (d - mean);
    if (dot == 0.0 && spread == 0.0) throw std::invalid_argument("angle of a zero vector is undefined");
    double theta = std::atan2(std::sqrt(n * spread), dot) * 180.0 / std::numbers::pi;
    // atan2 with a non-negative first argument is confined to [0, 180]; the
    // reflection below never fires.
    if (theta > 180.0) theta = 360.0 - theta;
    return theta;
}

std::size_t champion_index(const LineageLog& log) {
    if (log.final_distances.empty()) throw std::invalid_argument("lineage log has no final population");
    std::size_t best = 0;
    double best_worst = 0.0;
    for (std::size_t c = 0; c < log.final_distances.size(); ++c) {
        const auto& d = log.final_distances[c];
        const double worst = *std::max_element(d.begin(), d.end());
        if (c == 0 || worst < best_worst) {
            best = c;
            best_worst = worst;
        }
    }
    return best;
}

LineageStats lineage_stats(const LineageLog& log) {
    const std::size_t champ = champion_index(log);
    const auto& d = log.final_distances[champ];
    LineageStats s;
    s.worst_distance = *std::max_element(d.begin(), d.end());
    const auto& events = log.events.at(champ);
    s.mutations = events.size();
    if (events.empty()) return s;
    double positive = 0.0;
    for (const auto& e : events) {
        s.mean_angle += angle_to_ones(e.delta);
        double norm_sq = 0.0;
        bool all_positive = true;
        for (double v : e.delta) {
            norm_sq += v * v;
            all_positive = all_positive && v > 0.0;
        }
        s.mean_norm += std::sqrt(norm_sq);
        positive += all_positive ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(events.size());
    s.mean_angle /= n;
    s.mean_norm /= n;
    s.all_positive_fraction = positive / n;
    return s;
}

LineageMetrics lineage_metrics(std::span<const LineageLog> logs, std::size_t k) {
    if (logs.empty()) throw std::invalid_argument("no lineage logs");
    LineageMetrics out;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const auto& log : logs) {
        if (log.k != k) throw std::invalid_argument("lineage log environment count does not match k");
        const auto s = lineage_stats(log);
        out.m1 += s.worst_distance;
        ++out.runs;
        if (s.mutations == 0) continue;
        m2 += s.mean_angle;
        m3 += s.mean_norm;
        m4 += s.all_positive_fraction;
        ++out.lineage_runs;
    }
    out.m1 /= static_cast<double>(out.runs);
    if (out.lineage_runs > 0) {
        const double n = static_cast<double>(out.lineage_runs);
        out.m2 = m2 / n;
        out.m3 = m3 / n;
        out.m4 = m4 / n;
    }
    return out;
}

}  // namespace morpho
